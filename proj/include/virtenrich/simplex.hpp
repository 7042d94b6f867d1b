#ifndef VIRTENRICH_SIMPLEX_HPP
#define VIRTENRICH_SIMPLEX_HPP

#include "virtenrich/polynomial.hpp"
#include "virtenrich/quadrature.hpp"

#include <Eigen/Dense>

namespace virtenrich {

/// An m-simplex embedded in R^d, parameterized by x = origin + axes * xi with xi
/// in the reference simplex. Vertex 0 is the origin, axis i points to vertex i+1.
class SimplexGeometry {
 public:
  SimplexGeometry() = default;
  explicit SimplexGeometry(const Eigen::MatrixXd& vertices);

  int ambient_dimension() const { return static_cast<int>(vertices_.rows()); }
  int dimension() const { return static_cast<int>(vertices_.cols()) - 1; }
  const Eigen::MatrixXd& vertices() const { return vertices_; }
  Eigen::VectorXd vertex(int i) const { return vertices_.col(i); }
  Eigen::VectorXd origin() const { return vertices_.col(0); }
  const Eigen::MatrixXd& axes() const { return axes_; }

  Eigen::VectorXd to_physical(const Eigen::Ref<const Eigen::VectorXd>& xi) const;
  /// Reference coordinates of the orthogonal projection of x onto the affine hull.
  Eigen::VectorXd to_reference(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  double measure() const { return measure_; }
  double diameter() const { return diameter_; }
  Eigen::VectorXd centroid() const { return vertices_.rowwise().mean(); }

  /// d x m matrix taking reference gradients to physical (tangential) gradients.
  const Eigen::MatrixXd& gradient_map() const { return gradient_map_; }

 private:
  Eigen::MatrixXd vertices_;
  Eigen::MatrixXd axes_;
  Eigen::MatrixXd gradient_map_;
  double measure_ = 0.0;
  double diameter_ = 0.0;
};

/// Integral over the simplex of f(xi), f called with reference coordinates.
template <class F>
double integrate(const SimplexGeometry& geometry, int exactness, F&& f) {
  const QuadratureRule& rule = quadrature_rule(geometry.dimension(), exactness);
  double sum = 0.0;
  for (Eigen::Index q = 0; q < rule.weights.size(); ++q) sum += rule.weights(q) * f(Eigen::VectorXd(rule.points.col(q)));
  return sum * geometry.measure() / reference_measure(geometry.dimension());
}

/// Normalized moments (1/|G|) int_G f m_i for the reference monomials m_i of
/// degree <= degree. f is called with reference coordinates.
template <class F>
Eigen::VectorXd moments(int dimension, int degree, int exactness, F&& f) {
  Eigen::VectorXd result = Eigen::VectorXd::Zero(poly_dim(dimension, degree));
  if (degree < 0) return result;
  const QuadratureRule& rule = quadrature_rule(dimension, exactness);
  for (Eigen::Index q = 0; q < rule.weights.size(); ++q) {
    const Eigen::VectorXd xi = rule.points.col(q);
    result += (rule.weights(q) * f(xi)) * monomial_values(dimension, degree, xi);
  }
  return result / reference_measure(dimension);
}

/// Normalized reference Gram matrix (1/|ref|) int m_i m_j.
const Eigen::MatrixXd& normalized_gram(int dimension, int degree);

/// Q_{G,degree} in reference coordinates from normalized moments.
Polynomial polynomial_from_moments(int dimension, int degree, const Eigen::Ref<const Eigen::VectorXd>& moments);

/// ||Q_{G,degree} f||^2_{L2(G)} from normalized moments of f.
double projection_norm_squared(double measure, int dimension, int degree,
                               const Eigen::Ref<const Eigen::VectorXd>& moments);

/// A polynomial written in the reference coordinates of a simplex.
struct PolynomialOnSimplex {
  SimplexGeometry geometry;
  Polynomial poly;

  double value(const Eigen::Ref<const Eigen::VectorXd>& xi) const { return poly(xi); }
  double value_at(const Eigen::Ref<const Eigen::VectorXd>& x) const { return poly(geometry.to_reference(x)); }
  /// Physical (tangential, for lower-dimensional entities) gradient at xi.
  Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& xi) const;
  Eigen::MatrixXd hessian(const Eigen::Ref<const Eigen::VectorXd>& xi) const;
};

/// Orthogonal L2 projection Q_{G,degree} of a sampler of physical points. The
/// quadrature is exact for samplers of degree <= source_degree.
template <class F>
PolynomialOnSimplex l2_project(F&& sampler, const SimplexGeometry& geometry, int degree, int source_degree);

/// Moments variant used by l2_project; throws SingularGram on degenerate geometry.
PolynomialOnSimplex l2_project_moments(const SimplexGeometry& geometry, int degree,
                                       const Eigen::Ref<const Eigen::VectorXd>& moments);

template <class F>
PolynomialOnSimplex l2_project(F&& sampler, const SimplexGeometry& geometry, int degree, int source_degree) {
  const Eigen::VectorXd mu = moments(geometry.dimension(), degree, std::max(degree, 0) + std::max(source_degree, 0),
                                     [&](const Eigen::VectorXd& xi) { return sampler(geometry.to_physical(xi)); });
  return l2_project_moments(geometry, degree, mu);
}

}  // namespace virtenrich

#endif  // VIRTENRICH_SIMPLEX_HPP
