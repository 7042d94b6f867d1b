#include "virtenrich/simplex.hpp"

#include "virtenrich/error.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace virtenrich {

SimplexGeometry::SimplexGeometry(const Eigen::MatrixXd& vertices) : vertices_(vertices) {
  const Eigen::Index m = vertices.cols() - 1;
  axes_ = vertices.rightCols(m).colwise() - vertices.col(0);
  const Eigen::MatrixXd metric = axes_.transpose() * axes_;
  const double det = metric.determinant();
  double factorial = 1.0;
  for (Eigen::Index i = 2; i <= m; ++i) factorial *= static_cast<double>(i);
  measure_ = det > 0.0 ? std::sqrt(det) / factorial : 0.0;
  if (m > 0 && det > 0.0) gradient_map_ = axes_ * metric.inverse();
  else gradient_map_ = Eigen::MatrixXd::Zero(vertices.rows(), m);
  for (Eigen::Index i = 0; i < vertices.cols(); ++i)
    for (Eigen::Index j = i + 1; j < vertices.cols(); ++j)
      diameter_ = std::max(diameter_, (vertices.col(i) - vertices.col(j)).norm());
}

Eigen::VectorXd SimplexGeometry::to_physical(const Eigen::Ref<const Eigen::VectorXd>& xi) const {
  return vertices_.col(0) + axes_ * xi;
}

Eigen::VectorXd SimplexGeometry::to_reference(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return gradient_map_.transpose() * (x - vertices_.col(0));
}

Eigen::VectorXd PolynomialOnSimplex::gradient(const Eigen::Ref<const Eigen::VectorXd>& xi) const {
  return geometry.gradient_map() * poly.gradient(xi);
}

Eigen::MatrixXd PolynomialOnSimplex::hessian(const Eigen::Ref<const Eigen::VectorXd>& xi) const {
  const Eigen::MatrixXd& map = geometry.gradient_map();
  return map * poly.hessian(xi) * map.transpose();
}

namespace {

using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXld = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Monomial Gram matrices are badly conditioned for higher degrees, so the
// factorization is done in extended precision from the closed-form entries
// d! prod (a_i + b_i)! / (|a + b| + d)!.
struct GramData {
  Eigen::MatrixXd gram;
  Eigen::LLT<MatrixXld> factor;

  Eigen::VectorXd solve(const Eigen::Ref<const Eigen::VectorXd>& rhs) const {
    return factor.solve(rhs.cast<long double>()).cast<double>();
  }
};

long double factorial(int n) {
  long double r = 1.0L;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

const GramData& gram_data(int dimension, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<GramData>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dimension, degree}];
  if (!slot) {
    auto data = std::make_unique<GramData>();
    const auto exps = monomial_exponents(dimension, degree);
    const Index n = static_cast<Index>(exps.size());
    MatrixXld gram(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        long double num = factorial(dimension);
        int total = 0;
        for (int a = 0; a < dimension; ++a) {
          num *= factorial(exps[i][a] + exps[j][a]);
          total += exps[i][a] + exps[j][a];
        }
        gram(i, j) = num / factorial(total + dimension);
      }
    data->gram = gram.cast<double>();
    data->factor.compute(gram);
    if (data->factor.info() != Eigen::Success) throw Error(ErrorCode::SingularGram, "reference Gram matrix");
    slot = std::move(data);
  }
  return *slot;
}

}  // namespace

const Eigen::MatrixXd& normalized_gram(int dimension, int degree) { return gram_data(dimension, degree).gram; }

Polynomial polynomial_from_moments(int dimension, int degree, const Eigen::Ref<const Eigen::VectorXd>& moments) {
  if (degree < 0) return Polynomial(dimension, -1);
  return Polynomial(dimension, degree, gram_data(dimension, degree).solve(moments));
}

double projection_norm_squared(double measure, int dimension, int degree,
                               const Eigen::Ref<const Eigen::VectorXd>& moments) {
  if (degree < 0) return 0.0;
  return measure * moments.dot(gram_data(dimension, degree).solve(moments));
}

PolynomialOnSimplex l2_project_moments(const SimplexGeometry& geometry, int degree,
                                       const Eigen::Ref<const Eigen::VectorXd>& moments) {
  const double scale = std::pow(geometry.diameter(), geometry.dimension());
  if (!(geometry.measure() > 1e-14 * scale))
    throw Error(ErrorCode::SingularGram, "degenerate entity geometry in L2 projection");
  return {geometry, polynomial_from_moments(geometry.dimension(), degree, moments)};
}

}  // namespace virtenrich
