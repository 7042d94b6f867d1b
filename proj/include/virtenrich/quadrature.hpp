#ifndef VIRTENRICH_QUADRATURE_HPP
#define VIRTENRICH_QUADRATURE_HPP

#include <Eigen/Dense>

namespace virtenrich {

inline constexpr int kMaxQuadratureDegree = 40;

/// Points (columns, reference coordinates) and positive weights summing to the
/// measure of the reference simplex.
struct QuadratureRule {
  int dimension = 0;
  int exactness = 0;
  Eigen::MatrixXd points;
  Eigen::VectorXd weights;
};

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Measure of the reference simplex: 1, 1/2, 1/6.
double reference_measure(int dimension);

/// Collapsed (Duffy) tensor Gauss rule on the reference simplex of the given
/// dimension, exact for total degree <= exactness. Rules are cached.
const QuadratureRule& quadrature_rule(int dimension, int exactness);

}  // namespace virtenrich

#endif  // VIRTENRICH_QUADRATURE_HPP
