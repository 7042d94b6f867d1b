#ifndef VIRTENRICH_FIELDS_HPP
#define VIRTENRICH_FIELDS_HPP

#include "virtenrich/polynomial.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <string_view>

namespace virtenrich {

/// An analytic scalar field on R^d with its first and second derivatives.
struct Field {
  std::string name;
  int dimension = 2;
  int degree = -1;  ///< polynomial degree, -1 for non-polynomial fields
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hessian;
};

/// A polynomial in physical coordinates as a field.
Field polynomial_field(const Polynomial& p);

/// Registered fields: `sinsin`, `min-xy`, `zero` and `poly:c0,c1,...` with
/// coefficients of the graded physical monomials (padded to a full degree).
Field make_field(std::string_view spec, int dimension);

}  // namespace virtenrich

#endif  // VIRTENRICH_FIELDS_HPP
