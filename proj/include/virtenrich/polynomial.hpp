#ifndef VIRTENRICH_POLYNOMIAL_HPP
#define VIRTENRICH_POLYNOMIAL_HPP

#include <Eigen/Dense>

#include <array>
#include <span>

namespace virtenrich {

using Index = Eigen::Index;
using Exponent = std::array<int, 3>;

/// Largest total degree supported by the monomial tables.
inline constexpr int kMaxMonomialDegree = 24;

/// dim P_degree in nvars variables; 0 when degree < 0 (P_k = {0} for k < 0).
Index poly_dim(int nvars, int degree);

/// Monomial exponents of total degree <= degree, graded by degree and
/// lexicographically descending within a degree. Unused slots are zero.
std::span<const Exponent> monomial_exponents(int nvars, int degree);

/// Position of an exponent in the graded ordering.
Index monomial_index(int nvars, const Exponent& exponent);

/// Values of every monomial of degree <= degree at x.
Eigen::VectorXd monomial_values(int nvars, int degree, const Eigen::Ref<const Eigen::VectorXd>& x);

/// A polynomial in nvars variables written in the graded monomial basis.
///
/// The coordinates are whatever the owner chooses; throughout the library they
/// are the affine coordinates of the entity the polynomial lives on. Degree -1
/// is the zero polynomial with an empty coefficient vector.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(int nvars, int degree);
  Polynomial(int nvars, int degree, Eigen::VectorXd coefficients);

  static Polynomial constant(int nvars, double value);

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  Eigen::VectorXd& coefficients() { return coefficients_; }

  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double operator()(double t) const;

  Polynomial derivative(int var) const;
  Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::MatrixXd hessian(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// The same polynomial written in the basis of a (not smaller) degree.
  Polynomial elevated(int degree) const;

  /// Largest coefficient magnitude.
  double max_abs_coefficient() const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double factor);

 private:
  int nvars_ = 1;
  int degree_ = -1;
  Eigen::VectorXd coefficients_;
};

Polynomial operator+(Polynomial lhs, const Polynomial& rhs);
Polynomial operator-(Polynomial lhs, const Polynomial& rhs);
Polynomial operator*(double factor, Polynomial p);
Polynomial operator-(Polynomial p);

/// Equispaced lattice of P_degree on the reference simplex (columns are points,
/// ordered like monomial_exponents; degree 0 gives the barycenter).
const Eigen::MatrixXd& reference_lattice(int nvars, int degree);

/// The unique member of P_degree taking the given values at reference_lattice.
Polynomial fit_lattice_values(int nvars, int degree, const Eigen::Ref<const Eigen::VectorXd>& values);

/// Interpolates f (called with reference coordinates) at the reference lattice;
/// exact whenever f is itself in P_degree.
template <class F>
Polynomial interpolate_reference(int nvars, int degree, F&& f) {
  if (degree < 0) return Polynomial(nvars, -1);
  const Eigen::MatrixXd& points = reference_lattice(nvars, degree);
  Eigen::VectorXd values(points.cols());
  for (Index i = 0; i < points.cols(); ++i) values(i) = f(Eigen::VectorXd(points.col(i)));
  return fit_lattice_values(nvars, degree, values);
}

}  // namespace virtenrich

#endif  // VIRTENRICH_POLYNOMIAL_HPP
