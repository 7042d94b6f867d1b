#include "virtenrich/polynomial.hpp"

#include <doctest.h>

#include <random>

using namespace virtenrich;

TEST_CASE("poly_dim counts monomials") {
  CHECK(poly_dim(1, 3) == 4);
  CHECK(poly_dim(2, 3) == 10);
  CHECK(poly_dim(3, 4) == 35);
  CHECK(poly_dim(2, -1) == 0);
  CHECK(poly_dim(3, 0) == 1);
}

TEST_CASE("graded ordering and monomial_index agree") {
  for (int d = 1; d <= 3; ++d) {
    const auto exps = monomial_exponents(d, 6);
    for (std::size_t i = 0; i < exps.size(); ++i) CHECK(monomial_index(d, exps[i]) == static_cast<Index>(i));
    int previous = 0;
    for (const Exponent& e : exps) {
      const int total = e[0] + e[1] + e[2];
      CHECK(total >= previous);
      previous = total;
    }
  }
}

TEST_CASE("x^2 value, gradient and hessian at (1,0)") {
  Polynomial p(2, 2);
  p.coefficients()(monomial_index(2, {2, 0, 0})) = 1.0;
  const Eigen::Vector2d x(1.0, 0.0);
  CHECK(p(x) == doctest::Approx(1.0));
  CHECK(p.gradient(x)(0) == doctest::Approx(2.0));
  CHECK(p.gradient(x)(1) == doctest::Approx(0.0));
  const Eigen::MatrixXd h = p.hessian(x);
  CHECK(h(0, 0) == doctest::Approx(2.0));
  CHECK(h(0, 1) == doctest::Approx(0.0));
  CHECK(h(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("affine polynomials have zero hessian") {
  const Polynomial p(3, 1, Eigen::Vector4d(1.0, -2.0, 0.5, 3.0));
  CHECK(p.hessian(Eigen::Vector3d(0.3, 0.1, 0.7)).norm() == 0.0);
}

TEST_CASE("gradient matches central finite differences for a random quartic") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  for (int d = 1; d <= 3; ++d) {
    Eigen::VectorXd c(poly_dim(d, 4));
    for (Index i = 0; i < c.size(); ++i) c(i) = n(rng);
    const Polynomial p(d, 4, c);
    Eigen::VectorXd x = Eigen::VectorXd::Constant(d, 0.3);
    const Eigen::VectorXd g = p.gradient(x);
    const double step = 1e-5;
    for (int a = 0; a < d; ++a) {
      Eigen::VectorXd xp = x, xm = x;
      xp(a) += step;
      xm(a) -= step;
      const double fd = (p(xp) - p(xm)) / (2 * step);
      CHECK(std::abs(fd - g(a)) <= 1e-6 * std::max(1.0, std::abs(g(a))));
    }
  }
}

TEST_CASE("derivative of a constant is the zero polynomial") {
  const Polynomial c = Polynomial::constant(2, 3.0);
  const Polynomial d = c.derivative(0);
  CHECK(d.degree() == -1);
  CHECK(d(Eigen::Vector2d(0.2, 0.4)) == 0.0);
}

TEST_CASE("elevation and arithmetic preserve values") {
  const Polynomial p(2, 2, Eigen::VectorXd::LinSpaced(6, 1.0, 2.0));
  const Polynomial q(2, 3, Eigen::VectorXd::LinSpaced(10, -1.0, 1.0));
  const Eigen::Vector2d x(0.25, 0.6);
  CHECK(p.elevated(5)(x) == doctest::Approx(p(x)));
  CHECK((p + q)(x) == doctest::Approx(p(x) + q(x)));
  CHECK((p - q)(x) == doctest::Approx(p(x) - q(x)));
  CHECK((2.5 * p)(x) == doctest::Approx(2.5 * p(x)));
  Polynomial zero(2, -1);
  zero += p;
  CHECK(zero(x) == doctest::Approx(p(x)));
  Polynomial z2(2, -1);
  z2 -= p;
  CHECK(z2(x) == doctest::Approx(-p(x)));
}

TEST_CASE("lattice interpolation reproduces polynomials of its degree") {
  for (int d = 1; d <= 3; ++d)
    for (int k = 0; k <= 5; ++k) {
      const Polynomial p(d, k, Eigen::VectorXd::LinSpaced(poly_dim(d, k), -1.0, 2.0));
      const Polynomial q = interpolate_reference(d, k, [&](const Eigen::VectorXd& xi) { return p(xi); });
      CHECK((q.coefficients() - p.coefficients()).lpNorm<Eigen::Infinity>() <= 1e-10);
    }
}
