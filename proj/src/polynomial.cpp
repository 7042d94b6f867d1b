#include "virtenrich/polynomial.hpp"

#include "virtenrich/error.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace virtenrich {
namespace {

constexpr int kStride = kMaxMonomialDegree + 1;

struct MonomialTable {
  std::vector<Exponent> exponents;
  std::vector<Index> lookup;  // kStride^3 entries, -1 when absent
};

MonomialTable build_table(int nvars) {
  MonomialTable table;
  table.lookup.assign(kStride * kStride * kStride, -1);
  for (int n = 0; n <= kMaxMonomialDegree; ++n) {
    if (nvars == 1) {
      table.exponents.push_back({n, 0, 0});
    } else if (nvars == 2) {
      for (int a = n; a >= 0; --a) table.exponents.push_back({a, n - a, 0});
    } else {
      for (int a = n; a >= 0; --a)
        for (int b = n - a; b >= 0; --b) table.exponents.push_back({a, b, n - a - b});
    }
  }
  for (std::size_t i = 0; i < table.exponents.size(); ++i) {
    const Exponent& e = table.exponents[i];
    table.lookup[(e[0] * kStride + e[1]) * kStride + e[2]] = static_cast<Index>(i);
  }
  return table;
}

const MonomialTable& table_for(int nvars) {
  static const std::array<MonomialTable, 3> tables = {build_table(1), build_table(2), build_table(3)};
  if (nvars < 1 || nvars > 3) throw Error(ErrorCode::UnsupportedDegree, "monomials need 1 to 3 variables");
  return tables[nvars - 1];
}

void check_degree(int degree) {
  if (degree > kMaxMonomialDegree)
    throw Error(ErrorCode::UnsupportedDegree, "degree " + std::to_string(degree) + " exceeds monomial table");
}

}  // namespace

Index poly_dim(int nvars, int degree) {
  if (degree < 0) return 0;
  switch (nvars) {
    case 1: return degree + 1;
    case 2: return (degree + 1) * (degree + 2) / 2;
    case 3: return (degree + 1) * (degree + 2) * (degree + 3) / 6;
    default: throw Error(ErrorCode::UnsupportedDegree, "monomials need 1 to 3 variables");
  }
}

std::span<const Exponent> monomial_exponents(int nvars, int degree) {
  check_degree(degree);
  const MonomialTable& table = table_for(nvars);
  return {table.exponents.data(), static_cast<std::size_t>(poly_dim(nvars, degree))};
}

Index monomial_index(int nvars, const Exponent& e) {
  check_degree(e[0] + e[1] + e[2]);
  return table_for(nvars).lookup[(e[0] * kStride + e[1]) * kStride + e[2]];
}

Eigen::VectorXd monomial_values(int nvars, int degree, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const auto exps = monomial_exponents(nvars, std::max(degree, 0));
  Eigen::VectorXd values(poly_dim(nvars, degree));
  if (degree < 0) return values;
  Eigen::Matrix<double, 3, Eigen::Dynamic> powers(3, degree + 1);
  powers.setOnes();
  for (int v = 0; v < nvars; ++v)
    for (int p = 1; p <= degree; ++p) powers(v, p) = powers(v, p - 1) * x(v);
  for (Index i = 0; i < values.size(); ++i) {
    const Exponent& e = exps[i];
    values(i) = powers(0, e[0]) * powers(1, e[1]) * powers(2, e[2]);
  }
  return values;
}

Polynomial::Polynomial(int nvars, int degree)
    : nvars_(nvars), degree_(std::max(degree, -1)), coefficients_(Eigen::VectorXd::Zero(poly_dim(nvars, degree))) {
  check_degree(degree);
}

Polynomial::Polynomial(int nvars, int degree, Eigen::VectorXd coefficients)
    : nvars_(nvars), degree_(std::max(degree, -1)), coefficients_(std::move(coefficients)) {
  check_degree(degree);
  if (coefficients_.size() != poly_dim(nvars, degree))
    throw Error(ErrorCode::UnsupportedDegree, "coefficient count does not match dim P_k");
}

Polynomial Polynomial::constant(int nvars, double value) {
  Polynomial p(nvars, 0);
  p.coefficients_(0) = value;
  return p;
}

double Polynomial::operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (degree_ < 0) return 0.0;
  return coefficients_.dot(monomial_values(nvars_, degree_, x));
}

double Polynomial::operator()(double t) const {
  if (degree_ < 0) return 0.0;
  double value = 0.0;
  if (nvars_ == 1) {
    for (int i = degree_; i >= 0; --i) value = value * t + coefficients_(i);
    return value;
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(nvars_);
  x(0) = t;
  return (*this)(x);
}

Polynomial Polynomial::derivative(int var) const {
  if (degree_ <= 0) return Polynomial(nvars_, -1);
  Polynomial d(nvars_, degree_ - 1);
  const auto exps = monomial_exponents(nvars_, degree_);
  for (Index i = 0; i < coefficients_.size(); ++i) {
    Exponent e = exps[i];
    if (e[var] == 0) continue;
    const double factor = e[var];
    e[var] -= 1;
    d.coefficients_(monomial_index(nvars_, e)) += factor * coefficients_(i);
  }
  return d;
}

Eigen::VectorXd Polynomial::gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXd g(nvars_);
  for (int v = 0; v < nvars_; ++v) g(v) = derivative(v)(x);
  return g;
}

Eigen::MatrixXd Polynomial::hessian(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::MatrixXd h(nvars_, nvars_);
  for (int a = 0; a < nvars_; ++a) {
    const Polynomial da = derivative(a);
    for (int b = a; b < nvars_; ++b) h(a, b) = h(b, a) = da.derivative(b)(x);
  }
  return h;
}

Polynomial Polynomial::elevated(int degree) const {
  if (degree < degree_) throw Error(ErrorCode::UnsupportedDegree, "cannot lower the degree of a polynomial");
  Polynomial p(nvars_, degree);
  p.coefficients_.head(coefficients_.size()) = coefficients_;
  return p;
}

double Polynomial::max_abs_coefficient() const {
  return coefficients_.size() == 0 ? 0.0 : coefficients_.cwiseAbs().maxCoeff();
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.degree_ < 0) return *this;
  if (degree_ < 0) {
    *this = Polynomial(other.nvars_, other.degree_);
  } else if (other.degree_ > degree_) {
    *this = elevated(other.degree_);
  }
  coefficients_.head(other.coefficients_.size()) += other.coefficients_;
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.degree_ < 0) return *this;
  if (degree_ < 0) {
    *this = Polynomial(other.nvars_, other.degree_);
  } else if (other.degree_ > degree_) {
    *this = elevated(other.degree_);
  }
  coefficients_.head(other.coefficients_.size()) -= other.coefficients_;
  return *this;
}

Polynomial& Polynomial::operator*=(double factor) {
  coefficients_ *= factor;
  return *this;
}

Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
Polynomial operator*(double factor, Polynomial p) { return p *= factor; }
Polynomial operator-(Polynomial p) { return p *= -1.0; }

namespace {

struct LatticeData {
  Eigen::MatrixXd points;
  Eigen::PartialPivLU<Eigen::MatrixXd> vandermonde;
};

const LatticeData& lattice_data(int nvars, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<LatticeData>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{nvars, degree}];
  if (!slot) {
    auto data = std::make_unique<LatticeData>();
    const auto exps = monomial_exponents(nvars, degree);
    const Index n = poly_dim(nvars, degree);
    data->points.resize(nvars, n);
    for (Index i = 0; i < n; ++i)
      for (int v = 0; v < nvars; ++v)
        data->points(v, i) = degree == 0 ? 1.0 / (nvars + 1) : static_cast<double>(exps[i][v]) / degree;
    Eigen::MatrixXd vander(n, n);
    for (Index i = 0; i < n; ++i) vander.row(i) = monomial_values(nvars, degree, data->points.col(i)).transpose();
    data->vandermonde.compute(vander);
    slot = std::move(data);
  }
  return *slot;
}

}  // namespace

const Eigen::MatrixXd& reference_lattice(int nvars, int degree) { return lattice_data(nvars, degree).points; }

Polynomial fit_lattice_values(int nvars, int degree, const Eigen::Ref<const Eigen::VectorXd>& values) {
  if (degree < 0) return Polynomial(nvars, -1);
  const LatticeData& data = lattice_data(nvars, degree);
  if (values.size() != data.points.cols())
    throw Error(ErrorCode::UnsupportedDegree, "lattice value count does not match dim P_k");
  return Polynomial(nvars, degree, data.vandermonde.solve(values));
}

}  // namespace virtenrich
