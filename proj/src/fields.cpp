#include "virtenrich/fields.hpp"

#include "virtenrich/error.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace virtenrich {
namespace {

Field sinsin(int d) {
  using std::numbers::pi;
  Field f;
  f.name = "sinsin";
  f.dimension = d;
  f.value = [d](const Eigen::VectorXd& x) {
    double v = 1.0;
    for (int i = 0; i < d; ++i) v *= std::sin(pi * x(i));
    return v;
  };
  f.gradient = [d](const Eigen::VectorXd& x) {
    Eigen::VectorXd g(d);
    for (int i = 0; i < d; ++i) {
      g(i) = pi * std::cos(pi * x(i));
      for (int j = 0; j < d; ++j)
        if (j != i) g(i) *= std::sin(pi * x(j));
    }
    return g;
  };
  f.hessian = [d](const Eigen::VectorXd& x) {
    Eigen::VectorXd s(d), c(d);
    for (int i = 0; i < d; ++i) {
      s(i) = std::sin(pi * x(i));
      c(i) = std::cos(pi * x(i));
    }
    Eigen::MatrixXd h(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double v = i == j ? -pi * pi * s(i) : pi * pi * c(i) * c(j);
        for (int l = 0; l < d; ++l)
          if (l != i && l != j) v *= s(l);
        h(i, j) = v;
      }
    return h;
  };
  return f;
}

Field min_xy(int d) {
  Field f;
  f.name = "min-xy";
  f.dimension = d;
  f.value = [](const Eigen::VectorXd& x) { return std::min(x(0), x(1)); };
  f.gradient = [d](const Eigen::VectorXd& x) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(d);
    g(x(0) < x(1) ? 0 : 1) = 1.0;
    return g;
  };
  f.hessian = [d](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(d, d); };
  return f;
}

}  // namespace

Field polynomial_field(const Polynomial& p) {
  const int d = p.nvars();
  Field f;
  f.name = "poly";
  f.dimension = d;
  f.degree = std::max(p.degree(), 0);
  f.value = [p](const Eigen::VectorXd& x) { return p(x); };
  f.gradient = [p](const Eigen::VectorXd& x) { return p.gradient(x); };
  f.hessian = [p](const Eigen::VectorXd& x) { return p.hessian(x); };
  return f;
}

Field make_field(std::string_view spec, int dimension) {
  if (dimension != 2 && dimension != 3) throw Error(ErrorCode::UsageError, "field dimension must be 2 or 3");
  if (spec == "sinsin") return sinsin(dimension);
  if (spec == "min-xy") return min_xy(dimension);
  if (spec == "zero") {
    Field f = polynomial_field(Polynomial(dimension, 0));
    f.name = "zero";
    return f;
  }
  if (spec.starts_with("poly:")) {
    std::vector<double> coeffs;
    std::string_view rest = spec.substr(5);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string token(rest.substr(0, comma));
      try {
        std::size_t used = 0;
        coeffs.push_back(std::stod(token, &used));
        if (used != token.size()) throw std::invalid_argument(token);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "bad polynomial coefficient '" + token + "'");
      }
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (coeffs.empty()) throw Error(ErrorCode::ParseError, "poly: needs at least one coefficient");
    int degree = 0;
    while (poly_dim(dimension, degree) < static_cast<Index>(coeffs.size())) ++degree;
    if (degree > kMaxMonomialDegree) throw Error(ErrorCode::UnsupportedDegree, "polynomial degree too large");
    Eigen::VectorXd c = Eigen::VectorXd::Zero(poly_dim(dimension, degree));
    for (std::size_t i = 0; i < coeffs.size(); ++i) c(static_cast<Index>(i)) = coeffs[i];
    Field f = polynomial_field(Polynomial(dimension, degree, c));
    f.name = std::string(spec);
    return f;
  }
  throw Error(ErrorCode::UsageError, "unknown field '" + std::string(spec) + "'");
}

}  // namespace virtenrich
