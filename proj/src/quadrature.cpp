#include "virtenrich/quadrature.hpp"

#include "virtenrich/error.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace virtenrich {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0, p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int j = 2; j <= n; ++j) {
    const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return {p1, n * (x * p1 - p0) / (x * x - 1.0)};
}

}  // namespace

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(n, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(n, x).second;
    nodes(i) = 0.5 * (1.0 - x);
    weights(i) = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

double reference_measure(int dimension) {
  switch (dimension) {
    case 1: return 1.0;
    case 2: return 0.5;
    case 3: return 1.0 / 6.0;
    default: throw Error(ErrorCode::UnsupportedDegree, "reference simplex must have dimension 1..3");
  }
}

namespace {

int points_for(int degree) { return degree / 2 + 1; }

std::unique_ptr<QuadratureRule> build_rule(int dimension, int exactness) {
  auto rule = std::make_unique<QuadratureRule>();
  rule->dimension = dimension;
  rule->exactness = exactness;
  Eigen::VectorXd xu, wu, xv, wv, xw, ww;
  if (dimension == 1) {
    gauss_legendre(points_for(exactness), xu, wu);
    rule->points = xu.transpose();
    rule->weights = wu;
    return rule;
  }
  if (dimension == 2) {
    // xi1 = u, xi2 = (1 - u) v, Jacobian (1 - u).
    gauss_legendre(points_for(exactness + 1), xu, wu);
    gauss_legendre(points_for(exactness), xv, wv);
    const Eigen::Index n = xu.size() * xv.size();
    rule->points.resize(2, n);
    rule->weights.resize(n);
    Eigen::Index q = 0;
    for (Eigen::Index i = 0; i < xu.size(); ++i)
      for (Eigen::Index j = 0; j < xv.size(); ++j, ++q) {
        rule->points(0, q) = xu(i);
        rule->points(1, q) = (1.0 - xu(i)) * xv(j);
        rule->weights(q) = wu(i) * wv(j) * (1.0 - xu(i));
      }
    return rule;
  }
  // xi1 = u, xi2 = (1 - u) v, xi3 = (1 - u)(1 - v) w, Jacobian (1 - u)^2 (1 - v).
  gauss_legendre(points_for(exactness + 2), xu, wu);
  gauss_legendre(points_for(exactness + 1), xv, wv);
  gauss_legendre(points_for(exactness), xw, ww);
  const Eigen::Index n = xu.size() * xv.size() * xw.size();
  rule->points.resize(3, n);
  rule->weights.resize(n);
  Eigen::Index q = 0;
  for (Eigen::Index i = 0; i < xu.size(); ++i)
    for (Eigen::Index j = 0; j < xv.size(); ++j)
      for (Eigen::Index l = 0; l < xw.size(); ++l, ++q) {
        const double u = xu(i), v = xv(j), w = xw(l);
        rule->points(0, q) = u;
        rule->points(1, q) = (1.0 - u) * v;
        rule->points(2, q) = (1.0 - u) * (1.0 - v) * w;
        rule->weights(q) = wu(i) * wv(j) * ww(l) * (1.0 - u) * (1.0 - u) * (1.0 - v);
      }
  return rule;
}

}  // namespace

const QuadratureRule& quadrature_rule(int dimension, int exactness) {
  if (dimension < 1 || dimension > 3)
    throw Error(ErrorCode::UnsupportedDegree, "reference simplex must have dimension 1..3");
  if (exactness < 0) exactness = 0;
  if (exactness > kMaxQuadratureDegree)
    throw Error(ErrorCode::UnsupportedDegree,
                "quadrature exactness " + std::to_string(exactness) + " above " +
                    std::to_string(kMaxQuadratureDegree));
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dimension, exactness}];
  if (!slot) slot = build_rule(dimension, exactness);
  return *slot;
}

}  // namespace virtenrich
