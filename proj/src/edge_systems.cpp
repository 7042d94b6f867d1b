#include "virtenrich/edge_systems.hpp"

#include "virtenrich/error.hpp"
#include "virtenrich/simplex.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace virtenrich {
namespace {

enum class SystemKind { hermite, endpoint, face };

struct System {
  Eigen::MatrixXd matrix;
  Eigen::FullPivLU<Eigen::MatrixXd> lu;
  std::vector<Eigen::VectorXd> boundary_points;  // face systems only
};

System build(SystemKind kind, int m) {
  System s;
  if (kind == SystemKind::face) {
    const Index n = poly_dim(2, m);
    const auto exps = monomial_exponents(2, m);
    s.matrix.resize(n, n);
    Index row = 0;
    for (Index i = 0; i < n; ++i) {
      const int a = exps[i][0], b = exps[i][1];
      if (a != 0 && b != 0 && a + b != m) continue;
      Eigen::VectorXd xi(2);
      xi << static_cast<double>(a) / m, static_cast<double>(b) / m;
      s.boundary_points.push_back(xi);
      s.matrix.row(row++) = monomial_values(2, m, xi).transpose();
    }
    const Index nm = poly_dim(2, m - 3);
    s.matrix.bottomRows(nm) = normalized_gram(2, m).topRows(nm);
  } else {
    const Index n = m + 1;
    s.matrix = Eigen::MatrixXd::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
      s.matrix(0, j) = j == 0 ? 1.0 : 0.0;
      s.matrix(1, j) = 1.0;
    }
    Index row = 2;
    if (kind == SystemKind::hermite) {
      for (Index j = 1; j < n; ++j) {
        s.matrix(2, j) = j == 1 ? 1.0 : 0.0;
        s.matrix(3, j) = static_cast<double>(j);
      }
      row = 4;
    }
    for (Index i = 0; row < n; ++i, ++row)
      for (Index j = 0; j < n; ++j) s.matrix(row, j) = 1.0 / static_cast<double>(i + j + 1);
  }
  s.lu.compute(s.matrix);
  if (!s.lu.isInvertible()) throw Error(ErrorCode::SingularInterpolation, "edge/face interpolation system");
  return s;
}

const System& system(SystemKind kind, int m) {
  static std::mutex mutex;
  static std::map<std::pair<SystemKind, int>, std::unique_ptr<System>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{kind, m}];
  if (!slot) slot = std::make_unique<System>(build(kind, m));
  return *slot;
}

Polynomial solve(const System& s, int nvars, int m, const Eigen::VectorXd& rhs) {
  const Eigen::VectorXd c = s.lu.solve(rhs);
  const double residual = (s.matrix * c - rhs).lpNorm<Eigen::Infinity>();
  const double scale = std::max({1.0, rhs.lpNorm<Eigen::Infinity>(), c.lpNorm<Eigen::Infinity>()});
  if (!(residual <= 1e-11 * scale))
    throw Error(ErrorCode::SingularInterpolation, "interpolation residual " + std::to_string(residual));
  return Polynomial(nvars, m, c);
}

}  // namespace

Polynomial hermite_moment_edge(int k, double length, double value0, double value1, double slope0, double slope1,
                               const Eigen::Ref<const Eigen::VectorXd>& moments) {
  if (k < 3) throw Error(ErrorCode::UnsupportedOrder, "Hermite edge system needs k >= 3");
  if (moments.size() != k - 3) throw Error(ErrorCode::IndexOutOfRange, "Hermite edge moment count");
  Eigen::VectorXd rhs(k + 1);
  rhs << value0, value1, slope0 * length, slope1 * length, moments;
  return solve(system(SystemKind::hermite, k), 1, k, rhs);
}

Polynomial endpoint_moment_edge(int m, double value0, double value1, const Eigen::Ref<const Eigen::VectorXd>& moments) {
  if (m < 1) throw Error(ErrorCode::UnsupportedOrder, "endpoint edge system needs degree >= 1");
  if (moments.size() != m - 1) throw Error(ErrorCode::IndexOutOfRange, "endpoint edge moment count");
  Eigen::VectorXd rhs(m + 1);
  rhs << value0, value1, moments;
  return solve(system(SystemKind::endpoint, m), 1, m, rhs);
}

Polynomial boundary_moment_face(int m, const std::function<double(const Eigen::VectorXd&)>& boundary_value,
                                const Eigen::Ref<const Eigen::VectorXd>& moments) {
  if (m < 1) throw Error(ErrorCode::UnsupportedOrder, "face system needs degree >= 1");
  if (moments.size() != poly_dim(2, m - 3)) throw Error(ErrorCode::IndexOutOfRange, "face moment count");
  const System& s = system(SystemKind::face, m);
  Eigen::VectorXd rhs(poly_dim(2, m));
  Index row = 0;
  for (const auto& xi : s.boundary_points) rhs(row++) = boundary_value(xi);
  rhs.tail(moments.size()) = moments;
  return solve(s, 2, m, rhs);
}

}  // namespace virtenrich
