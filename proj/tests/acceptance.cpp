// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
#include "rational_oracle.hpp"

#include "virtenrich/energy_projection.hpp"
#include "virtenrich/fields.hpp"
#include "virtenrich/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

using namespace virtenrich;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = true;
  std::string detail;
};

int threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::shared_ptr<const SimplicialMesh> domain(const std::string& name, int refinements) {
  return std::make_shared<const SimplicialMesh>(refine_uniform(load_domain(name), refinements));
}

Eigen::VectorXd normals(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> dist;
  Eigen::VectorXd v(n);
  for (Index i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// 1. Local dimensions.
Outcome criterion1() {
  Outcome out;
  struct Case {
    int k, d;
    Index trace, total;
  };
  const std::vector<Case> examples{{3, 2, 12, 12}, {4, 2, 18, 19}, {3, 3, 28, 28}, {4, 3, 54, 55}};
  for (const Case& c : examples)
    if (trace_space_dim(c.k, c.d) != c.trace || vem_space_dim(c.k, c.d) != c.total) {
      out.passed = false;
      out.detail += "example k=" + std::to_string(c.k) + " d=" + std::to_string(c.d) + " mismatch; ";
    }
  for (int d : {2, 3})
    for (int k : {3, 4, 5}) {
      const Index trace = d == 2 ? 6 * (k - 1) : 2 * (k - 1) * (2 * k + 1);
      const Index total = trace + poly_dim(d, k - 4);
      const auto mesh = std::make_shared<const SimplicialMesh>(reference_simplex_mesh(d));
      const LagrangeFunction v = interpolate(build_space(mesh, k), make_field("sinsin", d).value);
      const VemFunction ehv = enrich(v);
      const Index stored = cell_dofs(ehv, 0).size();
      if (trace_space_dim(k, d) != trace || vem_space_dim(k, d) != total || stored != total ||
          ehv.num_dofs() != total) {
        out.passed = false;
        out.detail += "k=" + std::to_string(k) + " d=" + std::to_string(d) + " stored " + std::to_string(stored) +
                      " expected " + std::to_string(total) + "; ";
      }
    }
  if (out.passed) out.detail = "closed forms and stored counts agree for k in {3,4,5}, d in {2,3}";
  return out;
}

// 2. C1 invariance on polynomials.
Outcome criterion2() {
  double worst = 0.0;
  std::mt19937_64 rng(2);
  for (const char* name : {"square", "cube"})
    for (int k : {3, 4}) {
      const auto mesh = domain(name, 1);
      const int d = mesh->dimension();
      const Field field = polynomial_field(Polynomial(d, k, normals(rng, poly_dim(d, k))));
      const VemFunction ehv = enrich(interpolate(build_space(mesh, k), field.value));
      const VemFunction exact = interpolate_dofs(mesh, k, field);
      worst = std::max(worst, (ehv.flatten() - exact.flatten()).lpNorm<Eigen::Infinity>());
    }
  return {worst <= 1e-10, "max |E_h Pi_h zeta - zeta| dof residual " + fmt(worst) + " (tol 1e-10)"};
}

// 3. Compatibility and conformity.
Outcome criterion3() {
  double compat = 0.0;
  std::size_t violations = 0;
  for (const char* name : {"square", "cube"})
    for (int refinements : {1, 2}) {
      const auto mesh = domain(name, refinements);
      const auto space = build_space(mesh, 3);
      const BoundaryClassification classes = classify_boundary(*mesh);
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(seed);
        const LagrangeFunction v(space, normals(rng, space->num_dofs()));
        const SkeletonOptions opt{seed % 2 == 1, seed};
        const SkeletonData skeleton = build_skeleton(v, classes, opt);
        std::vector<double> residual(mesh->num_cells());
        parallel_for(mesh->num_cells(), threads(), [&](Index c) {
          residual[c] = check_compatibility(*mesh, cell_trace(v, skeleton, c)).max_residual;
        });
        compat = std::max(compat, *std::max_element(residual.begin(), residual.end()));
        const VemFunction ehv = enrich_from_skeleton(v, skeleton);
        std::vector<CellDofs> cells;
        for (Index c = 0; c < mesh->num_cells(); ++c) cells.push_back(cell_dofs(ehv, c));
        violations += check_conformity(*mesh, cells, 1e-10).violations.size();
        violations += check_conformity(ehv, 1e-10).violations.size();
      }
    }
  return {compat <= 1e-10 && violations == 0,
          "max compatibility residual " + fmt(compat) + ", conformity violations " + std::to_string(violations)};
}

// 4. H^1_0 preservation.
Outcome criterion4() {
  double worst = 0.0;
  for (const char* name : {"square", "cube"})
    for (int k : {3, 4}) {
      const auto mesh = domain(name, 1);
      const auto space = build_space(mesh, k);
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        std::mt19937_64 rng(seed);
        Eigen::VectorXd values = normals(rng, space->num_dofs());
        for (Index i = 0; i < space->num_dofs(); ++i)
          if (space->boundary_node(i)) values(i) = 0.0;
        const VemFunction ehv = enrich(LagrangeFunction(space, values));
        for (Index p = 0; p < mesh->num_vertices(); ++p)
          if (mesh->boundary_vertex(p)) worst = std::max(worst, std::abs(ehv.vertex_values(p)));
        for (Index e = 0; e < mesh->num_edges(); ++e)
          if (mesh->boundary_edge(e) && ehv.edge_f.rows() > 0)
            worst = std::max(worst, ehv.edge_f.col(e).lpNorm<Eigen::Infinity>());
        for (Index f = 0; f < mesh->num_faces(); ++f)
          if (mesh->boundary_face(f) && ehv.face_f.rows() > 0)
            worst = std::max(worst, ehv.face_f.col(f).lpNorm<Eigen::Infinity>());
        // f on a boundary facet: the trace itself, sampled.
        for (Index c = 0; c < mesh->num_cells(); ++c) {
          const CellTracePair pair = trace_from_dofs(*mesh, cell_dofs(ehv, c));
          const auto facets = mesh->cell_facets(c);
          for (int i = 0; i < static_cast<int>(facets.size()); ++i) {
            if (!mesh->boundary_facet(facets[i])) continue;
            if (mesh->dimension() == 2) {
              for (double t : {0.0, 0.3, 0.7, 1.0}) worst = std::max(worst, std::abs(pair.edges[i].f(t)));
            } else {
              for (const EdgeTrace& et : pair.faces[i].edges)
                for (double t : {0.0, 0.3, 0.7, 1.0}) worst = std::max(worst, std::abs(et.f(t)));
            }
          }
        }
      }
    }
  return {worst <= 1e-11, "max boundary f dof " + fmt(worst) + " (tol 1e-11)"};
}

// 5. Stability constant.
Outcome criterion5() {
  CsharpOptions opt;
  opt.domain = "square";
  opt.k = 3;
  opt.levels = 3;
  opt.samples = 20;
  opt.seed = 5;
  opt.threads = threads();
  const ReportBundle b = run_csharp_experiment(opt);
  const double drift = b.value("drift");
  const double dilation = b.value("dilation_max_rel_change");
  std::string ratios;
  for (int l = 0; l < opt.levels; ++l) ratios += fmt(b.value("max_ratio", l)) + " ";
  const bool ok = drift < 2.0 && dilation < 0.01 && b.wall_seconds < 120.0;
  return {ok, "max ratios " + ratios + "drift " + fmt(drift) + " (< 2), dilation change " + fmt(dilation) +
                  " (< 0.01), " + fmt(b.wall_seconds) + " s (< 120)"};
}

// 6. Approximation rates.
Outcome criterion6() {
  CflatOptions square;
  square.domain = "square";
  square.levels = 4;
  square.threads = threads();
  const ReportBundle s = run_cflat_experiment(square);
  CflatOptions cube = square;
  cube.domain = "cube";
  cube.levels = 3;
  const ReportBundle c = run_cflat_experiment(cube);
  const double l2 = s.value("order_h0"), h1 = s.value("order_h1"), h2 = s.value("order_h2");
  const double l2c = c.value("order_h0");
  const double seconds = s.wall_seconds + c.wall_seconds;
  const bool ok = l2 >= 3.8 && h1 >= 2.8 && h2 >= 1.8 && l2c >= 3.6 && seconds < 300.0;
  return {ok, "square orders L2 " + fmt(l2) + " H1 " + fmt(h1) + " H2 " + fmt(h2) + ", cube L2 " + fmt(l2c) + ", " +
                  fmt(seconds) + " s (< 300)"};
}

// Random simplex with every face angle (and in 3D every dihedral angle) >= 20 degrees.
Eigen::MatrixXd random_cell(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double limit = 20.0 * M_PI / 180.0;
  auto angle = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return std::acos(std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0));
  };
  for (;;) {
    Eigen::MatrixXd x(d, d + 1);
    for (Index i = 0; i < x.size(); ++i) x(i) = u(rng);
    bool ok = true;
    for (int a = 0; a <= d && ok; ++a)
      for (int b = 0; b <= d && ok; ++b)
        for (int c = 0; c <= d && ok; ++c)
          if (a != b && b != c && a != c && b < c) ok = angle(x.col(b) - x.col(a), x.col(c) - x.col(a)) >= limit;
    if (ok && d == 3) {
      for (int a = 0; a < 4 && ok; ++a)
        for (int b = a + 1; b < 4 && ok; ++b) {
          int others[2], n = 0;
          for (int c = 0; c < 4; ++c)
            if (c != a && c != b) others[n++] = c;
          const Eigen::Vector3d e = x.col(b) - x.col(a);
          Eigen::Vector3d p = x.col(others[0]) - x.col(a), q = x.col(others[1]) - x.col(a);
          p -= p.dot(e) / e.squaredNorm() * e;
          q -= q.dot(e) / e.squaredNorm() * e;
          ok = angle(p, q) >= limit;
        }
    }
    if (ok) return x;
  }
}

// 7. Affine invariance of the norm-equivalence interval.
Outcome criterion7() {
  std::mt19937_64 rng(7);
  const std::vector<double> scales{1.0, 1e-2, 10.0, 1e3};
  double worst = 0.0;
  std::string detail;
  for (int d : {2, 3})
    for (int k : {3, 4}) {
      std::vector<double> lo(scales.size(), 1e300), hi(scales.size(), 0.0);
      for (int cell = 0; cell < 100; ++cell) {
        const Eigen::MatrixXd x = random_cell(rng, d);
        const Polynomial p(d, k, normals(rng, poly_dim(d, k)));
        Eigen::VectorXd shift(d);
        for (int i = 0; i < d; ++i) shift(i) = std::uniform_real_distribution<double>(-5, 5)(rng);
        for (std::size_t s = 0; s < scales.size(); ++s) {
          const Eigen::MatrixXd y = (scales[s] * x).colwise() + (s == 0 ? Eigen::VectorXd::Zero(d) : shift);
          CellMatrix cells(d + 1, 1);
          for (int i = 0; i <= d; ++i) cells(i, 0) = i;
          const SimplicialMesh mesh = build_mesh(y, cells);
          const SimplexGeometry g(y);
          const PolynomialOnSimplex fn{g, p};
          const CellDofs dofs = function_cell_dofs(
              mesh, 0, k, [&](const Eigen::VectorXd& pt) { return fn.value_at(pt); },
              [&](const Eigen::VectorXd& pt) { return fn.gradient(g.to_reference(pt)); });
          const double exact =
              std::sqrt(integrate(g, 2 * k, [&](const Eigen::VectorXd& xi) { return p(xi) * p(xi); }));
          const double ratio = dof_l2_norm(mesh, dofs) / exact;
          lo[s] = std::min(lo[s], ratio);
          hi[s] = std::max(hi[s], ratio);
        }
      }
      for (std::size_t s = 1; s < scales.size(); ++s)
        worst = std::max({worst, std::abs(lo[s] - lo[0]) / lo[0], std::abs(hi[s] - hi[0]) / hi[0]});
      detail += "d=" + std::to_string(d) + " k=" + std::to_string(k) + " [" + fmt(lo[0]) + ", " + fmt(hi[0]) + "] ";
    }
  return {worst < 0.01, detail + "max endpoint change " + fmt(worst) + " (< 0.01)"};
}

// 8. Quadrature, moments and projections against exact rational integration.
Outcome criterion8() {
  double worst = 0.0;
  auto rel = [](double approx, const oracle::Rational& exact) {
    const double e = static_cast<double>(exact);
    return std::abs(approx - e) / std::max(std::abs(e), 1e-300);
  };
  // k in {3, 4, 5}: monomials up to degree 2k + 2 = 12, projections onto P_m, m <= 5.
  const int top = 12;
  for (int d = 1; d <= 3; ++d) {
    for (int deg = 0; deg <= top; ++deg) {
      const QuadratureRule& rule = quadrature_rule(d, deg);
      for (const Exponent& a : monomial_exponents(d, deg)) {
        int total = 0;
        for (int i = 0; i < d; ++i) total += a[i];
        if (total != deg) continue;
        double sum = 0.0;
        for (Index q = 0; q < rule.weights.size(); ++q) {
          double m = rule.weights(q);
          for (int i = 0; i < d; ++i) m *= std::pow(rule.points(i, q), a[i]);
          sum += m;
        }
        worst = std::max(worst, rel(sum, oracle::reference_integral(d, a)));
      }
    }
    for (int m = 0; m <= 5; ++m) {
      const auto g = oracle::gram(d, m);
      const auto ginv = oracle::inverse(g);
      const Index n = static_cast<Index>(g.size());
      Eigen::MatrixXd gd(n, n);
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) gd(i, j) = static_cast<double>(g[i][j]);
      for (const Exponent& a : monomial_exponents(d, top)) {
        int total = 0;
        for (int i = 0; i < d; ++i) total += a[i];
        auto mono = [&](const Eigen::VectorXd& xi) {
          double v = 1.0;
          for (int i = 0; i < d; ++i) v *= std::pow(xi(i), a[i]);
          return v;
        };
        const Eigen::VectorXd mu = moments(d, m, total + m, mono);
        const auto exact_mu = oracle::moments(d, m, a);
        for (Index i = 0; i < n; ++i) worst = std::max(worst, rel(mu(i), exact_mu[i]));
        const Polynomial proj = polynomial_from_moments(d, m, mu);
        // Relative error in the L2 norm of the reference simplex.
        Eigen::VectorXd diff(n), ex(n);
        for (Index i = 0; i < n; ++i) {
          oracle::Rational c = 0;
          for (Index j = 0; j < n; ++j) c += ginv[i][j] * exact_mu[j];
          ex(i) = static_cast<double>(c);
          diff(i) = proj.coefficients()(i) - ex(i);
        }
        worst = std::max(worst, std::sqrt(std::abs(diff.dot(gd * diff)) / ex.dot(gd * ex)));
      }
    }
  }
  // Physical simplices with rational vertices.
  const std::vector<std::vector<std::vector<oracle::Rational>>> cells{
      {{0, 0}, {2, 0}, {0, 2}},
      {{oracle::Rational(1, 3), oracle::Rational(-1, 2)}, {3, 1}, {oracle::Rational(1, 2), oracle::Rational(5, 2)}},
      {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}},
      {{oracle::Rational(1, 4), 0, 1}, {2, oracle::Rational(1, 3), 1}, {1, 2, oracle::Rational(3, 2)}, {1, 1, 3}}};
  for (const auto& cell : cells) {
    const int d = static_cast<int>(cell.size()) - 1;
    Eigen::MatrixXd v(d, d + 1);
    for (int j = 0; j <= d; ++j)
      for (int i = 0; i < d; ++i) v(i, j) = static_cast<double>(cell[j][i]);
    const SimplexGeometry geom(v);
    for (const Exponent& a : monomial_exponents(d, 12)) {
      int total = 0;
      for (int i = 0; i < d; ++i) total += a[i];
      const double approx = integrate(geom, total, [&](const Eigen::VectorXd& xi) {
        const Eigen::VectorXd x = geom.to_physical(xi);
        double r = 1.0;
        for (int i = 0; i < d; ++i) r *= std::pow(x(i), a[i]);
        return r;
      });
      worst = std::max(worst, rel(approx, oracle::physical_integral(cell, a)));
    }
  }
  return {worst <= 1e-11, "max relative error " + fmt(worst) + " (tol 1e-11)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"dimensions", criterion1},
      {"C1 invariance", criterion2},
      {"compatibility and conformity", criterion3},
      {"H1_0 preservation", criterion4},
      {"C-sharp stability", criterion5},
      {"C-flat rates", criterion6},
      {"norm-equivalence affine invariance", criterion7},
      {"quadrature and projections", criterion8},
  };
  const std::vector<double> budget{1.0, 10.0, 60.0, 60.0, 120.0, 300.0, 60.0, 60.0};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = Clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (seconds >= budget[i]) {
      out.passed = false;
      out.detail += " [over time budget " + fmt(budget[i]) + " s]";
    }
    std::cout << (out.passed ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first << "): "
              << out.detail << " [" << fmt(seconds) << " s]" << std::endl;
    if (!out.passed) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
