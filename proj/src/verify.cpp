#include "virtenrich/verify.hpp"

#include "virtenrich/energy_projection.hpp"
#include "virtenrich/error.hpp"
#include "virtenrich/fields.hpp"
#include "virtenrich/frames.hpp"
#include "virtenrich/log.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

namespace virtenrich {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Eigen::VectorXd normal_values(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> dist;
  Eigen::VectorXd out(n);
  for (Index i = 0; i < n; ++i) out(i) = dist(rng);
  return out;
}

std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

double max_abs(const Eigen::VectorXd& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

}  // namespace

SimplicialMesh load_domain(const std::string& spec) {
  if (spec == "square") return unit_square_mesh();
  if (spec == "cube") return unit_cube_mesh();
  if (spec.rfind("file:", 0) == 0) return read_mesh_file(spec.substr(5));
  throw Error(ErrorCode::UsageError, "unknown domain '" + spec + "' (square, cube or file:<path>)");
}

double fit_order(std::span<const double> h, std::span<const double> error) {
  const std::size_t n = h.size();
  if (n < 2 || error.size() != n) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(h[i]);
    my += std::log(error[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(h[i]) - mx;
    sxy += dx * (std::log(error[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

void parallel_for(Index n, int threads, const std::function<void(Index)>& f) {
  const int workers = static_cast<int>(std::min<Index>(std::max(threads, 1), std::max<Index>(n, 1)));
  if (workers <= 1) {
    for (Index i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (Index i = next++; i < n; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// C-sharp

namespace {

// J(v, v) at round-off level relative to the broken H^2 part and the nodal values.
bool degenerate_jump(const LagrangeFunction& v, const HSeminormParts& parts) {
  const SimplicialMesh& mesh = v.mesh();
  double hmin = std::numeric_limits<double>::infinity();
  for (Index c = 0; c < mesh.num_cells(); ++c) hmin = std::min(hmin, mesh.cell_diameter(c));
  const double scale = parts.hessian + v.values().squaredNorm() * std::pow(hmin, mesh.dimension() - 4);
  return !(parts.jump > 1e-20 * scale);
}

}  // namespace

double csharp_ratio(const LagrangeFunction& v, const BoundaryClassification& classes, const SkeletonOptions& options,
                    int threads) {
  const SimplicialMesh& mesh = v.mesh();
  const HSeminormParts parts = h_seminorm_parts(v);
  if (degenerate_jump(v, parts)) throw Error(ErrorCode::DegenerateSample, "J(v, v) vanishes");
  const VemFunction ehv = enrich(v, classes, options);
  std::vector<double> per_cell(mesh.num_cells());
  parallel_for(mesh.num_cells(), threads, [&](Index c) {
    const double s = error_dof_norms(v, ehv, c).h2;
    per_cell[c] = s * s;
  });
  const double sum = std::accumulate(per_cell.begin(), per_cell.end(), 0.0);
  return std::sqrt(sum + parts.jump) / std::sqrt(parts.jump);
}

ReportBundle run_csharp_experiment(const CsharpOptions& opt) {
  if (opt.levels < 3) throw Error(ErrorCode::UsageError, "csharp needs at least 3 levels");
  if (opt.samples < 10) throw Error(ErrorCode::UsageError, "csharp needs at least 10 samples");
  if (opt.k < 2) throw Error(ErrorCode::UnsupportedOrder, "k must be at least 2");
  const auto start = Clock::now();
  ReportBundle bundle;
  bundle.experiment = "csharp";
  bundle.domain = opt.domain;
  bundle.k = opt.k;
  bundle.seed = opt.seed;
  const SkeletonOptions sopt{opt.randomize_choices, opt.seed};

  SimplicialMesh current = refine_uniform(load_domain(opt.domain), opt.base_level);
  bundle.mesh_hash = mesh_hash(current);
  std::vector<double> max_ratio;
  double dilation_change = 0.0;
  for (int level = 0; level < opt.levels; ++level) {
    if (level > 0) current = refine_uniform(current);
    const auto mesh = std::make_shared<const SimplicialMesh>(dilate(current, opt.dilation));
    const auto space = build_space(mesh, opt.k);
    const BoundaryClassification classes = classify_boundary(*mesh);
    std::mt19937_64 rng = seeded(opt.seed, static_cast<std::uint64_t>(level));

    std::vector<Eigen::VectorXd> samples;
    int degenerate = 0;
    while (static_cast<int>(samples.size()) < opt.samples) {
      Eigen::VectorXd values = normal_values(rng, space->num_dofs());
      const LagrangeFunction candidate(space, values);
      if (degenerate_jump(candidate, h_seminorm_parts(candidate))) {
        if (++degenerate > 100 * opt.samples) throw Error(ErrorCode::DegenerateSample, "no sample with J > 0");
        continue;
      }
      samples.push_back(std::move(values));
    }

    std::vector<double> ratios(samples.size());
    parallel_for(static_cast<Index>(samples.size()), opt.threads, [&](Index s) {
      ratios[s] = csharp_ratio(LagrangeFunction(space, samples[s]), classes, sopt);
    });

    if (opt.check_dilation) {
      const auto big = std::make_shared<const SimplicialMesh>(dilate(*mesh, 2.0));
      const auto big_space = build_space(big, opt.k);
      const BoundaryClassification big_classes = classify_boundary(*big);
      std::vector<double> change(samples.size());
      parallel_for(static_cast<Index>(samples.size()), opt.threads, [&](Index s) {
        const double r = csharp_ratio(LagrangeFunction(big_space, samples[s]), big_classes, sopt);
        change[s] = std::abs(r - ratios[s]) / ratios[s];
      });
      for (double c : change) dilation_change = std::max(dilation_change, c);
    }

    const double h = mesh->max_cell_diameter();
    bundle.h.push_back(h);
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    bundle.add(level, h, "cells", static_cast<double>(mesh->num_cells()));
    bundle.add(level, h, "max_ratio", *hi);
    bundle.add(level, h, "min_ratio", *lo);
    bundle.add(level, h, "mean_ratio", std::accumulate(ratios.begin(), ratios.end(), 0.0) / ratios.size());
    bundle.add(level, h, "degenerate_samples", degenerate);
    max_ratio.push_back(*hi);
    log::info("csharp level " + std::to_string(level) + ": max ratio " + format_double(*hi));
  }

  double drift = 1.0;
  for (std::size_t i = 1; i < max_ratio.size(); ++i)
    drift = std::max(drift, std::max(max_ratio[i] / max_ratio[i - 1], max_ratio[i - 1] / max_ratio[i]));
  const double c_sharp = *std::max_element(max_ratio.begin(), max_ratio.end());
  const bool finite = std::all_of(max_ratio.begin(), max_ratio.end(), [](double r) { return std::isfinite(r); });
  bundle.add_summary("c_sharp", c_sharp);
  bundle.add_summary("drift", drift);
  bundle.check("finite_ratios", finite, c_sharp, std::numeric_limits<double>::infinity());
  bundle.check("drift", drift < 2.0, drift, 2.0);
  if (opt.check_dilation) {
    bundle.add_summary("dilation_max_rel_change", dilation_change);
    bundle.check("dilation", dilation_change < 0.01, dilation_change, 0.01);
  }
  bundle.wall_seconds = seconds_since(start);
  return bundle;
}

// ---------------------------------------------------------------------------
// C-flat

ReportBundle run_cflat_experiment(const CflatOptions& opt) {
  const int used = opt.levels - (opt.drop_first ? 1 : 0);
  if (used < 3) throw Error(ErrorCode::UsageError, "cflat needs at least 3 fitted levels");
  if (opt.k < 2) throw Error(ErrorCode::UnsupportedOrder, "k must be at least 2");
  const auto start = Clock::now();
  SimplicialMesh current = load_domain(opt.domain);
  const int d = current.dimension();
  const Field zeta = make_field(opt.zeta, d);
  const int base = opt.base_level >= 0 ? opt.base_level : (d == 2 ? 3 : 2);
  current = refine_uniform(current, base);

  ReportBundle bundle;
  bundle.experiment = "cflat";
  bundle.domain = opt.domain;
  bundle.k = opt.k;
  bundle.mesh_hash = mesh_hash(current);
  const SkeletonOptions sopt{opt.randomize_choices, 0};
  const int ke = std::max(opt.k, 3);
  const int exactness = 2 * ke + 4;

  std::array<std::vector<double>, 3> errors;
  for (int level = 0; level < opt.levels; ++level) {
    if (level > 0) current = refine_uniform(current);
    const auto mesh = std::make_shared<const SimplicialMesh>(current);
    const LagrangeFunction v = interpolate(build_space(mesh, opt.k), zeta.value);
    const VemFunction ehv = enrich(v, classify_boundary(*mesh), sopt);
    std::vector<std::array<double, 3>> per_cell(mesh->num_cells());
    parallel_for(mesh->num_cells(), opt.threads, [&](Index c) {
      const PolynomialOnSimplex proxy = energy_projection(ehv, c);
      const SimplexGeometry& g = proxy.geometry;
      per_cell[c] = {integrate(g, exactness,
                               [&](const Eigen::VectorXd& xi) {
                                 const double r = proxy.value(xi) - zeta.value(g.to_physical(xi));
                                 return r * r;
                               }),
                     integrate(g, exactness,
                               [&](const Eigen::VectorXd& xi) {
                                 return (proxy.gradient(xi) - zeta.gradient(g.to_physical(xi))).squaredNorm();
                               }),
                     integrate(g, exactness, [&](const Eigen::VectorXd& xi) {
                       return (proxy.hessian(xi) - zeta.hessian(g.to_physical(xi))).squaredNorm();
                     })};
    });
    const double h = mesh->max_cell_diameter();
    bundle.h.push_back(h);
    bundle.add(level, h, "cells", static_cast<double>(mesh->num_cells()));
    for (int l = 0; l < 3; ++l) {
      double sum = 0.0;
      for (const auto& e : per_cell) sum += e[l];
      errors[l].push_back(std::sqrt(sum));
      bundle.add(level, h, "error_h" + std::to_string(l), errors[l].back());
    }
    log::info("cflat level " + std::to_string(level) + ": L2 error " + format_double(errors[0].back()));
  }

  const bool polynomial = zeta.degree >= 0 && zeta.degree <= ke;
  if (polynomial) {
    double worst = 0.0;
    for (const auto& e : errors) worst = std::max(worst, *std::max_element(e.begin(), e.end()));
    bundle.add_summary("max_error", worst);
    bundle.check("reproduction", worst <= 1e-9, worst, 1e-9);
  } else {
    const std::size_t first = opt.drop_first ? 1 : 0;
    const std::span<const double> hs(bundle.h.data() + first, bundle.h.size() - first);
    const double slack = d == 2 ? 0.2 : 0.4;
    for (int l = 0; l < 3; ++l) {
      const double order = fit_order(hs, std::span<const double>(errors[l].data() + first, errors[l].size() - first));
      const double target = opt.k + 1 - l;
      bundle.add_summary("order_h" + std::to_string(l), order);
      bundle.add_summary("target_order_h" + std::to_string(l), target);
      bundle.check("order_h" + std::to_string(l), order >= target - slack, order, target - slack);
    }
    double c_flat = 0.0;
    for (std::size_t i = 0; i < bundle.h.size(); ++i) {
      double sum = 0.0;
      for (int l = 0; l < 3; ++l) sum += std::pow(bundle.h[i], l) * errors[l][i];
      c_flat = std::max(c_flat, sum / std::pow(bundle.h[i], opt.k + 1));
    }
    bundle.add_summary("c_flat", c_flat);
  }
  bundle.wall_seconds = seconds_since(start);
  return bundle;
}

// ---------------------------------------------------------------------------
// Invariance suite

std::span<const std::string> fault_names() {
  static const std::vector<std::string> names{"dimension", "compatibility", "conformity", "c1",
                                              "h10",       "linearity",     "determinism"};
  return names;
}

namespace {

// Largest |f| dof on the boundary: vertex values, tangential vertex gradients
// and boundary edge/face moments of f.
double boundary_f_residual(const VemFunction& xi) {
  const SimplicialMesh& mesh = *xi.mesh;
  const int d = mesh.dimension();
  double worst = 0.0;
  for (Index f = 0; f < mesh.num_facets(); ++f) {
    if (!mesh.boundary_facet(f)) continue;
    const Eigen::VectorXd n = boundary_normal(mesh, f);
    for (Index p : mesh.facet(f)) {
      const Eigen::VectorXd w = xi.vertex_gradients.col(p);
      worst = std::max({worst, std::abs(xi.vertex_values(p)), (w - w.dot(n) * n).lpNorm<Eigen::Infinity>()});
    }
    if (d == 3) worst = std::max(worst, max_abs(xi.face_f.col(f)));
  }
  for (Index e = 0; e < mesh.num_edges(); ++e)
    if (mesh.boundary_edge(e)) worst = std::max(worst, max_abs(xi.edge_f.col(e)));
  return worst;
}

double relative_difference(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  return max_abs(a - b) / std::max(1.0, std::max(max_abs(a), max_abs(b)));
}

}  // namespace

ReportBundle run_invariance_suite(const InvarianceOptions& opt) {
  const std::string& fault = opt.fault;
  if (!fault.empty() && std::find(fault_names().begin(), fault_names().end(), fault) == fault_names().end())
    throw Error(ErrorCode::UsageError, "unknown fault '" + fault + "'");
  if (opt.k < 2) throw Error(ErrorCode::UnsupportedOrder, "k must be at least 2");
  const auto start = Clock::now();
  const auto mesh = std::make_shared<const SimplicialMesh>(refine_uniform(load_domain(opt.domain), opt.refinements));
  const int d = mesh->dimension();
  const int k = opt.k;
  const int ke = std::max(k, 3);
  const BoundaryClassification classes = classify_boundary(*mesh);
  const SkeletonOptions sopt{opt.randomize_choices, opt.seed};
  const auto space = build_space(mesh, k);
  std::mt19937_64 rng = seeded(opt.seed, 0);

  ReportBundle bundle;
  bundle.experiment = "invariance";
  bundle.domain = opt.domain;
  bundle.k = k;
  bundle.seed = opt.seed;
  bundle.mesh_hash = mesh_hash(*mesh);
  bundle.h.push_back(mesh->max_cell_diameter());
  bundle.add_summary("cells", static_cast<double>(mesh->num_cells()));

  const LagrangeFunction v(space, normal_values(rng, space->num_dofs()));
  const VemFunction ehv = enrich(v, classes, sopt);
  bundle.add_summary("global_dofs", static_cast<double>(ehv.num_dofs()));

  // Dimension audit against the closed forms.
  {
    const Index closed = d == 2 ? 6 * (ke - 1) + poly_dim(2, ke - 4) : 2 * (ke - 1) * (2 * ke + 1) + poly_dim(3, ke - 4);
    double worst = static_cast<double>(std::abs(vem_space_dim(ke, d) - closed));
    for (Index c = 0; c < mesh->num_cells(); ++c) {
      Index size = cell_dofs(ehv, c).size();
      if (fault == "dimension" && c == 0) size += 1;
      worst = std::max(worst, static_cast<double>(std::abs(size - closed)));
    }
    bundle.add_summary("local_dofs", static_cast<double>(closed));
    bundle.check("dimension_audit", worst == 0.0, worst, 0.0);
  }

  // Compatibility of every trace pair.
  {
    const LagrangeFunction vk = k == 2 ? embed_quadratic_in_cubic(v) : v;
    const SkeletonData skeleton = build_skeleton(vk, classes, sopt);
    std::vector<double> residual(mesh->num_cells());
    parallel_for(mesh->num_cells(), opt.threads, [&](Index c) {
      CellTracePair pair = cell_trace(vk, skeleton, c);
      if (fault == "compatibility" && c == 0) {
        Polynomial& g = d == 2 ? pair.edges[0].normal : pair.faces[0].g;
        g.coefficients()(0) += 1e-3;
      }
      residual[c] = check_compatibility(*mesh, pair).max_residual;
    });
    const double worst = *std::max_element(residual.begin(), residual.end());
    bundle.check("compatibility", worst <= 1e-10, worst, 1e-10);
  }

  // Conformity of the local dof views.
  {
    std::vector<CellDofs> cells;
    for (Index c = 0; c < mesh->num_cells(); ++c) cells.push_back(cell_dofs(ehv, c));
    if (fault == "conformity") {
      for (Index f = 0; f < mesh->num_facets(); ++f) {
        if (mesh->boundary_facet(f)) continue;
        CellDofs& other = cells[mesh->facet_cells(f)[1]];
        const int lv = mesh->local_vertex(other.cell, mesh->facet(f)[0]);
        other.vertex_values(lv) = -other.vertex_values(lv);
        break;
      }
    }
    const ConformityReport local = check_conformity(*mesh, cells);
    const ConformityReport global = check_conformity(ehv);
    const double count = static_cast<double>(local.violations.size() + global.violations.size());
    bundle.check("conformity", local.clean && global.clean, count, 0.0);
  }

  // C1 invariance for a random member of P_k.
  {
    const Polynomial p(d, k, normal_values(rng, poly_dim(d, k)));
    const Field field = polynomial_field(p);
    VemFunction ez = enrich(interpolate(space, field.value), classes, sopt);
    if (fault == "c1") ez.vertex_gradients(0, 0) += 1e-6;
    const VemFunction exact = interpolate_dofs(mesh, ke, field);
    const double worst = max_abs(ez.flatten() - exact.flatten());
    bundle.check("c1_invariance", worst <= 1e-10, worst, 1e-10);
  }

  // H^1_0 preservation.
  {
    Eigen::VectorXd values = normal_values(rng, space->num_dofs());
    for (Index i = 0; i < space->num_dofs(); ++i)
      if (space->boundary_node(i)) values(i) = 0.0;
    VemFunction e0 = enrich(LagrangeFunction(space, values), classes, sopt);
    if (fault == "h10") {
      for (Index p = 0; p < mesh->num_vertices(); ++p)
        if (mesh->boundary_vertex(p)) {
          e0.vertex_values(p) += 1e-6;
          break;
        }
    }
    const double worst = boundary_f_residual(e0);
    bundle.check("h10_preservation", worst <= 1e-11, worst, 1e-11);
  }

  // Linearity.
  {
    const LagrangeFunction v2(space, normal_values(rng, space->num_dofs()));
    const double a = 0.7, b = -1.3;
    Eigen::VectorXd combined = enrich(a * v + b * v2, classes, sopt).flatten();
    if (fault == "linearity") combined(0) += 1e-6;
    const Eigen::VectorXd separate = a * ehv.flatten() + b * enrich(v2, classes, sopt).flatten();
    const double worst = relative_difference(combined, separate);
    bundle.check("linearity", worst <= 1e-10, worst, 1e-10);
  }

  // Determinism under relabeling and reruns.
  {
    std::vector<Index> vmap(mesh->num_vertices()), cmap(mesh->num_cells());
    std::iota(vmap.begin(), vmap.end(), 0);
    std::iota(cmap.begin(), cmap.end(), 0);
    std::shuffle(vmap.begin(), vmap.end(), rng);
    std::shuffle(cmap.begin(), cmap.end(), rng);
    const auto canon = std::make_shared<const SimplicialMesh>(canonical_relabel(*mesh));
    const auto canon2 = std::make_shared<const SimplicialMesh>(canonical_relabel(relabel(*mesh, vmap, cmap)));
    const Field smooth = make_field("sinsin", d);
    auto run = [&](const std::shared_ptr<const SimplicialMesh>& m) {
      return enrich(interpolate(build_space(m, k), smooth.value), classify_boundary(*m), sopt).flatten();
    };
    const Eigen::VectorXd first = run(canon);
    Eigen::VectorXd second = run(canon2);
    if (fault == "determinism") second(0) += 1e-6;
    const Eigen::VectorXd again = run(canon);
    double worst = relative_difference(first, second);
    if (first.size() == again.size() && first != again) worst = std::max(worst, relative_difference(first, again));
    if (mesh_hash(*canon) != mesh_hash(*canon2)) worst = std::numeric_limits<double>::infinity();
    bundle.check("determinism", worst == 0.0, worst, 0.0);
  }

  bundle.wall_seconds = seconds_since(start);
  return bundle;
}

}  // namespace virtenrich
