#ifndef VIRTENRICH_VERIFY_HPP
#define VIRTENRICH_VERIFY_HPP

#include "virtenrich/lagrange.hpp"
#include "virtenrich/mesh.hpp"
#include "virtenrich/report.hpp"
#include "virtenrich/skeleton.hpp"
#include "virtenrich/vem.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace virtenrich {

/// `square`, `cube` or `file:<path>`. UsageError for anything else.
SimplicialMesh load_domain(const std::string& spec);

/// Least-squares slope of log(error) against log(h).
double fit_order(std::span<const double> h, std::span<const double> error);

/// Runs f(i) for i in [0, n) on up to `threads` workers.
void parallel_for(Index n, int threads, const std::function<void(Index)>& f);

/// sqrt(sum_T (h_T^-2 dof discrepancy)^2 + J(v,v)) / sqrt(J(v,v)).
/// DegenerateSample when J(v,v) vanishes.
double csharp_ratio(const LagrangeFunction& v, const BoundaryClassification& classes,
                    const SkeletonOptions& options = {}, int threads = 1);

struct CsharpOptions {
  std::string domain = "square";
  int k = 3;
  int levels = 3;
  int samples = 20;
  std::uint64_t seed = 0;
  int base_level = 1;    ///< refinements of the domain before the first level
  double dilation = 1.0;  ///< coordinates are multiplied by this factor
  bool check_dilation = true;
  bool randomize_choices = false;
  int threads = 1;
};

/// Random v with standard normal nodal values; records the largest ratio per
/// level, the largest over levels and the level-to-level drift. With
/// check_dilation the same samples are rerun on the domain scaled by 2.
ReportBundle run_csharp_experiment(const CsharpOptions& options);

struct CflatOptions {
  std::string domain = "square";
  std::string zeta = "sinsin";
  int k = 3;
  int levels = 4;
  int base_level = -1;  ///< -1: 3 in 2D, 2 in 3D
  bool drop_first = false;
  bool randomize_choices = false;
  int threads = 1;
};

/// Errors |zeta - proxy|_{H^l}, l = 0, 1, 2, of the energy projection of
/// E_h Pi_h zeta, with fitted orders checked against k + 1 - l minus a slack of
/// 0.2 (2D) or 0.4 (3D). A polynomial zeta of degree <= k must instead be
/// reproduced to 1e-9.
ReportBundle run_cflat_experiment(const CflatOptions& options);

/// Fault names accepted by the invariance suite.
std::span<const std::string> fault_names();

struct InvarianceOptions {
  std::string domain = "square";
  int k = 3;
  std::uint64_t seed = 0;
  int refinements = 1;
  std::string fault;  ///< empty, or one of fault_names()
  bool randomize_choices = false;
  int threads = 1;
};

/// Dimension audit, compatibility, conformity, C1 invariance, H^1_0
/// preservation, linearity and relabeling determinism.
ReportBundle run_invariance_suite(const InvarianceOptions& options);

}  // namespace virtenrich

#endif  // VIRTENRICH_VERIFY_HPP
