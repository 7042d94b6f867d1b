#include "test_support.hpp"
#include "virtenrich/verify.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <map>
#include <sstream>

using namespace virtenrich;
using testing::error_of;

namespace {

const CheckResult* find_check(const ReportBundle& b, const std::string& name) {
  for (const CheckResult& c : b.checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST_CASE("fitted orders") {
  const std::vector<double> h{0.5, 0.25, 0.125, 0.0625};
  std::vector<double> e;
  for (double x : h) e.push_back(3.0 * std::pow(x, 2.5));
  CHECK(fit_order(h, e) == doctest::Approx(2.5));
}

TEST_CASE("domains") {
  CHECK(load_domain("square").num_cells() == 2);
  CHECK(load_domain("cube").num_cells() == 6);
  CHECK(error_of([] { load_domain("disk"); }) == ErrorCode::UsageError);
  CHECK(error_of([] { load_domain("file:/nonexistent.mesh"); }) == ErrorCode::IoError);
}

TEST_CASE("parallel loop visits every index and propagates errors") {
  std::atomic<int> sum{0};
  parallel_for(100, 4, [&](Index i) { sum += static_cast<int>(i); });
  CHECK(sum == 4950);
  CHECK_THROWS(parallel_for(10, 3, [](Index i) {
    if (i == 7) throw Error(ErrorCode::UsageError, "boom");
  }));
}

TEST_CASE("polynomial samples have no jump to measure") {
  const SimplicialMesh m = refine_uniform(unit_square_mesh());
  const LagrangeFunction v = interpolate(build_space(m, 3), [](const Eigen::VectorXd& x) { return x(0) * x(1); });
  CHECK(error_of([&] { csharp_ratio(v, classify_boundary(m)); }) == ErrorCode::DegenerateSample);
}

TEST_CASE("csharp ratio is at least one") {
  const SimplicialMesh m = refine_uniform(unit_square_mesh());
  const LagrangeFunction v = interpolate(build_space(m, 3), [](const Eigen::VectorXd& x) { return std::min(x(0), x(1)); });
  CHECK(csharp_ratio(v, classify_boundary(m)) >= 1.0);
}

TEST_CASE("invariance suite passes on clean runs") {
  for (const std::string domain : {"square", "cube"})
    for (int k = 3; k <= 4; ++k) {
      InvarianceOptions opt;
      opt.domain = domain;
      opt.k = k;
      opt.seed = 3;
      const ReportBundle b = run_invariance_suite(opt);
      CHECK(b.passed());
      CHECK(b.checks.size() == 7);
    }
}

TEST_CASE("each injected fault is detected by its check") {
  const std::map<std::string, std::string> target{{"dimension", "dimension_audit"}, {"compatibility", "compatibility"},
                                                  {"conformity", "conformity"},     {"c1", "c1_invariance"},
                                                  {"h10", "h10_preservation"},      {"linearity", "linearity"},
                                                  {"determinism", "determinism"}};
  CHECK(fault_names().size() == target.size());
  for (const std::string& fault : fault_names()) {
    InvarianceOptions opt;
    opt.fault = fault;
    const ReportBundle b = run_invariance_suite(opt);
    CAPTURE(fault);
    CHECK_FALSE(b.passed());
    const CheckResult* c = find_check(b, target.at(fault));
    REQUIRE(c != nullptr);
    CHECK_FALSE(c->passed);
  }
  InvarianceOptions bad;
  bad.fault = "gremlins";
  CHECK(error_of([&] { run_invariance_suite(bad); }) == ErrorCode::UsageError);
}

TEST_CASE("cflat reproduces a polynomial zeta") {
  CflatOptions opt;
  opt.zeta = "poly:1,2,-1,0.5,0,3,0,1,-2,0.25";
  opt.levels = 3;
  opt.base_level = 0;
  const ReportBundle b = run_cflat_experiment(opt);
  CHECK(b.passed());
  REQUIRE(find_check(b, "reproduction") != nullptr);
}

TEST_CASE("cflat orders on a short square run") {
  CflatOptions opt;
  opt.levels = 3;
  opt.base_level = 2;
  const ReportBundle b = run_cflat_experiment(opt);
  CHECK(b.passed());
  CHECK(b.value("error_h0", 1) < b.value("error_h0", 0));
}

TEST_CASE("csharp experiment is deterministic and rejects short runs") {
  CsharpOptions opt;
  opt.samples = 10;
  opt.base_level = 0;
  opt.seed = 11;
  const ReportBundle a = run_csharp_experiment(opt);
  const ReportBundle b = run_csharp_experiment(opt);
  std::ostringstream sa, sb;
  write_csv(sa, std::span(&a, 1));
  write_csv(sb, std::span(&b, 1));
  CHECK(sa.str() == sb.str());
  CHECK(a.passed());
  opt.threads = 2;
  std::ostringstream sc;
  const ReportBundle c = run_csharp_experiment(opt);
  write_csv(sc, std::span(&c, 1));
  CHECK(sc.str() == sa.str());

  opt.levels = 2;
  CHECK(error_of([&] { run_csharp_experiment(opt); }) == ErrorCode::UsageError);
  opt.levels = 3;
  opt.samples = 5;
  CHECK(error_of([&] { run_csharp_experiment(opt); }) == ErrorCode::UsageError);
}
