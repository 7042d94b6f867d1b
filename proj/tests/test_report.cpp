#include "test_support.hpp"
#include "virtenrich/report.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace virtenrich;
using testing::error_of;

namespace {

ReportBundle sample() {
  ReportBundle b;
  b.experiment = "cflat";
  b.domain = "square";
  b.k = 4;
  b.seed = 12345678901234ULL;
  b.mesh_hash = mesh_hash(unit_square_mesh());
  b.h = {0.5, 0.25};
  b.add(0, 0.5, "error_h0", 0.1);
  b.add(1, 0.25, "error_h0", 1.0 / 3.0);
  b.add_summary("c_flat", std::numeric_limits<double>::quiet_NaN());
  b.check("order_h0", true, 3.9, 3.8);
  b.check("order_h1", false, 1.2, 1.8);
  return b;
}

std::string csv_of(std::span<const ReportBundle> b) {
  std::ostringstream out;
  write_csv(out, b);
  return out.str();
}

std::string json_of(std::span<const ReportBundle> b) {
  std::ostringstream out;
  write_json(out, b);
  return out.str();
}

}  // namespace

TEST_CASE("empty CSV is the header alone") { CHECK(csv_of({}) == "experiment,level,h,quantity,value\n"); }

TEST_CASE("CSV rows and checks") {
  const ReportBundle b = sample();
  const std::string csv = csv_of(std::span(&b, 1));
  CHECK(csv.find("cflat,1,0.25,error_h0,0.33333333333333331\n") != std::string::npos);
  CHECK(csv.find("cflat,-1,0,check.order_h0.passed,1\n") != std::string::npos);
  CHECK(csv.find("cflat,-1,0,check.order_h1.passed,0\n") != std::string::npos);
  CHECK(csv.find("cflat,-1,0,check.order_h1.max_residual,1.2\n") != std::string::npos);
  CHECK(csv_of(std::span(&b, 1)) == csv);
}

TEST_CASE("JSON round trip") {
  const ReportBundle b = sample();
  const std::string text = json_of(std::span(&b, 1));
  std::istringstream in(text);
  const std::vector<ReportBundle> back = read_json(in);
  REQUIRE(back.size() == 1);
  CHECK(back[0].experiment == b.experiment);
  CHECK(back[0].domain == b.domain);
  CHECK(back[0].k == b.k);
  CHECK(back[0].seed == b.seed);
  CHECK(back[0].mesh_hash == b.mesh_hash);
  CHECK(back[0].h == b.h);
  REQUIRE(back[0].rows.size() == b.rows.size());
  CHECK(back[0].rows[1].value == b.rows[1].value);
  CHECK(std::isnan(back[0].value("c_flat")));
  CHECK(back[0].checks.size() == 2);
  CHECK_FALSE(back[0].passed());
  CHECK(json_of(back) == text);
}

TEST_CASE("malformed JSON is a parse error") {
  std::istringstream in("{\"reports\": [{\"experiment\": 3}]}");
  CHECK(error_of([&] { read_json(in); }) == ErrorCode::ParseError);
}

TEST_CASE("value lookup and pass state") {
  ReportBundle b = sample();
  CHECK(b.value("error_h0", 0) == 0.1);
  CHECK(std::isnan(b.value("missing")));
  b.checks.pop_back();
  CHECK(b.passed());
}

TEST_CASE("format names") {
  CHECK(parse_report_format("csv") == ReportFormat::csv);
  CHECK(parse_report_format("json") == ReportFormat::json);
  CHECK(error_of([] { parse_report_format("xml"); }) == ErrorCode::UsageError);
}

TEST_CASE("mesh hash is a stable git blob id") {
  const std::string a = mesh_hash(unit_square_mesh());
  CHECK(a.size() == 40);
  CHECK(a == mesh_hash(unit_square_mesh()));
  CHECK(a != mesh_hash(refine_uniform(unit_square_mesh())));
  CHECK(a != mesh_hash(dilate(unit_square_mesh(), 2.0)));
}

TEST_CASE("unwritable report path") {
  const ReportBundle b = sample();
  CHECK(error_of([&] { emit_report(std::span(&b, 1), ReportFormat::csv, "/nonexistent/dir/out.csv"); }) ==
        ErrorCode::IoError);
}

TEST_CASE("doubles round trip through their text form") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300})
    CHECK(std::stod(format_double(v)) == v);
}
