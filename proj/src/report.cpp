#include "virtenrich/report.hpp"

#include "virtenrich/error.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace virtenrich {

using Json = nlohmann::ordered_json;

void ReportBundle::add(int level, double level_h, const std::string& quantity, double value) {
  rows.push_back({experiment, level, level_h, quantity, value});
}

void ReportBundle::check(const std::string& name, bool ok, double max_residual, double tolerance) {
  checks.push_back({name, ok, max_residual, tolerance});
}

bool ReportBundle::passed() const {
  for (const CheckResult& c : checks)
    if (!c.passed) return false;
  return true;
}

double ReportBundle::value(const std::string& quantity, int level) const {
  for (const ReportRow& r : rows)
    if (r.quantity == quantity && r.level == level) return r.value;
  return std::numeric_limits<double>::quiet_NaN();
}

ReportFormat parse_report_format(const std::string& name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw Error(ErrorCode::UsageError, "unknown report format '" + name + "'");
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double read_number(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

void write_csv(std::ostream& out, std::span<const ReportBundle> bundles) {
  out << "experiment,level,h,quantity,value\n";
  for (const ReportBundle& b : bundles) {
    for (const ReportRow& r : b.rows)
      out << csv_field(r.experiment) << ',' << r.level << ',' << format_double(r.h) << ',' << csv_field(r.quantity)
          << ',' << format_double(r.value) << '\n';
    for (const CheckResult& c : b.checks) {
      out << csv_field(b.experiment) << ",-1,0," << csv_field("check." + c.name + ".passed") << ','
          << (c.passed ? 1 : 0) << '\n';
      out << csv_field(b.experiment) << ",-1,0," << csv_field("check." + c.name + ".max_residual") << ','
          << format_double(c.max_residual) << '\n';
    }
  }
}

void write_json(std::ostream& out, std::span<const ReportBundle> bundles) {
  Json list = Json::array();
  for (const ReportBundle& b : bundles) {
    Json j;
    j["experiment"] = b.experiment;
    j["metadata"] = {{"domain", b.domain}, {"k", b.k}, {"seed", b.seed}, {"mesh_hash", b.mesh_hash}};
    Json hs = Json::array();
    for (double h : b.h) hs.push_back(number(h));
    j["h"] = hs;
    Json rows = Json::array();
    for (const ReportRow& r : b.rows)
      rows.push_back({{"level", r.level}, {"h", number(r.h)}, {"quantity", r.quantity}, {"value", number(r.value)}});
    j["rows"] = rows;
    Json checks = Json::array();
    for (const CheckResult& c : b.checks)
      checks.push_back({{"name", c.name},
                        {"passed", c.passed},
                        {"max_residual", number(c.max_residual)},
                        {"tolerance", number(c.tolerance)}});
    j["checks"] = checks;
    list.push_back(j);
  }
  out << Json{{"reports", list}}.dump(2) << '\n';
}

std::vector<ReportBundle> read_json(std::istream& in) {
  std::vector<ReportBundle> bundles;
  try {
    const Json doc = Json::parse(in);
    for (const Json& j : doc.at("reports")) {
      ReportBundle b;
      b.experiment = j.at("experiment").get<std::string>();
      const Json& meta = j.at("metadata");
      b.domain = meta.at("domain").get<std::string>();
      b.k = meta.at("k").get<int>();
      b.seed = meta.at("seed").get<std::uint64_t>();
      b.mesh_hash = meta.at("mesh_hash").get<std::string>();
      for (const Json& h : j.at("h")) b.h.push_back(read_number(h));
      for (const Json& r : j.at("rows"))
        b.rows.push_back({b.experiment, r.at("level").get<int>(), read_number(r.at("h")),
                          r.at("quantity").get<std::string>(), read_number(r.at("value"))});
      for (const Json& c : j.at("checks"))
        b.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(),
                            read_number(c.at("max_residual")), read_number(c.at("tolerance"))});
      bundles.push_back(std::move(b));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("report JSON: ") + e.what());
  }
  return bundles;
}

void emit_report(std::span<const ReportBundle> bundles, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  if (format == ReportFormat::csv)
    write_csv(out, bundles);
  else
    write_json(out, bundles);
  if (!out) throw Error(ErrorCode::IoError, "write to " + path + " failed");
}

std::string mesh_hash(const SimplicialMesh& mesh) {
  const std::string text = mesh_to_string(mesh);
  const std::string header = "blob " + std::to_string(text.size()) + '\0';
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr);
  EVP_DigestUpdate(ctx, header.data(), header.size());
  EVP_DigestUpdate(ctx, text.data(), text.size());
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

}  // namespace virtenrich
