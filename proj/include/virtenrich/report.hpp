#ifndef VIRTENRICH_REPORT_HPP
#define VIRTENRICH_REPORT_HPP

#include "virtenrich/mesh.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace virtenrich {

/// One scalar of an experiment. Summary rows use level -1 and h 0.
struct ReportRow {
  std::string experiment;
  int level = -1;
  double h = 0.0;
  std::string quantity;
  double value = 0.0;
};

struct CheckResult {
  std::string name;
  bool passed = true;
  double max_residual = 0.0;
  double tolerance = 0.0;
};

struct ReportBundle {
  std::string experiment;
  std::string domain;
  int k = 3;
  std::uint64_t seed = 0;
  std::string mesh_hash;  ///< hash of the coarsest mesh of the run
  std::vector<double> h;  ///< mesh size per level
  std::vector<ReportRow> rows;
  std::vector<CheckResult> checks;
  double wall_seconds = 0.0;  ///< informational, never written to report files

  void add(int level, double level_h, const std::string& quantity, double value);
  void add_summary(const std::string& quantity, double value) { add(-1, 0.0, quantity, value); }
  void check(const std::string& name, bool passed, double max_residual, double tolerance);
  bool passed() const;
  /// Value of a row, NaN when absent.
  double value(const std::string& quantity, int level = -1) const;
};

enum class ReportFormat { csv, json };

ReportFormat parse_report_format(const std::string& name);

/// CSV with header `experiment,level,h,quantity,value`. Checks become summary
/// rows `check.<name>.passed` and `check.<name>.max_residual`.
void write_csv(std::ostream& out, std::span<const ReportBundle> bundles);
void write_json(std::ostream& out, std::span<const ReportBundle> bundles);
std::vector<ReportBundle> read_json(std::istream& in);
/// Writes to a file; IoError when it cannot be opened.
void emit_report(std::span<const ReportBundle> bundles, ReportFormat format, const std::string& path);

/// Git blob style SHA-1 of the textual mesh.
std::string mesh_hash(const SimplicialMesh& mesh);
/// %.17g rendering used by every text output.
std::string format_double(double value);

}  // namespace virtenrich

#endif  // VIRTENRICH_REPORT_HPP
