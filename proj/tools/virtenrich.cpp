#include "virtenrich/error.hpp"
#include "virtenrich/fields.hpp"
#include "virtenrich/log.hpp"
#include "virtenrich/report.hpp"
#include "virtenrich/verify.hpp"
#include "virtenrich/vtk.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

using namespace virtenrich;

namespace {

struct RunConfig {
  std::string domain = "square";
  int k = 3;
  int levels = -1;
  std::uint64_t seed = 0;
  std::string zeta = "sinsin";
  std::string out = ".";
  std::string format = "csv";
  int threads = 0;
  int samples = 20;
  int base_level = -1;
  int subdivisions = 2;
  bool randomize_choices = false;
  bool drop_first = false;
  std::string fault;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UsageError:
    case ErrorCode::UnsupportedOrder:
    case ErrorCode::UnsupportedDegree:
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
    case ErrorCode::NonConforming:
    case ErrorCode::DegenerateCell:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::AmbiguousGeometry:
      return 2;
    default:
      return 1;
  }
}

int thread_count(const RunConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void require_order(int k) {
  if (k < 2) throw Error(ErrorCode::UnsupportedOrder, "k = " + std::to_string(k) + " is below 2");
}

std::string output_path(const RunConfig& cfg, const std::string& stem, const std::string& ext) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create output directory " + cfg.out);
  return (std::filesystem::path(cfg.out) / (stem + "." + ext)).string();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  return out;
}

int finish(const RunConfig& cfg, const ReportBundle& bundle) {
  const ReportFormat format = parse_report_format(cfg.format);
  const std::string path = output_path(cfg, bundle.experiment, cfg.format);
  emit_report(std::span<const ReportBundle>(&bundle, 1), format, path);
  for (const CheckResult& c : bundle.checks)
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " max_residual=" << format_double(c.max_residual)
              << " tolerance=" << format_double(c.tolerance) << '\n';
  for (const ReportRow& r : bundle.rows)
    if (r.level < 0) std::cout << r.quantity << " = " << format_double(r.value) << '\n';
  std::cout << "report: " << path << '\n';
  log::info("wall time " + format_double(bundle.wall_seconds) + " s");
  return bundle.passed() ? 0 : 1;
}

std::shared_ptr<const SimplicialMesh> domain_mesh(const RunConfig& cfg, int default_levels) {
  const int levels = cfg.levels >= 0 ? cfg.levels : default_levels;
  return std::make_shared<const SimplicialMesh>(refine_uniform(load_domain(cfg.domain), levels));
}

int run_mesh(const RunConfig& cfg) {
  const auto mesh = domain_mesh(cfg, 0);
  const BoundaryClassification classes = classify_boundary(*mesh);
  std::array<int, 4> counts{};
  for (VertexClass c : classes.vertex) ++counts[static_cast<int>(c)];
  std::cout << "dimension " << mesh->dimension() << "\nvertices " << mesh->num_vertices() << "\nedges "
            << mesh->num_edges() << "\nfaces " << mesh->num_faces() << "\ncells " << mesh->num_cells() << "\nh "
            << format_double(mesh->max_cell_diameter()) << "\nhash " << mesh_hash(*mesh) << '\n';
  for (int i = 0; i < 4; ++i)
    std::cout << "vertices." << to_string(static_cast<VertexClass>(i)) << ' ' << counts[i] << '\n';
  const std::string path = output_path(cfg, "mesh", "txt");
  std::ofstream out = open_output(path);
  write_mesh(out, *mesh);
  std::cout << "mesh: " << path << '\n';
  return 0;
}

int run_enrich(const RunConfig& cfg) {
  require_order(cfg.k);
  const auto mesh = domain_mesh(cfg, 1);
  const Field field = make_field(cfg.zeta, mesh->dimension());
  const LagrangeFunction v = interpolate(build_space(mesh, cfg.k), field.value);
  const VemFunction ehv = enrich(v, classify_boundary(*mesh), {cfg.randomize_choices, cfg.seed});
  const std::string path = output_path(cfg, "enrich", cfg.format);
  std::ofstream out = open_output(path);
  if (cfg.format == "vtk") {
    write_vtk(out, ehv, cfg.subdivisions);
  } else if (cfg.format == "json") {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const DofEntry& e : dof_table(ehv))
      rows.push_back({{"kind", e.kind}, {"id", e.id}, {"slot", e.slot}, {"value", e.value}});
    out << nlohmann::ordered_json{{"k", ehv.k}, {"mesh_hash", mesh_hash(*mesh)}, {"dofs", rows}}.dump(2) << '\n';
  } else if (cfg.format == "csv") {
    out << "kind,id,slot,value\n";
    for (const DofEntry& e : dof_table(ehv))
      out << e.kind << ',' << e.id << ',' << e.slot << ',' << format_double(e.value) << '\n';
  } else {
    throw Error(ErrorCode::UsageError, "unknown format '" + cfg.format + "'");
  }
  std::cout << "dofs " << ehv.num_dofs() << "\noutput: " << path << '\n';
  return 0;
}

int run_export_vtk(const RunConfig& cfg) {
  require_order(cfg.k);
  const auto mesh = domain_mesh(cfg, 1);
  const Field field = make_field(cfg.zeta, mesh->dimension());
  const LagrangeFunction v = interpolate(build_space(mesh, cfg.k), field.value);
  const VemFunction ehv = enrich(v, classify_boundary(*mesh), {cfg.randomize_choices, cfg.seed});
  const std::string path = output_path(cfg, "proxy", "vtk");
  std::ofstream out = open_output(path);
  write_vtk(out, ehv, cfg.subdivisions);
  std::cout << "output: " << path << '\n';
  return 0;
}

void report_format_only(const RunConfig& cfg) {
  if (cfg.format != "csv" && cfg.format != "json")
    throw Error(ErrorCode::UsageError, "reports are written as csv or json");
}

int run_verify(const RunConfig& cfg) {
  require_order(cfg.k);
  report_format_only(cfg);
  InvarianceOptions opt;
  opt.domain = cfg.domain;
  opt.k = cfg.k;
  opt.seed = cfg.seed;
  opt.refinements = cfg.levels >= 0 ? cfg.levels : 1;
  opt.fault = cfg.fault;
  opt.randomize_choices = cfg.randomize_choices;
  opt.threads = thread_count(cfg);
  return finish(cfg, run_invariance_suite(opt));
}

int run_csharp(const RunConfig& cfg) {
  require_order(cfg.k);
  report_format_only(cfg);
  CsharpOptions opt;
  opt.domain = cfg.domain;
  opt.k = cfg.k;
  opt.levels = cfg.levels >= 0 ? cfg.levels : 3;
  opt.samples = cfg.samples;
  opt.seed = cfg.seed;
  if (cfg.base_level >= 0) opt.base_level = cfg.base_level;
  opt.randomize_choices = cfg.randomize_choices;
  opt.threads = thread_count(cfg);
  return finish(cfg, run_csharp_experiment(opt));
}

int run_cflat(const RunConfig& cfg) {
  require_order(cfg.k);
  report_format_only(cfg);
  CflatOptions opt;
  opt.domain = cfg.domain;
  opt.zeta = cfg.zeta;
  opt.k = cfg.k;
  opt.levels = cfg.levels >= 0 ? cfg.levels : 4;
  opt.base_level = cfg.base_level;
  opt.drop_first = cfg.drop_first;
  opt.randomize_choices = cfg.randomize_choices;
  opt.threads = thread_count(cfg);
  return finish(cfg, run_cflat_experiment(opt));
}

}  // namespace

int main(int argc, char** argv) {
  log::init_from_env();
  RunConfig cfg;
  CLI::App app{"Virtual enriching operator for Lagrange finite elements"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--domain", cfg.domain, "square, cube or file:<path>");
    sub->add_option("--levels", cfg.levels, "Refinement levels")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", cfg.out, "Output directory");
  };
  auto add_order = [&](CLI::App* sub) {
    sub->add_option("--k", cfg.k, "Polynomial order");
    sub->add_option("--seed", cfg.seed, "Random seed");
    sub->add_option("--threads", cfg.threads, "Worker thread cap (0: all cores)")->check(CLI::NonNegativeNumber);
    sub->add_flag("--randomize-choices", cfg.randomize_choices, "Seeded random skeleton choices");
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "json", "vtk"}));
  };

  CLI::App* mesh = app.add_subcommand("mesh", "Generate and inspect a mesh");
  add_common(mesh);
  CLI::App* enrich_cmd = app.add_subcommand("enrich", "Dump the dofs of E_h applied to the interpolant of a field");
  add_common(enrich_cmd);
  add_order(enrich_cmd);
  add_format(enrich_cmd);
  enrich_cmd->add_option("--zeta", cfg.zeta, "Field: sinsin, min-xy, zero, poly:c0,c1,...");
  enrich_cmd->add_option("--subdivisions", cfg.subdivisions, "VTK sub-lattice refinements")->check(CLI::Range(0, 6));
  CLI::App* verify = app.add_subcommand("verify", "Run the invariance suite");
  add_common(verify);
  add_order(verify);
  add_format(verify);
  verify->add_option("--inject-fault", cfg.fault, "Corrupt one check on purpose")
      ->check(CLI::IsMember(std::vector<std::string>(fault_names().begin(), fault_names().end())));
  CLI::App* csharp = app.add_subcommand("csharp", "Stability experiment for random Lagrange functions");
  add_common(csharp);
  add_order(csharp);
  add_format(csharp);
  csharp->add_option("--samples", cfg.samples, "Samples per level");
  csharp->add_option("--base-level", cfg.base_level, "Refinements before the first level");
  CLI::App* cflat = app.add_subcommand("cflat", "Convergence experiment for a smooth field");
  add_common(cflat);
  add_order(cflat);
  add_format(cflat);
  cflat->add_option("--zeta", cfg.zeta, "Field: sinsin, min-xy, zero, poly:c0,c1,...");
  cflat->add_option("--base-level", cfg.base_level, "Refinements before the first level");
  cflat->add_flag("--drop-first", cfg.drop_first, "Leave the first level out of the order fit");
  CLI::App* vtk = app.add_subcommand("export-vtk", "Write the energy projection of E_h Pi_h zeta as VTK");
  add_common(vtk);
  add_order(vtk);
  vtk->add_option("--zeta", cfg.zeta, "Field: sinsin, min-xy, zero, poly:c0,c1,...");
  vtk->add_option("--subdivisions", cfg.subdivisions, "Sub-lattice refinements per cell")->check(CLI::Range(0, 6));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*mesh) return run_mesh(cfg);
    if (*enrich_cmd) return run_enrich(cfg);
    if (*verify) return run_verify(cfg);
    if (*csharp) return run_csharp(cfg);
    if (*cflat) return run_cflat(cfg);
    return run_export_vtk(cfg);
  } catch (const Error& e) {
    std::cerr << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
