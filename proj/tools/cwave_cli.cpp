// Command-line front end: single runs, convergence studies, stability checks and
// exact-solution dumps for the built-in scenarios.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "cwave/compact_scheme.hpp"
#include "cwave/harness.hpp"
#include "cwave/oracles.hpp"

namespace {

using namespace cwave;
namespace fs = std::filesystem;

constexpr const char* kVersion = "cwave 1.0.0";

enum ExitCode { kOk = 0, kUnstable = 2, kConfig = 3, kIo = 4 };

struct Flags {
  std::string config;
  std::string scenario;
  std::size_t N = 0;
  std::size_t M = 0;
  std::string scheme;
  std::string first_step;
  int workers = -1;
  std::vector<double> snapshots;
  std::string ladder;
  std::string out;
  bool strict = false;
  std::size_t series_every = 0;
  double scale_l2 = 0.0;
  bool rho_weighted_aux = false;
  bool explicit_rho_u1 = false;
  std::string ricker;
  double t = -1.0;
};

Ladder parse_ladder(const std::string& text) {
  Ladder ladder;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    const auto x = item.find('x');
    if (x == std::string::npos) throw ConfigError("ladder entries look like 81x27");
    try {
      ladder.emplace_back(std::stoul(item.substr(0, x)), std::stoul(item.substr(x + 1)));
    } catch (const std::logic_error&) {
      throw ConfigError("bad ladder entry '" + item + "'");
    }
  }
  validate_ladder(ladder);
  return ladder;
}

bool given(const CLI::App& cmd, const std::string& name) {
  const CLI::Option* opt = cmd.get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

/// Config file first, then every flag the user actually passed.
RunConfig resolve(const Flags& f, const CLI::App& cmd) {
  RunConfig c;
  if (!f.config.empty()) c = load_config(f.config);
  if (!f.scenario.empty()) c.scenario = f.scenario;
  if (c.scenario.empty()) throw ConfigError("no scenario given");
  if (given(cmd, "--N")) c.N = f.N;
  if (given(cmd, "--M")) c.M = f.M;
  if (given(cmd, "--scheme")) {
    if (f.scheme == "both") {
      c.both_schemes = true;
    } else {
      c.scheme = parse_scheme(f.scheme);
      c.both_schemes = false;
    }
  }
  c.options.scheme = c.scheme;
  if (given(cmd, "--first-step")) c.options.compact.first_step = parse_first_step(f.first_step);
  if (given(cmd, "--workers")) c.options.workers = f.workers;
  if (given(cmd, "--snapshots")) c.snapshots = f.snapshots;
  if (given(cmd, "--ladder")) c.ladder = parse_ladder(f.ladder);
  if (given(cmd, "--out")) c.output_dir = f.out;
  if (given(cmd, "--strict")) c.strict = f.strict;
  if (given(cmd, "--series-every")) c.series_every = f.series_every;
  if (given(cmd, "--scale-l2")) c.series_scale_l2 = f.scale_l2;
  if (given(cmd, "--rho-weighted-aux")) c.options.compact.rho_weighted_first_step_aux = true;
  if (given(cmd, "--explicit-rho-u1")) c.options.explicit_first_step_rho_weight = true;
  if (given(cmd, "--ricker")) {
    if (f.ricker == "as-printed") {
      c.catalog.ricker = oracles::RickerNormalization::as_printed;
    } else if (f.ricker == "unit-mass") {
      c.catalog.ricker = oracles::RickerNormalization::unit_mass;
    } else {
      throw ConfigError("--ricker must be as-printed or unit-mass");
    }
  }
  if (c.options.workers < 0) throw ConfigError("--workers must be >= 0");
  return c;
}

oracles::Scenario load_scenario(const RunConfig& c) {
  try {
    return oracles::find_scenario(c.scenario, c.catalog);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
}

/// Explicit N and M, or N with M scaled by the scenario's N:M ratio, or the first ladder entry.
std::pair<std::size_t, std::size_t> mesh_size(const RunConfig& c, const oracles::Scenario& s) {
  if (c.N == 0) return s.ladder.front();
  if (c.M != 0) return {c.N, c.M};
  const auto [N0, M0] = s.ladder.front();
  const std::size_t M = (c.N * M0 + N0 - 1) / N0;
  return {c.N, std::max<std::size_t>(M, 2)};
}

int effective_workers(int requested) {
#ifdef _OPENMP
  return requested > 0 ? requested : omp_get_max_threads();
#else
  (void)requested;
  return 1;
#endif
}

/// Plane through the scenario centre (or the middle) of the last axis.
std::size_t slice_index(const SpaceMesh& mesh, const oracles::Scenario& s) {
  const AxisMesh& ax = mesh.axis(2);
  const double z = s.center.size() == 3 ? s.center[2] : ax.origin + 0.5 * ax.extent;
  return nearest_node(ax, z);
}

void print_stability(const StabilityReport& r) {
  std::printf("cfl number     %.6f\n", r.cfl_number);
  std::printf("courant ratio  %.6f\n", r.courant_ratio);
  std::printf("margin eps     %.6f\n", r.margin_eps);
  std::printf("margin eps0    %.6f\n", r.margin_eps0);
  std::printf("sufficient     %s\n", r.sufficient ? "yes" : "no");
  std::printf("verdict        %s\n", r.satisfied ? "satisfied" : "violated");
}

std::string snapshot_name(const char* prefix, std::size_t level, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_m%06zu.%s", prefix, level, ext);
  return buf;
}

int cmd_run(const RunConfig& c) {
  const oracles::Scenario s = load_scenario(c);
  const auto [N, M] = mesh_size(c, s);
  const TensorMesh mesh = s.mesh(N, M);
  const MediumSpec medium = s.medium(mesh.space);
  const StabilityReport stab = check_stability(mesh, medium);
  if (!stab.satisfied) {
    std::fprintf(stderr, "stability condition violated (courant ratio %.4f)\n",
                 stab.courant_ratio);
    if (c.strict) return kUnstable;
  }

  const fs::path dir = c.output_dir;
  RunManifest manifest;
  manifest.scenario = s.name;
  manifest.scheme = scheme_name(c.options.scheme);
  manifest.first_step = first_step_name(c.options.compact.first_step);
  manifest.meshes = {{N, M}};
  manifest.final_time = s.final_time;
  manifest.stability = stab;
  manifest.workers = effective_workers(c.options.workers);
  manifest.tool_version = kVersion;

  std::vector<Observer> observers;
  std::vector<TimeSeriesRow> series;
  if (s.has_exact() && c.series_every > 0) {
    observers.push_back(error_series_observer(s.exact, mesh,
                                              std::vector<double>(s.dim, s.a), c.series_every,
                                              series, c.series_scale_l2));
  }
  if (!c.snapshots.empty()) {
    Observer snap;
    snap.levels = snapshot_levels(mesh.time, c.snapshots);
    snap.callback = [&](const SchemeState& st, double t) {
      const std::string bin = snapshot_name("field", st.level, "bin");
      write_field_dump(dir / bin, st.v_cur, mesh.time, st.level);
      manifest.files.push_back({bin});
      if (mesh.space->dim() == 3) {
        const std::string txt = snapshot_name("slice", st.level, "txt");
        write_slice(dir / txt, extract_slice(st.v_cur, 2, slice_index(*mesh.space, s)),
                    *mesh.space, t);
        manifest.files.push_back({txt});
      }
    };
    observers.push_back(std::move(snap));
  }

  const auto t0 = std::chrono::steady_clock::now();
  const RunResult result = run(mesh, medium, s.data, c.options, observers);
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_field_dump(dir / "final.bin", result.state.v_cur, mesh.time, result.state.level);
  manifest.files.push_back({"final.bin"});
  if (!series.empty()) {
    write_time_series_csv(dir / "series.csv", series);
    manifest.files.push_back({"series.csv"});
  }
  std::printf("%s  %s  N=%zu M=%zu  stepping %.3f s\n", s.name.c_str(), manifest.scheme.c_str(),
              N, M, result.stepping_seconds);
  if (s.has_exact()) {
    const ErrorTriple e = measure_errors(result.state, s.exact, mesh, medium.a());
    std::printf("e_L2 %.6E  e_H1 %.6E  e_E %.6E\n", e.e_L2, e.e_H1, e.e_E);
    manifest.measurements = {{"e_L2", e.e_L2}, {"e_H1", e.e_H1}, {"e_E", e.e_E}};
  }
  write_manifest(dir / "manifest.json", manifest);
  return kOk;
}

int cmd_converge(const RunConfig& c) {
  const oracles::Scenario s = load_scenario(c);
  const Ladder ladder = c.ladder.empty() ? s.ladder : c.ladder;
  std::vector<SchemeKind> schemes;
  if (c.both_schemes) {
    schemes = {SchemeKind::compact, SchemeKind::explicit_leapfrog};
  } else {
    schemes = {c.options.scheme};
  }
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<ConvergenceTable> tables;
  std::string text = s.name + ": " + s.title + "\n";
  for (SchemeKind scheme : schemes) {
    RunOptions opt = c.options;
    opt.scheme = scheme;
    tables.push_back(convergence_study(s, ladder, opt));
    text += format_table(tables.back());
  }
  std::fputs(text.c_str(), stdout);

  const fs::path dir = c.output_dir;
  write_convergence_csv(dir / "convergence.csv", tables);
  {
    std::ofstream out(dir / "table.txt");
    out << text;
    if (!out) throw IoError("cannot write '" + (dir / "table.txt").string() + "'");
  }
  RunManifest manifest;
  manifest.scenario = s.name;
  manifest.scheme = c.both_schemes ? "both" : scheme_name(c.options.scheme);
  manifest.first_step = first_step_name(c.options.compact.first_step);
  manifest.meshes = ladder;
  manifest.final_time = s.final_time;
  manifest.workers = effective_workers(c.options.workers);
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const ConvergenceTable& t : tables) {
    for (const ConvergenceRow& r : t.rows) manifest.cpu_rel.push_back(r.cpu_rel);
  }
  manifest.files = {{"convergence.csv"}, {"table.txt"}};
  manifest.tool_version = kVersion;
  write_manifest(dir / "manifest.json", manifest);
  return kOk;
}

int cmd_check_stability(const RunConfig& c) {
  const oracles::Scenario s = load_scenario(c);
  const auto [N, M] = mesh_size(c, s);
  const TensorMesh mesh = s.mesh(N, M);
  const StabilityReport r = check_stability(mesh, s.medium(mesh.space));
  std::printf("%s  N=%zu M=%zu\n", s.name.c_str(), N, M);
  print_stability(r);
  return !r.satisfied && c.strict ? kUnstable : kOk;
}

int cmd_oracle(const RunConfig& c, double t) {
  const oracles::Scenario s = load_scenario(c);
  if (!s.has_exact()) throw ConfigError("scenario '" + s.name + "' has no exact solution");
  const auto [N, M] = mesh_size(c, s);
  if (t < 0.0) t = s.final_time;
  if (t > s.final_time * (1.0 + 1e-12)) throw ConfigError("--t beyond the final time");
  const TensorMesh mesh = s.mesh(N, M);
  GridField u(mesh.space);
  sample_into(u, [&s, t](std::span<const double> x) { return s.exact(x, t); });
  const fs::path dir = c.output_dir;
  const std::size_t level = static_cast<std::size_t>(std::llround(t / mesh.time.step()));
  write_field_dump(dir / "exact.bin", u, mesh.time, level);
  RunManifest manifest;
  manifest.scenario = s.name;
  manifest.scheme = "exact";
  manifest.meshes = {{N, M}};
  manifest.final_time = s.final_time;
  manifest.files = {{"exact.bin"}};
  if (mesh.space->dim() == 3) {
    write_slice(dir / "exact_slice.txt", extract_slice(u, 2, slice_index(*mesh.space, s)),
                *mesh.space, t);
    manifest.files.push_back({"exact_slice.txt"});
  }
  manifest.measurements = {{"t", t}, {"norm_l2", norm_l2(u)}};
  manifest.tool_version = kVersion;
  write_manifest(dir / "manifest.json", manifest);
  std::printf("%s exact solution at t=%.6g written to %s\n", s.name.c_str(), t,
              dir.string().c_str());
  return kOk;
}

void add_common(CLI::App* cmd, Flags& f, bool with_mesh) {
  cmd->add_option("scenario", f.scenario, "Scenario name (ex1a, ex1b, ex2a..ex2f, ex3)");
  cmd->add_option("--config", f.config, "JSON configuration file");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--workers", f.workers, "OpenMP threads (0 = default)");
  cmd->add_option("--ricker", f.ricker, "Ricker normalization: as-printed | unit-mass");
  if (with_mesh) {
    cmd->add_option("--N", f.N, "Space intervals per axis");
    cmd->add_option("--M", f.M, "Time steps");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourth-order compact scheme for the acoustic wave equation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Flags f;

  auto* run_cmd = app.add_subcommand("run", "Run one scenario");
  add_common(run_cmd, f, true);
  run_cmd->add_option("--scheme", f.scheme, "compact | explicit");
  run_cmd->add_option("--first-step", f.first_step, "two-level | three-level");
  run_cmd->add_option("--snapshots", f.snapshots, "Times to dump fields at")->delimiter(',');
  run_cmd->add_flag("--strict", f.strict, "Exit with code 2 when the stability check fails");
  run_cmd->add_option("--series-every", f.series_every, "Error series decimation (0 = off)");
  run_cmd->add_option("--scale-l2", f.scale_l2, "Scale factor for the L2 error series");
  run_cmd->add_flag("--rho-weighted-aux", f.rho_weighted_aux,
                    "Multiply the first-step aux sum by rho");
  run_cmd->add_flag("--explicit-rho-u1", f.explicit_rho_u1,
                    "Explicit scheme: weight u1 by rho in the first step");

  auto* conv_cmd = app.add_subcommand("converge", "Convergence study over an (N, M) ladder");
  add_common(conv_cmd, f, false);
  conv_cmd->add_option("--ladder", f.ladder, "Comma-separated NxM list, e.g. 81x27,135x45");
  conv_cmd->add_option("--scheme", f.scheme, "compact | explicit | both");
  conv_cmd->add_option("--first-step", f.first_step, "two-level | three-level");

  auto* stab_cmd = app.add_subcommand("check-stability", "Report the CFL-type conditions");
  add_common(stab_cmd, f, true);
  stab_cmd->add_flag("--strict", f.strict, "Exit with code 2 when the condition fails");

  auto* oracle_cmd = app.add_subcommand("oracle", "Dump the exact solution on a mesh");
  add_common(oracle_cmd, f, true);
  oracle_cmd->add_option("--t", f.t, "Time (default: final time)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run_cmd) return cmd_run(resolve(f, *run_cmd));
    if (*conv_cmd) return cmd_converge(resolve(f, *conv_cmd));
    if (*stab_cmd) return cmd_check_stability(resolve(f, *stab_cmd));
    if (*oracle_cmd) return cmd_oracle(resolve(f, *oracle_cmd), f.t);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kOk;
}
