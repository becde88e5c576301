#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cwave/compact_scheme.hpp"
#include "cwave/grid.hpp"
#include "cwave/oracles.hpp"
#include "cwave/problem.hpp"

namespace cwave {

/// Bad or inconsistent configuration (CLI exit code 3).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File-system failure with the offending path in the message (CLI exit code 4).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- error measurement -------------------------------------------------------

/// Errors of u - v at one time level.
///
/// e_H1 is the plain discrete gradient norm (sum_k ||backward difference_k e||^2)^{1/2}
/// as tabulated in the reference results; e_E uses the a_k^2-weighted seminorm of
/// norm_energy. See README for the reasoning.
struct ErrorTriple {
  double e_L2 = 0.0;
  double e_H1 = 0.0;
  double e_E = 0.0;
  double time = 0.0;
};

enum class NormKind { l2, h1, energy };

/// Runge-type rate p = ln(e_coarse / e_fine) / ln q. Negative values (divergence) are
/// returned as they are. Throws std::invalid_argument for nonpositive errors or q <= 1.
double runge_rate(double e_coarse, double e_fine, double q);

/// (k / (k+1)) lambda for L2, (k / (k+1)) (lambda - 1) for H1 and energy. lambda is
/// clamped to [0, k+1] with a warning on std::clog.
double theoretical_rate(int k, double lambda, NormKind norm);

/// Errors of `state` (level m >= 1) against `exact`; the time difference of the error
/// uses the exact solution at t_{m-1} and t_m.
ErrorTriple measure_errors(const SchemeState& state, const SpaceTimeFn& exact,
                           const TensorMesh& mesh, std::span<const double> a);

// ---- convergence studies ------------------------------------------------------

using Ladder = std::vector<std::pair<std::size_t, std::size_t>>;

/// Scheme order tag k: 4 for the compact scheme, 2 for the explicit one.
int scheme_order(SchemeKind scheme);
const char* scheme_name(SchemeKind scheme);

struct ConvergenceRow {
  std::size_t N = 0;
  std::size_t M = 0;
  std::optional<ErrorTriple> errors;          // empty when the run failed
  std::optional<std::array<double, 3>> rates;  // L2, H1, E; absent on the first row
  double cpu_s = 0.0;                          // stepping loop wall clock
  std::optional<double> cpu_rel;               // cpu_s / previous row's cpu_s
  std::string failure;                         // reason when errors is empty
};

struct ConvergenceTable {
  std::string scenario;
  SchemeKind scheme = SchemeKind::compact;
  int k = 4;
  double q = 5.0 / 3.0;
  std::vector<ConvergenceRow> rows;
  std::optional<std::array<double, 3>> theoretical;  // needs a smoothness order
};

/// Throws ConfigError unless consecutive entries satisfy N2/N1 = M2/M1 = q exactly as
/// rationals (q is the ratio of the first pair). Returns q; 1 for a single entry.
double validate_ladder(const Ladder& ladder);

/// Runs the ladder sequentially. A failing run marks its row and the table carries on.
/// Throws ConfigError when the scenario has no exact solution.
ConvergenceTable convergence_study(const oracles::Scenario& scenario, const Ladder& ladder,
                                   const RunOptions& options);

/// Text table in the reference layout (errors with 7 significant digits, rates with 3).
std::string format_table(const ConvergenceTable& table);

// ---- observers and extraction --------------------------------------------------

struct TimeSeriesRow {
  std::size_t m = 0;
  double t = 0.0;
  ErrorTriple errors;
};

/// Observer that measures errors every `every`-th level (and at the last level) starting
/// at level 1. With `scale_l2` the L2 column is multiplied by that factor.
Observer error_series_observer(SpaceTimeFn exact, const TensorMesh& mesh,
                               std::vector<double> a, std::size_t every,
                               std::vector<TimeSeriesRow>& out, double scale_l2 = 1.0);

/// Levels nearest to the requested times; throws ConfigError for times outside [0, T].
std::vector<std::size_t> snapshot_levels(const TimeMesh& time, std::span<const double> times);

/// Values on the 2D plane x_axis = node `index` of a 3D field (other axes in order).
struct Slice {
  std::array<std::size_t, 2> axes{};
  std::array<std::size_t, 2> shape{};
  std::size_t plane_axis = 0;
  double plane_coordinate = 0.0;
  std::vector<double> values;  // row-major in (axes[0], axes[1])
};

Slice extract_slice(const GridField& field, std::size_t axis, std::size_t index);

/// Node index on `axis` nearest to coordinate x; throws ConfigError outside the axis.
std::size_t nearest_node(const AxisMesh& axis, double x);

/// Values along `axis` through the node with the given multi-index (its entry on `axis`
/// is ignored). Returns (coordinate, value) pairs.
std::vector<std::pair<double, double>> extract_line(const GridField& field, std::size_t axis,
                                                    std::span<const std::size_t> through);

/// Outermost coordinates left and right of `center` where |u| >= fraction * max |u| on
/// the line. Empty when the line is identically zero.
struct FrontPosition {
  double left = 0.0;
  double right = 0.0;
};
std::optional<FrontPosition> wavefront(std::span<const std::pair<double, double>> line,
                                       double center, double fraction = 0.01);

/// Mesh L2 norm over a slice: sqrt(h_a h_b sum over interior slice nodes of v^2).
double slice_norm_l2(const Slice& slice, const SpaceMesh& mesh);

/// Nodal restriction of a fine slice onto a coarse one when the fine mesh refines the
/// coarse one by an integer factor. Throws ConfigError otherwise.
Slice restrict_slice(const Slice& fine, std::size_t factor);

// ---- file outputs --------------------------------------------------------------

/// Full-precision CSV (scheme,k,N,M,e_L2,e_H1,e_E,p_L2,p_H1,p_E,cpu_s,cpu_rel).
void write_convergence_csv(const std::filesystem::path& path,
                           std::span<const ConvergenceTable> tables);
std::vector<ConvergenceRow> read_convergence_csv(const std::filesystem::path& path);

/// m,t,e_L2,e_H1,e_E
void write_time_series_csv(const std::filesystem::path& path,
                           std::span<const TimeSeriesRow> rows);

/// Header line then one line per row of the slice.
void write_slice(const std::filesystem::path& path, const Slice& slice, const SpaceMesh& mesh,
                 double t);

/// Binary dump: "CWFIELD\0", u32 version, u32 n, per axis (f64 X_k, u64 N_k), f64 T,
/// u64 M, u64 level, then f64 values in storage order; all little-endian.
void write_field_dump(const std::filesystem::path& path, const GridField& field,
                      const TimeMesh& time, std::size_t level);

struct FieldDump {
  std::vector<AxisMesh> axes;
  double final_time = 0.0;
  std::size_t steps = 0;
  std::size_t level = 0;
  GridField field;
};
FieldDump read_field_dump(const std::filesystem::path& path);

/// CRC-32 of a file's contents.
std::uint32_t file_crc32(const std::filesystem::path& path);

struct ManifestFile {
  std::string path;  // relative to the manifest directory
  std::uint32_t crc32 = 0;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string scenario;
  std::string scheme;
  std::string first_step;
  std::vector<std::pair<std::size_t, std::size_t>> meshes;  // (N, M) per run
  double final_time = 0.0;
  std::optional<StabilityReport> stability;
  int workers = 0;
  double wall_seconds = 0.0;
  std::vector<std::optional<double>> cpu_rel;
  std::vector<ManifestFile> files;
  std::vector<std::pair<std::string, double>> measurements;  // named extra numbers
  std::string tool_version;
};

/// Checksums every listed file (paths relative to the manifest) and writes JSON.
void write_manifest(const std::filesystem::path& path, RunManifest manifest);

// ---- configuration -------------------------------------------------------------

struct RunConfig {
  std::string scenario;
  std::size_t N = 0;  // 0: first ladder entry of the scenario
  std::size_t M = 0;
  SchemeKind scheme = SchemeKind::compact;
  bool both_schemes = false;  // convergence studies only
  RunOptions options;
  oracles::CatalogOptions catalog;
  Ladder ladder;  // empty: scenario default
  std::vector<double> snapshots;
  std::size_t series_every = 1;  // 0 disables the error time series
  double series_scale_l2 = 1.0;
  bool strict = false;
  std::filesystem::path output_dir = "cwave_out";
};

/// Parses a JSON configuration. Unknown keys and wrong types throw ConfigError.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

const char* first_step_name(FirstStepVariant v);
FirstStepVariant parse_first_step(const std::string& name);
SchemeKind parse_scheme(const std::string& name);

}  // namespace cwave
