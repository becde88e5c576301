#include "cwave/harness.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numeric>
#include <sstream>

#include <boost/crc.hpp>

#include "json.hpp"

namespace cwave {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string io_context(const fs::path& path, const char* what) {
  return std::string(what) + " '" + path.string() + "'";
}

std::ofstream open_for_writing(const fs::path& path, std::ios::openmode mode = {}) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(io_context(path.parent_path(), "cannot create directory") + ": " +
                          ec.message());
  }
  std::ofstream out(path, mode | std::ios::out | std::ios::trunc);
  if (!out) throw IoError(io_context(path, "cannot open for writing"));
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError(io_context(path, "write failed for"));
}

}  // namespace

// ---- rates and errors --------------------------------------------------------

double runge_rate(double e_coarse, double e_fine, double q) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0)) {
    throw std::invalid_argument("runge_rate: errors must be positive");
  }
  if (!(q > 1.0)) throw std::invalid_argument("runge_rate: refinement ratio must exceed 1");
  return std::log(e_coarse / e_fine) / std::log(q);
}

double theoretical_rate(int k, double lambda, NormKind norm) {
  if (k <= 0) throw std::invalid_argument("theoretical_rate: order must be positive");
  const double hi = static_cast<double>(k + 1);
  if (lambda < 0.0 || lambda > hi) {
    std::clog << "warning: smoothness order " << lambda << " outside [0, " << hi
              << "], clamped\n";
    lambda = std::clamp(lambda, 0.0, hi);
  }
  const double factor = static_cast<double>(k) / hi;
  return norm == NormKind::l2 ? factor * lambda : factor * (lambda - 1.0);
}

ErrorTriple measure_errors(const SchemeState& state, const SpaceTimeFn& exact,
                           const TensorMesh& mesh, std::span<const double> a) {
  if (!exact) throw std::invalid_argument("measure_errors: no exact solution");
  if (state.level < 1 || state.v_prev.empty()) {
    throw std::invalid_argument("measure_errors: need two time levels");
  }
  const double t = mesh.time.node(state.level);
  const double t_prev = mesh.time.node(state.level - 1);
  GridField e(mesh.space);
  GridField e_prev(mesh.space);
  sample_into(e, [&exact, t](std::span<const double> x) { return exact(x, t); });
  sample_into(e_prev, [&exact, t_prev](std::span<const double> x) { return exact(x, t_prev); });
  for (std::size_t p = 0; p < e.size(); ++p) {
    e[p] -= state.v_cur[p];
    e_prev[p] -= state.v_prev[p];
  }
  const std::vector<double> unit(mesh.space->dim(), 1.0);
  ErrorTriple r;
  r.time = t;
  r.e_L2 = norm_l2(e);
  r.e_H1 = seminorm_h1(e, unit);
  r.e_E = norm_energy(e_prev, e, mesh.time.step(), a);
  return r;
}

// ---- convergence studies ------------------------------------------------------

int scheme_order(SchemeKind scheme) { return scheme == SchemeKind::compact ? 4 : 2; }

const char* scheme_name(SchemeKind scheme) {
  return scheme == SchemeKind::compact ? "compact" : "explicit";
}

double validate_ladder(const Ladder& ladder) {
  if (ladder.empty()) throw ConfigError("ladder is empty");
  for (const auto& [N, M] : ladder) {
    if (N < 2 || M < 2) throw ConfigError("ladder entries need N >= 2 and M >= 2");
  }
  if (ladder.size() == 1) return 1.0;
  const std::size_t N0 = ladder[0].first;
  const std::size_t N1 = ladder[1].first;
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    const auto [Na, Ma] = ladder[i - 1];
    const auto [Nb, Mb] = ladder[i];
    // Nb/Na == Mb/Ma == N1/N0 as rationals
    if (Nb * Ma != Na * Mb || Nb * N0 != Na * N1) {
      throw ConfigError("ladder ratios N2/N1 and M2/M1 must be equal and constant");
    }
    if (Nb <= Na) throw ConfigError("ladder must refine monotonically");
  }
  return static_cast<double>(N1) / static_cast<double>(N0);
}

ConvergenceTable convergence_study(const oracles::Scenario& scenario, const Ladder& ladder,
                                   const RunOptions& options) {
  if (!scenario.has_exact()) {
    throw ConfigError("scenario '" + scenario.name + "' has no exact solution");
  }
  ConvergenceTable table;
  table.scenario = scenario.name;
  table.scheme = options.scheme;
  table.k = scheme_order(options.scheme);
  table.q = validate_ladder(ladder);
  if (scenario.smoothness) {
    const double lambda = std::min(*scenario.smoothness, static_cast<double>(table.k + 1));
    table.theoretical = {theoretical_rate(table.k, lambda, NormKind::l2),
                         theoretical_rate(table.k, lambda, NormKind::h1),
                         theoretical_rate(table.k, lambda, NormKind::energy)};
  }
  const std::vector<double> a(scenario.dim, scenario.a);
  for (const auto& [N, M] : ladder) {
    ConvergenceRow row;
    row.N = N;
    row.M = M;
    try {
      const TensorMesh mesh = scenario.mesh(N, M);
      const MediumSpec medium = scenario.medium(mesh.space);
      RunResult result = run(mesh, medium, scenario.data, options);
      row.cpu_s = result.stepping_seconds;
      row.errors = measure_errors(result.state, scenario.exact, mesh, medium.a());
    } catch (const std::exception& ex) {
      row.failure = ex.what();
    }
    if (!table.rows.empty()) {
      const ConvergenceRow& prev = table.rows.back();
      if (prev.errors && row.errors) {
        auto rate = [&](double c, double f) {
          return c > 0.0 && f > 0.0 ? runge_rate(c, f, table.q)
                                    : std::numeric_limits<double>::quiet_NaN();
        };
        row.rates = std::array<double, 3>{rate(prev.errors->e_L2, row.errors->e_L2),
                                          rate(prev.errors->e_H1, row.errors->e_H1),
                                          rate(prev.errors->e_E, row.errors->e_E)};
      }
      if (prev.cpu_s > 0.0 && row.cpu_s > 0.0) row.cpu_rel = row.cpu_s / prev.cpu_s;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string format_table(const ConvergenceTable& table) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-6s %5s %5s  %-14s %-14s %-14s %6s %6s %6s %8s\n", "", "N",
                "M", "e_L2", "e_H1", "e_E", "p_L2", "p_H1", "p_E", "CPU_rel");
  os << buf;
  const std::string tag = "k=" + std::to_string(table.k);
  bool first = true;
  for (const ConvergenceRow& row : table.rows) {
    const char* label = first ? tag.c_str() : "";
    first = false;
    if (!row.errors) {
      std::snprintf(buf, sizeof buf, "%-6s %5zu %5zu  failed: %s\n", label, row.N, row.M,
                    row.failure.c_str());
      os << buf;
      continue;
    }
    const ErrorTriple& e = *row.errors;
    std::snprintf(buf, sizeof buf, "%-6s %5zu %5zu  %-14.6E %-14.6E %-14.6E", label, row.N,
                  row.M, e.e_L2, e.e_H1, e.e_E);
    os << buf;
    if (row.rates) {
      std::snprintf(buf, sizeof buf, " %6.3f %6.3f %6.3f", (*row.rates)[0], (*row.rates)[1],
                    (*row.rates)[2]);
    } else {
      std::snprintf(buf, sizeof buf, " %6s %6s %6s", "-", "-", "-");
    }
    os << buf;
    if (row.cpu_rel) {
      std::snprintf(buf, sizeof buf, " %8.2f\n", *row.cpu_rel);
    } else {
      std::snprintf(buf, sizeof buf, " %8s\n", "-");
    }
    os << buf;
  }
  if (table.theoretical) {
    const auto& th = *table.theoretical;
    std::snprintf(buf, sizeof buf, "%-6s %5s %5s  %-14s %-14s %-14s %6.3f %6.3f %6.3f\n", "", "*",
                  "*", "-", "-", "-", th[0], th[1], th[2]);
    os << buf;
  }
  return os.str();
}

// ---- observers and extraction --------------------------------------------------

Observer error_series_observer(SpaceTimeFn exact, const TensorMesh& mesh,
                               std::vector<double> a, std::size_t every,
                               std::vector<TimeSeriesRow>& out, double scale_l2) {
  if (every == 0) throw std::invalid_argument("error_series_observer: every must be >= 1");
  Observer obs;
  obs.every_level = true;
  const std::size_t last = mesh.time.steps;
  obs.callback = [exact = std::move(exact), mesh, a = std::move(a), every, last, &out,
                  scale_l2](const SchemeState& s, double t) {
    if (s.level == 0) return;
    if (s.level % every != 0 && s.level != last) return;
    TimeSeriesRow row;
    row.m = s.level;
    row.t = t;
    row.errors = measure_errors(s, exact, mesh, a);
    row.errors.e_L2 *= scale_l2;
    out.push_back(row);
  };
  return obs;
}

std::vector<std::size_t> snapshot_levels(const TimeMesh& time, std::span<const double> times) {
  std::vector<std::size_t> levels;
  for (double t : times) {
    if (!(t >= -1e-12 && t <= time.extent * (1.0 + 1e-12))) {
      throw ConfigError("snapshot time " + full_precision(t) + " outside [0, T]");
    }
    const double m = std::round(t / time.step());
    levels.push_back(static_cast<std::size_t>(std::max(0.0, m)));
  }
  return levels;
}

Slice extract_slice(const GridField& field, std::size_t axis, std::size_t index) {
  const SpaceMesh& mesh = field.mesh();
  if (mesh.dim() != 3) throw std::invalid_argument("extract_slice: needs a 3D field");
  if (axis >= 3 || index >= mesh.shape(axis)) {
    throw std::invalid_argument("extract_slice: plane out of range");
  }
  Slice s;
  s.plane_axis = axis;
  s.plane_coordinate = mesh.axis(axis).node(index);
  std::size_t j = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    if (k != axis) s.axes[j++] = k;
  }
  s.shape = {mesh.shape(s.axes[0]), mesh.shape(s.axes[1])};
  s.values.resize(s.shape[0] * s.shape[1]);
  for (std::size_t i0 = 0; i0 < s.shape[0]; ++i0) {
    for (std::size_t i1 = 0; i1 < s.shape[1]; ++i1) {
      const std::size_t flat =
          index * mesh.stride(axis) + i0 * mesh.stride(s.axes[0]) + i1 * mesh.stride(s.axes[1]);
      s.values[i0 * s.shape[1] + i1] = field[flat];
    }
  }
  return s;
}

std::size_t nearest_node(const AxisMesh& axis, double x) {
  const double pos = (x - axis.origin) / axis.step();
  if (pos < -0.5 || pos > static_cast<double>(axis.intervals) + 0.5) {
    throw ConfigError("coordinate " + full_precision(x) + " outside the mesh axis");
  }
  return static_cast<std::size_t>(std::clamp(std::round(pos), 0.0,
                                             static_cast<double>(axis.intervals)));
}

std::vector<std::pair<double, double>> extract_line(const GridField& field, std::size_t axis,
                                                    std::span<const std::size_t> through) {
  const SpaceMesh& mesh = field.mesh();
  if (axis >= mesh.dim() || through.size() != mesh.dim()) {
    throw std::invalid_argument("extract_line: bad axis or index");
  }
  std::vector<std::size_t> index(through.begin(), through.end());
  index[axis] = 0;
  const std::size_t base = mesh.ravel(index);
  std::vector<std::pair<double, double>> line(mesh.shape(axis));
  for (std::size_t i = 0; i < line.size(); ++i) {
    line[i] = {mesh.axis(axis).node(i), field[base + i * mesh.stride(axis)]};
  }
  return line;
}

std::optional<FrontPosition> wavefront(std::span<const std::pair<double, double>> line,
                                       double center, double fraction) {
  double peak = 0.0;
  for (const auto& [x, v] : line) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return std::nullopt;
  const double level = fraction * peak;
  FrontPosition f{center, center};
  for (const auto& [x, v] : line) {
    if (std::abs(v) < level) continue;
    f.left = std::min(f.left, x);
    f.right = std::max(f.right, x);
  }
  return f;
}

double slice_norm_l2(const Slice& slice, const SpaceMesh& mesh) {
  const double area = mesh.step(slice.axes[0]) * mesh.step(slice.axes[1]);
  double sum = 0.0;
  for (std::size_t i0 = 1; i0 + 1 < slice.shape[0]; ++i0) {
    double row = 0.0;
    for (std::size_t i1 = 1; i1 + 1 < slice.shape[1]; ++i1) {
      const double v = slice.values[i0 * slice.shape[1] + i1];
      row += v * v;
    }
    sum += row;
  }
  return std::sqrt(area * sum);
}

Slice restrict_slice(const Slice& fine, std::size_t factor) {
  if (factor == 0) throw ConfigError("restrict_slice: zero factor");
  Slice coarse = fine;
  for (std::size_t d = 0; d < 2; ++d) {
    if ((fine.shape[d] - 1) % factor != 0) {
      throw ConfigError("restrict_slice: fine mesh is not an integer refinement");
    }
    coarse.shape[d] = (fine.shape[d] - 1) / factor + 1;
  }
  coarse.values.assign(coarse.shape[0] * coarse.shape[1], 0.0);
  for (std::size_t i0 = 0; i0 < coarse.shape[0]; ++i0) {
    for (std::size_t i1 = 0; i1 < coarse.shape[1]; ++i1) {
      coarse.values[i0 * coarse.shape[1] + i1] =
          fine.values[i0 * factor * fine.shape[1] + i1 * factor];
    }
  }
  return coarse;
}

// ---- CSV -------------------------------------------------------------------------

namespace {

constexpr const char* kTableHeader = "scheme,k,N,M,e_L2,e_H1,e_E,p_L2,p_H1,p_E,cpu_s,cpu_rel";

std::string optional_field(const std::optional<double>& v) {
  return v ? full_precision(*v) : std::string();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> parse_optional(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  return std::strtod(cell.c_str(), nullptr);
}

}  // namespace

void write_convergence_csv(const fs::path& path, std::span<const ConvergenceTable> tables) {
  std::ofstream out = open_for_writing(path);
  out << kTableHeader << '\n';
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const ConvergenceTable& table : tables) {
    for (const ConvergenceRow& row : table.rows) {
      const ErrorTriple e = row.errors.value_or(ErrorTriple{nan, nan, nan, nan});
      out << scheme_name(table.scheme) << ',' << table.k << ',' << row.N << ',' << row.M << ','
          << full_precision(e.e_L2) << ',' << full_precision(e.e_H1) << ','
          << full_precision(e.e_E);
      for (std::size_t j = 0; j < 3; ++j) {
        out << ',' << (row.rates ? full_precision((*row.rates)[j]) : std::string());
      }
      out << ',' << full_precision(row.cpu_s) << ',' << optional_field(row.cpu_rel) << '\n';
    }
  }
  finish(out, path);
}

std::vector<ConvergenceRow> read_convergence_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(io_context(path, "cannot open"));
  std::string line;
  if (!std::getline(in, line) || line != kTableHeader) {
    throw IoError(io_context(path, "unexpected header in"));
  }
  std::vector<ConvergenceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 12) throw IoError(io_context(path, "malformed row in"));
    ConvergenceRow row;
    row.N = std::stoul(cells[2]);
    row.M = std::stoul(cells[3]);
    ErrorTriple e;
    e.e_L2 = std::strtod(cells[4].c_str(), nullptr);
    e.e_H1 = std::strtod(cells[5].c_str(), nullptr);
    e.e_E = std::strtod(cells[6].c_str(), nullptr);
    if (!std::isnan(e.e_L2)) row.errors = e;
    if (!cells[7].empty()) {
      row.rates = std::array<double, 3>{*parse_optional(cells[7]), *parse_optional(cells[8]),
                                        *parse_optional(cells[9])};
    }
    row.cpu_s = std::strtod(cells[10].c_str(), nullptr);
    row.cpu_rel = parse_optional(cells[11]);
    rows.push_back(row);
  }
  return rows;
}

void write_time_series_csv(const fs::path& path, std::span<const TimeSeriesRow> rows) {
  std::ofstream out = open_for_writing(path);
  out << "m,t,e_L2,e_H1,e_E\n";
  for (const TimeSeriesRow& r : rows) {
    out << r.m << ',' << full_precision(r.t) << ',' << full_precision(r.errors.e_L2) << ','
        << full_precision(r.errors.e_H1) << ',' << full_precision(r.errors.e_E) << '\n';
  }
  finish(out, path);
}

void write_slice(const fs::path& path, const Slice& slice, const SpaceMesh& mesh, double t) {
  static constexpr const char* names[] = {"x", "y", "z"};
  std::ofstream out = open_for_writing(path);
  out << "# axes=" << names[slice.axes[0]] << ',' << names[slice.axes[1]]
      << " N=" << mesh.axis(slice.axes[0]).intervals << ','
      << mesh.axis(slice.axes[1]).intervals << " t=" << full_precision(t)
      << " plane=" << names[slice.plane_axis] << '=' << full_precision(slice.plane_coordinate)
      << '\n';
  for (std::size_t i0 = 0; i0 < slice.shape[0]; ++i0) {
    for (std::size_t i1 = 0; i1 < slice.shape[1]; ++i1) {
      if (i1) out << ' ';
      out << full_precision(slice.values[i0 * slice.shape[1] + i1]);
    }
    out << '\n';
  }
  finish(out, path);
}

// ---- binary field dumps ----------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'C', 'W', 'F', 'I', 'E', 'L', 'D', '\0'};
constexpr std::uint32_t kDumpVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<char, sizeof(T)>>(value);
    std::reverse(bytes.begin(), bytes.end());
    out.write(bytes.data(), sizeof(T));
  } else {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
  }
}

template <typename T>
T get(std::istream& in, const fs::path& path) {
  std::array<char, sizeof(T)> bytes{};
  if (!in.read(bytes.data(), sizeof(T))) throw IoError(io_context(path, "truncated dump"));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  return std::bit_cast<T>(bytes);
}

}  // namespace

void write_field_dump(const fs::path& path, const GridField& field, const TimeMesh& time,
                      std::size_t level) {
  std::ofstream out = open_for_writing(path, std::ios::binary);
  const SpaceMesh& mesh = field.mesh();
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kDumpVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(mesh.dim()));
  for (const AxisMesh& ax : mesh.axes()) {
    put<double>(out, ax.extent);
    put<std::uint64_t>(out, ax.intervals);
  }
  put<double>(out, time.extent);
  put<std::uint64_t>(out, time.steps);
  put<std::uint64_t>(out, level);
  if constexpr (std::endian::native == std::endian::little) {
    out.write(reinterpret_cast<const char*>(field.data()),
              static_cast<std::streamsize>(field.size() * sizeof(double)));
  } else {
    for (double v : field.values()) put<double>(out, v);
  }
  finish(out, path);
}

FieldDump read_field_dump(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(io_context(path, "cannot open"));
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw IoError(io_context(path, "not a field dump:"));
  }
  if (get<std::uint32_t>(in, path) != kDumpVersion) {
    throw IoError(io_context(path, "unsupported dump version in"));
  }
  const auto n = get<std::uint32_t>(in, path);
  if (n == 0 || n > 16) throw IoError(io_context(path, "bad dimension in"));
  FieldDump d;
  for (std::uint32_t k = 0; k < n; ++k) {
    const double extent = get<double>(in, path);
    const auto intervals = get<std::uint64_t>(in, path);
    d.axes.emplace_back(extent, static_cast<std::size_t>(intervals));
  }
  d.final_time = get<double>(in, path);
  d.steps = static_cast<std::size_t>(get<std::uint64_t>(in, path));
  d.level = static_cast<std::size_t>(get<std::uint64_t>(in, path));
  d.field = GridField(std::make_shared<const SpaceMesh>(d.axes));
  for (double& v : d.field.values()) v = get<double>(in, path);
  return d;
}

// ---- manifest ------------------------------------------------------------------

std::uint32_t file_crc32(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(io_context(path, "cannot open"));
  boost::crc_32_type crc;
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    crc.process_bytes(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return crc.checksum();
}

void write_manifest(const fs::path& path, RunManifest manifest) {
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  json files = json::array();
  for (ManifestFile& f : manifest.files) {
    const fs::path full = dir / f.path;
    std::error_code ec;
    f.bytes = fs::file_size(full, ec);
    if (ec) throw IoError(io_context(full, "manifest entry missing:"));
    f.crc32 = file_crc32(full);
    char hex[9];
    std::snprintf(hex, sizeof hex, "%08x", f.crc32);
    files.push_back({{"path", f.path}, {"crc32", hex}, {"bytes", f.bytes}});
  }
  json meshes = json::array();
  for (const auto& [N, M] : manifest.meshes) meshes.push_back({{"N", N}, {"M", M}});
  json cpu_rel = json::array();
  for (const auto& c : manifest.cpu_rel) cpu_rel.push_back(c ? json(*c) : json(nullptr));
  json doc = {{"scenario", manifest.scenario},
              {"scheme", manifest.scheme},
              {"first_step", manifest.first_step},
              {"meshes", meshes},
              {"T", manifest.final_time},
              {"workers", manifest.workers},
              {"wall_seconds", manifest.wall_seconds},
              {"cpu_rel", cpu_rel},
              {"files", files},
              {"tool_version", manifest.tool_version}};
  if (manifest.stability) {
    const StabilityReport& s = *manifest.stability;
    doc["stability"] = {{"cfl_number", s.cfl_number},     {"courant_ratio", s.courant_ratio},
                        {"margin_eps", s.margin_eps},     {"margin_eps0", s.margin_eps0},
                        {"sufficient", s.sufficient},     {"satisfied", s.satisfied}};
  }
  json measurements = json::object();
  for (const auto& [name, value] : manifest.measurements) measurements[name] = value;
  doc["measurements"] = measurements;
  std::ofstream out = open_for_writing(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

// ---- configuration -------------------------------------------------------------

const char* first_step_name(FirstStepVariant v) {
  return v == FirstStepVariant::two_level ? "two-level" : "three-level";
}

FirstStepVariant parse_first_step(const std::string& name) {
  if (name == "two-level") return FirstStepVariant::two_level;
  if (name == "three-level") return FirstStepVariant::three_level;
  throw ConfigError("first step must be 'two-level' or 'three-level', got '" + name + "'");
}

SchemeKind parse_scheme(const std::string& name) {
  if (name == "compact") return SchemeKind::compact;
  if (name == "explicit") return SchemeKind::explicit_leapfrog;
  throw ConfigError("scheme must be 'compact' or 'explicit', got '" + name + "'");
}

namespace {

template <typename T>
T read_key(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("config key '") + key + "': " + ex.what());
  }
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& ex) {
    throw ConfigError(std::string("config is not valid JSON: ") + ex.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known = {
      "scenario",   "N",        "M",          "scheme",       "first_step",
      "rho_weighted_first_step_aux",          "explicit_first_step_rho_weight",
      "workers",    "ladder",   "snapshots",  "series_every", "series_scale_l2",
      "strict",     "output_dir", "ricker_normalization",     "w0_source_zero_at_t0"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  RunConfig c;
  if (!doc.contains("scenario")) throw ConfigError("config needs a 'scenario'");
  c.scenario = read_key<std::string>(doc, "scenario");
  if (doc.contains("N")) c.N = read_key<std::size_t>(doc, "N");
  if (doc.contains("M")) c.M = read_key<std::size_t>(doc, "M");
  if (doc.contains("scheme")) {
    const auto s = read_key<std::string>(doc, "scheme");
    if (s == "both") {
      c.both_schemes = true;
    } else {
      c.scheme = parse_scheme(s);
    }
  }
  c.options.scheme = c.scheme;
  if (doc.contains("first_step")) {
    c.options.compact.first_step = parse_first_step(read_key<std::string>(doc, "first_step"));
  }
  if (doc.contains("rho_weighted_first_step_aux")) {
    c.options.compact.rho_weighted_first_step_aux =
        read_key<bool>(doc, "rho_weighted_first_step_aux");
  }
  if (doc.contains("explicit_first_step_rho_weight")) {
    c.options.explicit_first_step_rho_weight =
        read_key<bool>(doc, "explicit_first_step_rho_weight");
  }
  if (doc.contains("workers")) c.options.workers = read_key<int>(doc, "workers");
  if (c.options.workers < 0) throw ConfigError("workers must be >= 0");
  if (doc.contains("ladder")) {
    for (const auto& entry : read_key<std::vector<std::vector<std::size_t>>>(doc, "ladder")) {
      if (entry.size() != 2) throw ConfigError("ladder entries are [N, M] pairs");
      c.ladder.emplace_back(entry[0], entry[1]);
    }
    validate_ladder(c.ladder);
  }
  if (doc.contains("snapshots")) c.snapshots = read_key<std::vector<double>>(doc, "snapshots");
  if (doc.contains("series_every")) c.series_every = read_key<std::size_t>(doc, "series_every");
  if (doc.contains("series_scale_l2")) {
    c.series_scale_l2 = read_key<double>(doc, "series_scale_l2");
  }
  if (doc.contains("strict")) c.strict = read_key<bool>(doc, "strict");
  if (doc.contains("output_dir")) c.output_dir = read_key<std::string>(doc, "output_dir");
  if (doc.contains("ricker_normalization")) {
    const auto r = read_key<std::string>(doc, "ricker_normalization");
    if (r == "as-printed") {
      c.catalog.ricker = oracles::RickerNormalization::as_printed;
    } else if (r == "unit-mass") {
      c.catalog.ricker = oracles::RickerNormalization::unit_mass;
    } else {
      throw ConfigError("ricker_normalization must be 'as-printed' or 'unit-mass'");
    }
  }
  if (doc.contains("w0_source_zero_at_t0")) {
    c.catalog.w0_source_zero_at_t0 = read_key<bool>(doc, "w0_source_zero_at_t0");
  }
  if (c.N == 0 && c.M != 0) throw ConfigError("M given without N");
  if (c.N == 1 || c.M == 1) throw ConfigError("N and M must be at least 2");
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(io_context(path, "cannot open config"));
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text);
}

}  // namespace cwave
