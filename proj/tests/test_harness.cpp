#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>

#include "cwave/harness.hpp"
#include "json.hpp"

using namespace cwave;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("cwave_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

ConvergenceTable sample_table() {
  ConvergenceTable t;
  t.scenario = "ex2a";
  t.scheme = SchemeKind::compact;
  t.k = 4;
  ConvergenceRow r1;
  r1.N = 81;
  r1.M = 27;
  r1.errors = ErrorTriple{4.4440640e-4, 8.412731e-2, 7.3005995e-2, 0.3};
  r1.cpu_s = 0.25;
  ConvergenceRow r2;
  r2.N = 135;
  r2.M = 45;
  r2.errors = ErrorTriple{2.3083e-4, 6.1e-2, 5.2e-2, 0.3};
  r2.rates = std::array<double, 3>{1.282, 0.628, 0.663};
  r2.cpu_s = 1.9;
  r2.cpu_rel = 7.6;
  ConvergenceRow r3;
  r3.N = 225;
  r3.M = 75;
  r3.failure = "out of memory";
  t.rows = {r1, r2, r3};
  t.theoretical = std::array<double, 3>{1.2, 0.4, 0.4};
  return t;
}

}  // namespace

TEST(Rates, RungeRate) {
  EXPECT_NEAR(runge_rate(16.0, 1.0, 2.0), 4.0, 1e-14);
  EXPECT_NEAR(runge_rate(1.0, 2.0, 2.0), -1.0, 1e-14);
  EXPECT_NEAR(runge_rate(std::pow(5.0 / 3.0, 3.981), 1.0, 5.0 / 3.0), 3.981, 1e-12);
  EXPECT_THROW(runge_rate(0.0, 1.0, 2.0), std::invalid_argument);
  EXPECT_THROW(runge_rate(1.0, 1.0, 1.0), std::invalid_argument);
}

TEST(Rates, TheoreticalRates) {
  // lambda = 2.5 (u0 = w2): 2.000 / 1.200 / 1.200 for k = 4 and 1.667 / 1.000 / 1.000 for k = 2.
  EXPECT_NEAR(theoretical_rate(4, 2.5, NormKind::l2), 2.0, 1e-14);
  EXPECT_NEAR(theoretical_rate(4, 2.5, NormKind::h1), 1.2, 1e-14);
  EXPECT_NEAR(theoretical_rate(4, 2.5, NormKind::energy), 1.2, 1e-14);
  EXPECT_NEAR(theoretical_rate(2, 2.5, NormKind::l2), 5.0 / 3.0, 1e-14);
  EXPECT_NEAR(theoretical_rate(2, 2.5, NormKind::h1), 1.0, 1e-14);
  // Smooth data saturate at lambda = k + 1.
  EXPECT_NEAR(theoretical_rate(4, 7.0, NormKind::l2), 4.0, 1e-14);
  EXPECT_THROW(theoretical_rate(0, 1.0, NormKind::l2), std::invalid_argument);
}

TEST(Ladder, Validation) {
  EXPECT_NEAR(validate_ladder({{81, 27}, {135, 45}, {225, 75}}), 5.0 / 3.0, 1e-15);
  EXPECT_EQ(validate_ladder({{81, 27}}), 1.0);
  EXPECT_THROW(validate_ladder({}), ConfigError);
  EXPECT_THROW(validate_ladder({{81, 27}, {135, 46}}), ConfigError);
  EXPECT_THROW(validate_ladder({{81, 27}, {135, 45}, {270, 90}}), ConfigError);
  EXPECT_THROW(validate_ladder({{135, 45}, {81, 27}}), ConfigError);
}

TEST(ConvergenceStudy, SmallLadderAndTable) {
  const auto sc = oracles::find_scenario("ex1a");
  RunOptions opt;
  const ConvergenceTable t = convergence_study(sc, {{9, 3}, {15, 5}}, opt);
  ASSERT_EQ(t.rows.size(), 2u);
  ASSERT_TRUE(t.rows[0].errors && t.rows[1].errors);
  EXPECT_FALSE(t.rows[0].rates.has_value());
  ASSERT_TRUE(t.rows[1].rates.has_value());
  EXPECT_NEAR((*t.rows[1].rates)[0],
              runge_rate(t.rows[0].errors->e_L2, t.rows[1].errors->e_L2, 5.0 / 3.0), 1e-14);
  ASSERT_TRUE(t.theoretical.has_value());
  EXPECT_NEAR((*t.theoretical)[0], 4.0, 1e-14);
  const std::string text = format_table(t);
  EXPECT_NE(text.find("k=4"), std::string::npos);
  EXPECT_NE(text.find("4.000"), std::string::npos);
  EXPECT_THROW(convergence_study(oracles::find_scenario("ex3"), {{10, 10}}, opt), ConfigError);
}

TEST(ConvergenceStudy, ErrorsAreUnweightedH1AndWeightedEnergy) {
  const auto sc = oracles::find_scenario("ex1a");
  const TensorMesh mesh = sc.mesh(9, 3);
  const MediumSpec medium = sc.medium(mesh.space);
  const RunResult r = run(mesh, medium, sc.data, RunOptions{});
  const ErrorTriple e = measure_errors(r.state, sc.exact, mesh, medium.a());
  GridField err(mesh.space), err_prev(mesh.space);
  sample_into(err, [&](std::span<const double> x) { return sc.exact(x, mesh.time.node(3)); });
  sample_into(err_prev, [&](std::span<const double> x) { return sc.exact(x, mesh.time.node(2)); });
  for (std::size_t p = 0; p < err.size(); ++p) {
    err[p] -= r.state.v_cur[p];
    err_prev[p] -= r.state.v_prev[p];
  }
  const std::vector<double> unit{1.0, 1.0, 1.0};
  EXPECT_DOUBLE_EQ(e.e_L2, norm_l2(err));
  EXPECT_DOUBLE_EQ(e.e_H1, seminorm_h1(err, unit));
  EXPECT_DOUBLE_EQ(e.e_E, norm_energy(err_prev, err, mesh.time.step(), medium.a()));
  EXPECT_NEAR(e.e_H1, std::sqrt(3.0) * seminorm_h1(err, medium.a()), 1e-15);
}

TEST(Csv, ConvergenceRoundTrip) {
  TempDir dir;
  const std::vector<ConvergenceTable> tables{sample_table()};
  const fs::path path = dir.path() / "sub" / "convergence.csv";
  write_convergence_csv(path, tables);
  const auto rows = read_convergence_csv(path);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto& want = tables[0].rows[i];
    ASSERT_TRUE(rows[i].errors.has_value());
    EXPECT_NEAR(rows[i].errors->e_L2, want.errors->e_L2, 1e-12 * want.errors->e_L2);
    EXPECT_NEAR(rows[i].errors->e_H1, want.errors->e_H1, 1e-12 * want.errors->e_H1);
    EXPECT_NEAR(rows[i].errors->e_E, want.errors->e_E, 1e-12 * want.errors->e_E);
    EXPECT_EQ(rows[i].rates.has_value(), want.rates.has_value());
    EXPECT_EQ(rows[i].cpu_rel.has_value(), want.cpu_rel.has_value());
  }
  EXPECT_NEAR((*rows[1].rates)[0], 1.282, 1e-15);
  EXPECT_FALSE(rows[2].errors.has_value());
  EXPECT_EQ(rows[2].N, 225u);
}

TEST(Csv, EmptyTableGivesHeaderOnly) {
  TempDir dir;
  const fs::path path = dir.path() / "empty.csv";
  write_convergence_csv(path, {});
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(content, "scheme,k,N,M,e_L2,e_H1,e_E,p_L2,p_H1,p_E,cpu_s,cpu_rel\n");
  EXPECT_TRUE(read_convergence_csv(path).empty());
  EXPECT_THROW(read_convergence_csv(dir.path() / "missing.csv"), IoError);
}

TEST(Csv, TimeSeriesAndSlice) {
  TempDir dir;
  const std::vector<TimeSeriesRow> rows{{1, 0.1, {1e-3, 2e-3, 3e-3, 0.1}},
                                        {2, 0.2, {4e-3, 5e-3, 6e-3, 0.2}}};
  write_time_series_csv(dir.path() / "series.csv", rows);
  std::ifstream in(dir.path() / "series.csv");
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "m,t,e_L2,e_H1,e_E");
  EXPECT_EQ(first.substr(0, 6), "1,0.10");

  auto mesh = SpaceMesh::cube(3, 3.0, 6);
  GridField f(mesh);
  sample_into(f, [](std::span<const double> x) { return x[0] + 10 * x[1] + 100 * x[2]; });
  const std::size_t k = nearest_node(mesh->axis(2), 1.5);
  EXPECT_EQ(k, 3u);
  const Slice s = extract_slice(f, 2, k);
  EXPECT_EQ(s.axes[0], 0u);
  EXPECT_EQ(s.axes[1], 1u);
  EXPECT_DOUBLE_EQ(s.plane_coordinate, 1.5);
  EXPECT_DOUBLE_EQ(s.values[2 * 7 + 5], 1.0 + 25.0 + 150.0);
  write_slice(dir.path() / "slice.txt", s, *mesh, 0.6);
  std::ifstream sl(dir.path() / "slice.txt");
  std::getline(sl, header);
  const std::string prefix = "# axes=x,y N=6,6 t=";
  ASSERT_EQ(header.rfind(prefix, 0), 0u);
  EXPECT_DOUBLE_EQ(std::stod(header.substr(prefix.size())), 0.6);
  EXPECT_NE(header.find(" plane=z="), std::string::npos);
  EXPECT_THROW(nearest_node(mesh->axis(0), 5.0), ConfigError);
}

TEST(Slices, RestrictionNormAndFront) {
  auto fine_mesh = SpaceMesh::cube(3, 1.0, 8);
  auto coarse_mesh = SpaceMesh::cube(3, 1.0, 4);
  GridField fine(fine_mesh), coarse(coarse_mesh);
  const auto fn = [](std::span<const double> x) { return std::sin(3 * x[0]) + x[1] * x[2]; };
  sample_into(fine, fn);
  sample_into(coarse, fn);
  const Slice restricted = restrict_slice(extract_slice(fine, 2, 4), 2);
  const Slice direct = extract_slice(coarse, 2, 2);
  EXPECT_EQ(restricted.values, direct.values);
  EXPECT_THROW(restrict_slice(extract_slice(fine, 2, 4), 3), ConfigError);

  Slice ones = direct;
  std::fill(ones.values.begin(), ones.values.end(), 1.0);
  EXPECT_NEAR(slice_norm_l2(ones, *coarse_mesh), std::sqrt(9.0 / 16.0), 1e-15);

  const std::vector<std::pair<double, double>> line{
      {0.0, 0.0}, {0.5, 0.005}, {1.0, 0.2}, {1.5, 1.0}, {2.0, -0.3}, {2.5, 0.011}, {3.0, 0.0}};
  const auto front = wavefront(line, 1.5);
  ASSERT_TRUE(front.has_value());
  EXPECT_DOUBLE_EQ(front->left, 1.0);
  EXPECT_DOUBLE_EQ(front->right, 2.5);
  const std::vector<std::pair<double, double>> flat{{0.0, 0.0}, {1.0, 0.0}};
  EXPECT_FALSE(wavefront(flat, 0.5).has_value());

  const std::vector<std::size_t> through{3, 0, 5};
  const auto along_y = extract_line(fine, 1, through);
  ASSERT_EQ(along_y.size(), 9u);
  EXPECT_DOUBLE_EQ(along_y[2].first, 0.25);
  EXPECT_DOUBLE_EQ(along_y[2].second, fn(std::vector<double>{0.375, 0.25, 0.625}));
}

TEST(Dumps, FieldRoundTripAndManifest) {
  TempDir dir;
  auto mesh = std::make_shared<const SpaceMesh>(
      std::vector<AxisMesh>{AxisMesh(1.0, 3), AxisMesh(2.0, 5), AxisMesh(0.5, 4)});
  GridField f(mesh);
  sample_into(f, [](std::span<const double> x) { return std::exp(x[0]) - x[1] * x[2]; });
  f[7] = -0.0;
  f[8] = std::numeric_limits<double>::denorm_min();
  write_field_dump(dir.path() / "f.bin", f, TimeMesh(0.3, 27), 27);
  const FieldDump d = read_field_dump(dir.path() / "f.bin");
  EXPECT_EQ(d.axes, mesh->axes());
  EXPECT_DOUBLE_EQ(d.final_time, 0.3);
  EXPECT_EQ(d.steps, 27u);
  EXPECT_EQ(d.level, 27u);
  ASSERT_EQ(d.field.size(), f.size());
  EXPECT_EQ(std::memcmp(d.field.data(), f.data(), f.size() * sizeof(double)), 0);
  EXPECT_EQ(fs::file_size(dir.path() / "f.bin"),
            8u + 4u + 4u + 3u * 16u + 8u + 8u + 8u + f.size() * 8u);

  {
    std::ofstream bad(dir.path() / "bad.bin", std::ios::binary);
    bad << "NOTAFIELD";
  }
  EXPECT_THROW(read_field_dump(dir.path() / "bad.bin"), IoError);

  {
    std::ofstream txt(dir.path() / "hello.txt", std::ios::binary);
    txt << "123456789";
  }
  EXPECT_EQ(file_crc32(dir.path() / "hello.txt"), 0xCBF43926u);  // standard CRC-32 check value

  RunManifest m;
  m.scenario = "ex1a";
  m.scheme = "compact";
  m.meshes = {{81, 27}};
  m.files = {{"hello.txt", 0, 0}, {"f.bin", 0, 0}};
  m.stability = StabilityReport{0.81, 0.9, 0.73, 0.0, false, true};
  write_manifest(dir.path() / "manifest.json", m);
  std::ifstream in(dir.path() / "manifest.json");
  const auto doc = nlohmann::json::parse(in);
  EXPECT_EQ(doc["files"][0]["crc32"], "cbf43926");
  EXPECT_EQ(doc["files"][0]["bytes"], 9);
  EXPECT_EQ(doc["stability"]["satisfied"], true);
  EXPECT_EQ(doc["meshes"][0]["N"], 81);

  m.files = {{"nope.bin", 0, 0}};
  EXPECT_THROW(write_manifest(dir.path() / "manifest.json", m), IoError);
}

TEST(Config, ParsingAndErrors) {
  const RunConfig c = parse_config(R"({"scenario": "ex2a", "N": 81, "M": 27, "scheme": "explicit",
      "first_step": "three-level", "workers": 2, "ladder": [[81, 27], [135, 45]],
      "snapshots": [0.1, 0.2], "ricker_normalization": "unit-mass", "strict": true})");
  EXPECT_EQ(c.scenario, "ex2a");
  EXPECT_EQ(c.N, 81u);
  EXPECT_EQ(c.options.scheme, SchemeKind::explicit_leapfrog);
  EXPECT_EQ(c.options.compact.first_step, FirstStepVariant::three_level);
  EXPECT_EQ(c.options.workers, 2);
  EXPECT_EQ(c.ladder.size(), 2u);
  EXPECT_EQ(c.snapshots.size(), 2u);
  EXPECT_EQ(c.catalog.ricker, oracles::RickerNormalization::unit_mass);
  EXPECT_TRUE(c.strict);

  EXPECT_TRUE(parse_config(R"({"scenario": "ex2a", "scheme": "both"})").both_schemes);
  EXPECT_THROW(parse_config("{not json"), ConfigError);
  EXPECT_THROW(parse_config(R"({"N": 81})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"scenario": "ex1a", "bogus": 1})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"scenario": "ex1a", "N": "many"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"scenario": "ex1a", "M": 27})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"scenario": "ex1a", "N": 1, "M": 3})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"scenario": "ex1a", "scheme": "implicit"})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"scenario": "ex1a", "ladder": [[81, 27], [135, 44]]})"),
               ConfigError);
  EXPECT_THROW(load_config("/nonexistent/cwave.json"), IoError);
}

TEST(Observers, ErrorSeriesAndSnapshots) {
  const auto sc = oracles::find_scenario("ex1a");
  const TensorMesh mesh = sc.mesh(9, 6);
  std::vector<TimeSeriesRow> series;
  const std::vector<Observer> obs{
      error_series_observer(sc.exact, mesh, std::vector<double>(3, sc.a), 4, series, 2.0)};
  const RunResult r = run(mesh, sc.medium(mesh.space), sc.data, RunOptions{}, obs);
  ASSERT_EQ(series.size(), 2u);  // levels 4 and 6
  EXPECT_EQ(series[0].m, 4u);
  EXPECT_EQ(series[1].m, 6u);
  const ErrorTriple last = measure_errors(r.state, sc.exact, mesh, std::vector<double>(3, sc.a));
  EXPECT_DOUBLE_EQ(series[1].errors.e_L2, 2.0 * last.e_L2);

  const std::vector<double> times{0.0, 0.1, 0.3};
  EXPECT_EQ(snapshot_levels(mesh.time, times), (std::vector<std::size_t>{0, 2, 6}));
  const std::vector<double> bad{0.5};
  EXPECT_THROW(snapshot_levels(mesh.time, bad), ConfigError);
}
