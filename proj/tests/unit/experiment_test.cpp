#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zygmund/experiment.hpp"

using namespace zygmund;
namespace fs = std::filesystem;

namespace {

std::string read_file(fs::path const& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(std::string const& name) {
  fs::path const dir = fs::temp_directory_path() / ("zygmund_test_" + name);
  fs::remove_all(dir);
  return dir;
}

constexpr char const* small_config = R"(
# two quick p = 2 sweeps
n_start = 2
n_count = 4
tol = 1e-6

[spec]
name = sq
family = power:r=1.2
p = 2
beta = 0
s = 1

[spec]
name = sq_shifted
family = power:r=1.2
p = 2
beta = 0.5
s = 2
n_start = 4
)";

}  // namespace

TEST(GeometricGrid, Examples) {
  EXPECT_EQ(geometric_grid(8, 2.0, 4), (std::vector<std::size_t>{8, 16, 32, 64}));
  EXPECT_EQ(geometric_grid(10, 1.5, 3), (std::vector<std::size_t>{10, 15, 23}));
  EXPECT_THROW(geometric_grid(0, 2.0, 3), ConfigError);
  EXPECT_THROW(geometric_grid(1, 1.0, 3), ConfigError);
  EXPECT_THROW(geometric_grid(1, 2.0, 0), ConfigError);
  EXPECT_THROW(geometric_grid(1, 1.1, 5), ConfigError);  // 1, 1, ... not increasing
}

TEST(Config, ParsesGlobalsAndSpecs) {
  ExperimentConfig const cfg = parse_config_text(small_config);
  ASSERT_EQ(cfg.specs.size(), 2u);
  EXPECT_EQ(cfg.defaults.n_start, 2u);
  EXPECT_EQ(cfg.specs[0].name, "sq");
  EXPECT_EQ(cfg.specs[0].n_grid, (std::vector<std::size_t>{2, 4, 8, 16}));
  EXPECT_EQ(cfg.specs[1].n_grid, (std::vector<std::size_t>{4, 8, 16, 32}));
  EXPECT_EQ(cfg.specs[1].cls.s(), 2.0);
  EXPECT_EQ(cfg.specs[1].cls.beta(), 0.5);
  EXPECT_EQ(cfg.specs[0].bound, BoundKind::theorem1);
  EXPECT_TRUE(cfg.output_dir.empty());
}

TEST(Config, DefaultsAndMethods) {
  ExperimentConfig const cfg = parse_config_text(
      "parallelism = 3\noutput_dir = out\n[spec]\nfamily = power:r=2\nmethod = fejer\ns = 5\n"
      "[spec]\nfamily = powerlog:p=2,gamma=1.2,K=4\nbound = theorem3\n");
  EXPECT_EQ(cfg.parallelism, 3u);
  EXPECT_EQ(cfg.output_dir, "out");
  EXPECT_EQ(cfg.specs[0].name, "spec1");
  EXPECT_EQ(cfg.specs[0].cls.p(), 2.0);
  EXPECT_EQ(cfg.specs[0].cls.s(), 1.0);  // fejer pins s
  EXPECT_EQ(cfg.specs[0].cls.method(), ClassSpec::Method::fejer);
  EXPECT_EQ(cfg.specs[1].bound, BoundKind::theorem3);
  EXPECT_EQ(cfg.specs[1].n_grid.size(), 10u);
}

TEST(Config, Errors) {
  auto const bad = [](std::string const& text) {
    EXPECT_THROW(parse_config_text(text), ConfigError) << text;
  };
  bad("colour = red\n");
  bad("[spec]\nfamily = power:r=2\nwidth = 3\n");
  bad("[spec]\nfamily = power:r=2\np = 2\np = 3\n");
  bad("[spec]\nname = a\nfamily = power:r=2\n[spec]\nname = a\nfamily = power:r=3\n");
  bad("[spec]\nfamily = power:r=2\np = two\n");
  bad("[spec]\nfamily = power:r=2\np = 0x2\n");
  bad("[spec]\nfamily = power:r=2\np = 0.5\n");
  bad("[spec]\np = 2\n");
  bad("[spec]\nfamily = cubic\n");
  bad("[spec]\nfamily = power:r=2\nmethod = cesaro\n");
  bad("[spec]\nfamily = power:r=2\nbound = theorem4\n");
  bad("[spec]\nname = a/b\nfamily = power:r=2\n");
  bad("[other]\n");
  bad("just words\n");
  bad("n_count = 2.5\n");
  bad("ratio_low = 3\nratio_high = 2\n");
  bad("parallelism = 0\n");
  bad("[spec]\nfamily = power:r=2\nn_factor = 1\n");
  EXPECT_THROW(load_config("/nonexistent/zygmund.cfg"), ConfigError);
}

TEST(Verify, EmptyConfigWarns) {
  ExperimentConfig const cfg = parse_config_text("# nothing here\nn_start = 4\n");
  std::ostringstream out, err;
  EXPECT_EQ(verify(cfg, out, err), 0);
  EXPECT_NE(err.str().find("warning"), std::string::npos);
}

TEST(Sweep, OutputsAndDeterminism) {
  ExperimentConfig cfg = parse_config_text(small_config);
  std::vector<RatioReport> const first = run_sweep(cfg);
  ASSERT_EQ(first.size(), 2u);
  for (auto const& r : first) {
    EXPECT_EQ(r.rows.size(), 4u);
    EXPECT_EQ(r.verdict, Verdict::pass) << r.name << ": " << r.hypothesis_note;
    for (auto const& row : r.rows) {
      EXPECT_TRUE(row.ok()) << row.error;
      EXPECT_LE(row.L, row.U + row.quad_err + row.trunc_err);
    }
  }

  fs::path const serial = scratch_dir("serial"), parallel = scratch_dir("parallel");
  emit_outputs(first, serial.string());
  cfg.parallelism = 4;
  emit_outputs(run_sweep(cfg), parallel.string());
  for (std::string const name : {"sq", "sq_shifted"}) {
    for (std::string const ext : {".csv", ".plot"}) {
      std::string const a = read_file(serial / (name + ext));
      EXPECT_FALSE(a.empty());
      EXPECT_EQ(a, read_file(parallel / (name + ext))) << name << ext;
    }
  }
  std::string const csv = read_file(serial / "sq.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), ratio_csv_header);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  std::string const plot = read_file(serial / "sq.plot");
  EXPECT_NE(plot.find("# sq U\n"), std::string::npos);
  EXPECT_NE(plot.find("# sq L\n"), std::string::npos);
  EXPECT_NE(plot.find("# sq B\n"), std::string::npos);
  fs::remove_all(serial);
  fs::remove_all(parallel);
}

TEST(Sweep, NonSquareSummableKernelIsNotApplicable) {
  ExperimentConfig const cfg =
      parse_config_text("n_start = 4\nn_count = 3\n[spec]\nname = half\nfamily = power:r=0.5\np = 2\n");
  std::vector<RatioReport> const r = run_sweep(cfg);
  EXPECT_EQ(r[0].verdict, Verdict::not_applicable);
  for (auto const& row : r[0].rows) {
    EXPECT_TRUE(row.not_applicable);
    EXPECT_FALSE(row.error.empty());
  }
  std::ostringstream out, err;
  EXPECT_EQ(verify(cfg, out, err), 0);
}

TEST(Sweep, TightBandFails) {
  ExperimentConfig const cfg = parse_config_text(
      "n_start = 4\nn_count = 3\nratio_low = 0.99\nratio_high = 1.01\n"
      "[spec]\nname = tight\nfamily = power:r=1.5\np = 1\nbeta = 0\ns = 2\n");
  std::ostringstream out, err;
  EXPECT_EQ(verify(cfg, out, err), 1);
  EXPECT_NE(out.str().find("FAILED"), std::string::npos);
}

TEST(Sweep, HypothesisViolationIsReportedNotFailed) {
  ExperimentConfig const cfg = parse_config_text(
      "n_start = 4\nn_count = 3\n[spec]\nname = gm\nfamily = power:r=1.5\np = 1\ns = 0.25\n");
  std::vector<RatioReport> const r = run_sweep(cfg);
  EXPECT_EQ(r[0].verdict, Verdict::hypotheses_violated);
  EXPECT_NE(r[0].hypothesis_note.find("GM+"), std::string::npos);
}

TEST(Sweep, Theorem2NeedsBoundedAlpha) {
  ExperimentConfig const cfg = parse_config_text(
      "n_start = 16\nn_count = 2\n[spec]\nname = log\nfamily = powerlog:p=2,gamma=1.2,K=4\nbound = theorem2\n");
  std::vector<RatioReport> const r = run_sweep(cfg);
  EXPECT_EQ(r[0].verdict, Verdict::hypotheses_violated);
  EXPECT_NE(r[0].hypothesis_note.find("M_C"), std::string::npos);
}

TEST(Sweep, FejerRowsEqualZygmundOne) {
  ExperimentConfig const cfg = parse_config_text(
      "n_start = 4\nn_count = 3\n"
      "[spec]\nname = z\nfamily = power:r=1.2\np = 2\ns = 1\n"
      "[spec]\nname = f\nfamily = power:r=1.2\np = 2\nmethod = fejer\n");
  std::vector<RatioReport> const r = run_sweep(cfg);
  EXPECT_EQ(render_csv(r[0]), render_csv(r[1]));
}

TEST(Output, UnwritableDirectory) {
  fs::path const file = scratch_dir("blocker");
  { std::ofstream(file) << "x"; }
  RatioReport r;
  r.name = "a";
  EXPECT_THROW(emit_outputs({r}, (file / "sub").string()), OutputError);
  fs::remove_all(file);
}
