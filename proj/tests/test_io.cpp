#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mlr/config.hpp"
#include "mlr/csv.hpp"
#include "mlr/errors.hpp"
#include "mlr/estimator.hpp"
#include "mlr/snapshot.hpp"
#include "mlr/svg.hpp"

using namespace mlr;

namespace {

// RAII temp path in the test working directory.
struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(bool(f));
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

int count_occurrences(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (std::size_t pos = hay.find(needle); pos != std::string::npos;
       pos = hay.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("format_double round-trips doubles exactly") {
  const std::vector<double> values{0.0,    1.0,     -2.5,     1.0 / 3.0,
                                   1e-300, 1.7e308, 0.1,      42.0,
                                   3.141592653589793, -123456.75};
  for (const double v : values) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(42.0) == "42");
  CHECK(format_double(0.0) == "0");
}

TEST_CASE("table to_csv layout") {
  Table t;
  t.columns = {"a", "b"};
  t.append_row({1.0, 2.0});
  t.append_row({0.5, -3.0});
  CHECK(to_csv(t) == "a,b\n1,2\n0.5,-3\n");
}

TEST_CASE("csv file round trip is byte-stable") {
  Table t;
  t.columns = {"n", "x", "y"};
  t.append_row({1.0, 0.1, -1.0 / 3.0});
  t.append_row({2.0, 1e-17, 3.0});
  TempFile tmp("tmp_io_roundtrip.csv");
  write_csv(tmp.path, t);
  const Table back = read_csv(tmp.path);
  CHECK(back.columns == t.columns);
  REQUIRE(back.rows.size() == t.rows.size());
  CHECK(to_csv(back) == to_csv(t));
  const std::vector<double> ys = back.numeric_column("y");
  CHECK(ys[0] == -1.0 / 3.0);
  CHECK(ys[1] == 3.0);
}

TEST_CASE("numeric_column names the missing column and the alternatives") {
  Table t;
  t.columns = {"n", "x"};
  t.append_row({1.0, 2.0});
  CHECK_THROWS_WITH_AS(t.numeric_column("z"),
                       doctest::Contains("available: n x"), ConfigError);
  t.rows[0][1] = "spaghetti";
  CHECK_THROWS_AS(t.numeric_column("x"), IoError);
}

TEST_CASE("append_row enforces the table width") {
  Table t;
  t.columns = {"a", "b"};
  CHECK_THROWS_AS(t.append_row(std::vector<double>{1.0}), ConfigError);
  CHECK_THROWS_AS(t.append_row(std::vector<std::string>{"1", "2", "3"}),
                  ConfigError);
}

TEST_CASE("read_csv diagnoses malformed files") {
  SUBCASE("ragged row") {
    TempFile tmp("tmp_io_ragged.csv");
    std::ofstream(tmp.path) << "a,b\n1,2\n3\n";
    CHECK_THROWS_WITH_AS(read_csv(tmp.path), doctest::Contains("line 3"),
                         IoError);
  }
  SUBCASE("empty file") {
    TempFile tmp("tmp_io_empty.csv");
    std::ofstream(tmp.path) << "";
    CHECK_THROWS_AS(read_csv(tmp.path), IoError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_csv("tmp_io_does_not_exist.csv"), IoError);
  }
  SUBCASE("crlf and trailing newline are tolerated") {
    TempFile tmp("tmp_io_crlf.csv");
    std::ofstream(tmp.path) << "a,b\r\n1,2\r\n";
    const Table t = read_csv(tmp.path);
    CHECK(t.columns == std::vector<std::string>{"a", "b"});
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0][1] == "2");
  }
}

TEST_CASE("snapshot columns for d = 2") {
  const std::vector<std::string> expected{"n",     "theta_0", "theta_1",
                                          "p_0_0", "p_0_1",   "p_1_1",
                                          "q",     "r"};
  CHECK(snapshot_columns(2) == expected);
}

TEST_CASE("snapshots round-trip through CSV and JSON bit-exactly") {
  EstimatorConfig cfg;
  cfg.d = 2;
  cfg.theta0 = Vector{0.3, -0.2};
  cfg.P0 = SymMatrix::from_rows({{4.0, 1.0}, {1.0, 2.0}});
  EstimatorState state = new_state(cfg);

  GeneratorConfig gen;
  gen.d = 2;
  gen.beta_star = Vector{1.0, -1.0};
  gen.seed = 17;
  Generator g(gen);

  std::vector<StateSnapshot> snaps;
  snaps.push_back(make_snapshot(state));
  for (int i = 0; i < 5; ++i) {
    const LabeledObservation obs = g.next();
    state = step(state, obs.phi, obs.y, cfg).state;
    snaps.push_back(make_snapshot(state));
  }

  TempFile csv_tmp("tmp_io_snaps.csv");
  TempFile json_tmp("tmp_io_snaps.json");
  write_snapshots_csv(csv_tmp.path, snaps, 2);
  write_snapshots_json(json_tmp.path, snaps);

  for (const auto& back : {read_snapshots_csv(csv_tmp.path),
                           read_snapshots_json(json_tmp.path)}) {
    REQUIRE(back.size() == snaps.size());
    for (std::size_t i = 0; i < snaps.size(); ++i) {
      CHECK(back[i].n == snaps[i].n);
      CHECK(back[i].q == snaps[i].q);
      CHECK(back[i].r == snaps[i].r);
      for (std::size_t k = 0; k < 2; ++k) {
        CHECK(back[i].theta[k] == snaps[i].theta[k]);
      }
      REQUIRE(back[i].p_upper.size() == 3);
      for (std::size_t k = 0; k < 3; ++k) {
        CHECK(back[i].p_upper[k] == snaps[i].p_upper[k]);
      }
    }
  }
}

TEST_CASE("restore_state recomputes beta and resumes identically") {
  EstimatorConfig cfg;
  cfg.d = 2;
  cfg.theta0 = Vector{0.1, 0.1};
  cfg.P0 = SymMatrix::scaled_identity(2, 10.0);
  EstimatorState state = new_state(cfg);
  GeneratorConfig gen;
  gen.d = 2;
  gen.beta_star = Vector{2.0, 1.0};
  Generator g(gen);
  for (int i = 0; i < 20; ++i) {
    const LabeledObservation obs = g.next();
    state = step(state, obs.phi, obs.y, cfg).state;
  }

  const EstimatorState restored = restore_state(make_snapshot(state));
  CHECK(restored.n == state.n);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(restored.theta[k] == state.theta[k]);
    CHECK(restored.beta[k] == state.q * state.theta[k]);
  }

  // Continuing from the restored state is bitwise the same as continuing
  // from the original.
  const LabeledObservation obs = g.next();
  const StepResult a = step(state, obs.phi, obs.y, cfg);
  const StepResult b = step(restored, obs.phi, obs.y, cfg);
  CHECK(a.state.theta[0] == b.state.theta[0]);
  CHECK(a.state.q == b.state.q);
  CHECK(a.state.r == b.state.r);
  CHECK(a.state.P(0, 1) == b.state.P(0, 1));
}

TEST_CASE("minimal config document gives the documented defaults") {
  const RunConfig cfg = parse_config("{}");
  CHECK(cfg.generator.d == 3);
  CHECK(cfg.generator.beta_star[0] == 1.0);
  CHECK(cfg.generator.beta_star[1] == 2.0);
  CHECK(cfg.generator.beta_star[2] == -1.0);
  CHECK(cfg.generator.p == 0.6);
  CHECK(cfg.generator.sigma2 == 1.0);
  CHECK(cfg.generator.regressor.kind == RegressorKind::Ar1);
  CHECK(cfg.generator.regressor.a == 0.8);
  CHECK(cfg.generator.seed == 1);
  CHECK(cfg.estimator.d == 3);
  CHECK(cfg.estimator.delta == 0.1);
  CHECK(cfg.estimator.sigma2 == 1.0);
  CHECK(cfg.estimator.theta0[0] == 0.1);
  CHECK(cfg.estimator.P0(0, 0) == 100.0);
  CHECK(cfg.estimator.P0(0, 1) == 0.0);
  CHECK(cfg.estimator.q0 == 1.0);
  CHECK(cfg.estimator.cap_mode.kind == CapKind::Faithful);
  CHECK(cfg.horizon == 100000);
  CHECK(cfg.record.kind == RecordSpec::Kind::Geometric);
  CHECK(cfg.outputs == "out");
  CHECK(cfg.replications == 1);
  CHECK(cfg.parallel_jobs == 1);
  CHECK(!cfg.snapshots);
  CHECK(cfg.analysis.kappa == doctest::Approx(0.71).epsilon(1e-12));
  CHECK(cfg.warnings.empty());
}

TEST_CASE("config errors carry the offending field path") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"generator":{"p":1.5}})"),
                       doctest::Contains("generator.p"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"estimator":{"delta":0.5}})"),
                       doctest::Contains("0.5 itself is excluded"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"generator":{"dd":1}})"),
                       doctest::Contains("generator.dd"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"frobnicate":1})"),
                       doctest::Contains("frobnicate"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"horizon":0})"),
                       doctest::Contains("horizon"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"generator":{"seed":-4}})"),
                       doctest::Contains("generator.seed"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"estimator":{"theta0":[1]}})"),
                       doctest::Contains("estimator.theta0"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"estimator":{"delta":0.49},"analysis":{"epsilon":0.02}})"),
      doctest::Contains("analysis.epsilon"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("nonsense{"),
                       doctest::Contains("invalid JSON"), ConfigError);
}

TEST_CASE("matrix-valued config fields accept scalar and row forms") {
  const RunConfig scalar = parse_config(R"({"estimator":{"P0":50}})");
  CHECK(scalar.estimator.P0(0, 0) == 50.0);
  CHECK(scalar.estimator.P0(1, 1) == 50.0);
  CHECK(scalar.estimator.P0(0, 1) == 0.0);

  const RunConfig rows = parse_config(
      R"({"generator":{"d":2,"beta_star":[1,1]},"estimator":{"P0":[[2,1],[1,2]]}})");
  CHECK(rows.estimator.P0(0, 0) == 2.0);
  CHECK(rows.estimator.P0(0, 1) == 1.0);

  CHECK_THROWS_WITH_AS(parse_config(R"({"estimator":{"P0":[[1,0],[0,1]]}})"),
                       doctest::Contains("estimator.P0"), ConfigError);
}

TEST_CASE("record_every accepts a stride or the geometric token") {
  CHECK(parse_config(R"({"record_every":500})").record.kind ==
        RecordSpec::Kind::Stride);
  CHECK(parse_config(R"({"record_every":500})").record.stride == 500);
  CHECK(parse_config(R"({"record_every":"geometric"})").record.kind ==
        RecordSpec::Kind::Geometric);
  CHECK_THROWS_AS(parse_config(R"({"record_every":0})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"record_every":2.5})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"record_every":"weekly"})"), ConfigError);
}

TEST_CASE("cap mode tokens") {
  CHECK(parse_cap_mode("faithful").kind == CapKind::Faithful);
  CHECK(parse_cap_mode("unbounded").kind == CapKind::Unbounded);
  const CapMode c = parse_cap_mode("constant:2.5");
  CHECK(c.kind == CapKind::Constant);
  CHECK(c.bound == 2.5);
  CHECK(cap_mode_label(c) == "constant:2.5");
  CHECK(cap_mode_label(CapMode::faithful()) == "faithful");
  CHECK(cap_mode_label(CapMode::unbounded()) == "unbounded");
  CHECK_THROWS_AS(parse_cap_mode("constant:1.0"), ConfigError);
  CHECK_THROWS_AS(parse_cap_mode("constant:soup"), ConfigError);
  CHECK_THROWS_AS(parse_cap_mode("bogus"), ConfigError);
}

TEST_CASE("estimator variance falls back sensibly") {
  // Mirrors the generator when that is noisy...
  CHECK(parse_config(R"({"generator":{"sigma2":4}})").estimator.sigma2 == 4.0);
  // ...and falls back to 1 when the generator is noise-free.
  CHECK(parse_config(R"({"generator":{"sigma2":0}})").estimator.sigma2 == 1.0);
  // An explicit estimator value always wins.
  CHECK(parse_config(R"({"generator":{"sigma2":4},"estimator":{"sigma2":2}})")
            .estimator.sigma2 == 2.0);
}

TEST_CASE("explosive AR(1) pole is a warning, not an error") {
  const RunConfig cfg = parse_config(
      R"({"generator":{"regressor":{"kind":"ar1","a":1.0,"input_scale_exponent":0.1}}})");
  REQUIRE(!cfg.warnings.empty());
  CHECK(cfg.warnings[0].find("explosive") != std::string::npos);
}

TEST_CASE("sweep axes parse and validate") {
  const RunConfig cfg = parse_config(
      R"({"sweep":{"p":[0.6,0.9],"delta":[0,0.2],"sigma2":[0.5],
           "regressor":[{"kind":"iid_gaussian"},{"kind":"ar1","a":0.5}]}})");
  CHECK(cfg.sweep.p == std::vector<double>{0.6, 0.9});
  CHECK(cfg.sweep.delta == std::vector<double>{0.0, 0.2});
  CHECK(cfg.sweep.sigma2 == std::vector<double>{0.5});
  REQUIRE(cfg.sweep.regressors.size() == 2);
  CHECK(cfg.sweep.regressors[0].kind == RegressorKind::IidGaussian);
  CHECK(cfg.sweep.regressors[1].a == 0.5);

  CHECK_THROWS_WITH_AS(parse_config(R"({"sweep":{"p":[1.5]}})"),
                       doctest::Contains("sweep.p"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"sweep":{"delta":[0.5]}})"),
                       doctest::Contains("sweep.delta"), ConfigError);
}

TEST_CASE("load_config requires a readable file") {
  CHECK_THROWS_AS(load_config("tmp_io_no_such_config.json"), IoError);
  TempFile tmp("tmp_io_config.json");
  std::ofstream(tmp.path) << R"({"horizon":123})";
  CHECK(load_config(tmp.path).horizon == 123);
}

TEST_CASE("line chart renders one polyline per series") {
  Table t;
  t.columns = {"n", "a", "b"};
  t.append_row({1.0, 1.0, 2.0});
  t.append_row({10.0, 0.5, 1.0});
  t.append_row({100.0, 0.25, 0.5});
  PlotOptions opts;
  opts.title = "two series";
  const std::string svg = render_line_chart(t, "n", {"a", "b"}, opts);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("two series") != std::string::npos);
  CHECK(count_occurrences(svg, "<polyline") == 2);
}

TEST_CASE("line chart input validation") {
  Table t;
  t.columns = {"n", "v"};
  PlotOptions opts;
  CHECK_THROWS_WITH_AS(render_line_chart(t, "n", {"v"}, opts),
                       doctest::Contains("no data rows"), ConfigError);
  t.append_row({1.0, -3.0});
  CHECK_THROWS_WITH_AS(render_line_chart(t, "n", {"w"}, opts),
                       doctest::Contains("available"), ConfigError);
  opts.logy = true;  // the only value is negative -> nothing to draw
  CHECK_THROWS_WITH_AS(render_line_chart(t, "n", {"v"}, opts),
                       doctest::Contains("no drawable points"), ConfigError);
}

TEST_CASE("log scaling skips nonpositive points but keeps the rest") {
  Table t;
  t.columns = {"n", "v"};
  t.append_row({1.0, 0.0});  // dropped under logy
  t.append_row({2.0, 4.0});
  t.append_row({3.0, 2.0});
  PlotOptions opts;
  opts.logy = true;
  const std::string svg = render_line_chart(t, "n", {"v"}, opts);
  CHECK(count_occurrences(svg, "<polyline") == 1);
}

TEST_CASE("chart output matches the golden file byte for byte") {
  Table t;
  t.columns = {"n", "err"};
  t.append_row({1.0, 1.0});
  t.append_row({10.0, 0.1});
  t.append_row({100.0, 0.01});
  t.append_row({1000.0, 0.001});
  PlotOptions opts;
  opts.title = "decay";
  opts.logx = true;
  opts.logy = true;
  const std::string svg = render_line_chart(t, "n", {"err"}, opts);
  CHECK(svg == slurp("data/golden_plot.svg"));
}
