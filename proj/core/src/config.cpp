#include "mlr/config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "mlr/errors.hpp"

namespace mlr {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config: " + path + " " + what);
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "must be an object");
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    (void)value;
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) fail(path + "." + key, "is not a recognized field");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "must be a number");
  return j.get<double>();
}

std::int64_t get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "must be an integer");
  return j.get<std::int64_t>();
}

Vector get_vector(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "must be an array of numbers");
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& el : j) {
    if (!el.is_number()) fail(path, "must be an array of numbers");
    v.push_back(el.get<double>());
  }
  return Vector(std::move(v));
}

/// Scalar s -> s * I_d; nested arrays -> full symmetric matrix.
SymMatrix get_matrix(const json& j, int d, const std::string& path) {
  if (j.is_number()) {
    return SymMatrix::scaled_identity(static_cast<std::size_t>(d),
                                      j.get<double>());
  }
  if (!j.is_array()) fail(path, "must be a scalar or an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& row : j) {
    if (!row.is_array()) fail(path, "rows must be arrays of numbers");
    std::vector<double> r;
    for (const auto& el : row) {
      if (!el.is_number()) fail(path, "entries must be numbers");
      r.push_back(el.get<double>());
    }
    rows.push_back(std::move(r));
  }
  if (rows.size() != static_cast<std::size_t>(d)) {
    fail(path, "must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  try {
    return SymMatrix::from_rows(rows);
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
}

RegressorSpec parse_regressor(const json& j, const std::string& path, int d) {
  expect_object(j, path);
  reject_unknown(j, path,
                 {"kind", "a", "input_scale_exponent", "covariance", "radius"});
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    fail(path + ".kind", "must be one of iid_gaussian, ar1, bounded_sphere");
  }
  const std::string kind = j.at("kind").get<std::string>();

  RegressorSpec spec;
  if (kind == "ar1") {
    spec = RegressorSpec::ar1(0.8, 0.1);
    if (j.contains("a")) spec.a = get_number(j.at("a"), path + ".a");
    if (j.contains("input_scale_exponent")) {
      spec.input_scale_exponent = get_number(j.at("input_scale_exponent"),
                                             path + ".input_scale_exponent");
    }
    if (j.contains("covariance") || j.contains("radius")) {
      fail(path, "ar1 accepts only a and input_scale_exponent");
    }
  } else if (kind == "iid_gaussian") {
    spec = RegressorSpec::iid_gaussian();
    if (j.contains("covariance")) {
      spec.covariance = get_matrix(j.at("covariance"), d, path + ".covariance");
    }
    if (j.contains("a") || j.contains("input_scale_exponent") ||
        j.contains("radius")) {
      fail(path, "iid_gaussian accepts only covariance");
    }
  } else if (kind == "bounded_sphere") {
    spec = RegressorSpec::bounded_sphere(1.0);
    if (j.contains("radius")) {
      spec.radius = get_number(j.at("radius"), path + ".radius");
    }
    if (j.contains("a") || j.contains("input_scale_exponent") ||
        j.contains("covariance")) {
      fail(path, "bounded_sphere accepts only radius");
    }
  } else {
    fail(path + ".kind", "must be one of iid_gaussian, ar1, bounded_sphere");
  }
  return spec;
}

void check_regressor(const RegressorSpec& r, const std::string& path,
                     std::vector<std::string>& warnings) {
  switch (r.kind) {
    case RegressorKind::Ar1:
      if (!std::isfinite(r.a)) fail(path + ".a", "must be finite");
      if (std::abs(r.a) >= 1.0) {
        warnings.push_back(path + ".a: |a| >= 1 gives an explosive regressor");
      }
      if (!std::isfinite(r.input_scale_exponent)) {
        fail(path + ".input_scale_exponent", "must be finite");
      }
      if (r.input_scale_exponent < 0.0) {
        warnings.push_back(path +
                           ".input_scale_exponent: negative exponent makes "
                           "the input grow with n");
      }
      break;
    case RegressorKind::IidGaussian:
      if (r.covariance.dim() > 0 && !is_spd(r.covariance)) {
        fail(path + ".covariance", "must be symmetric positive definite");
      }
      break;
    case RegressorKind::BoundedSphere:
      if (!(r.radius > 0.0) || !std::isfinite(r.radius)) {
        fail(path + ".radius", "must be positive and finite");
      }
      break;
  }
}

}  // namespace

RunConfig default_config() {
  RunConfig cfg;
  cfg.generator = GeneratorConfig{};  // d=3, beta*=(1,2,-1), p=0.6, ar1(0.8,0.1)
  cfg.estimator.d = cfg.generator.d;
  cfg.estimator.delta = 0.1;
  cfg.estimator.sigma2 = cfg.generator.sigma2;
  cfg.estimator.theta0 = Vector::zeros(static_cast<std::size_t>(cfg.generator.d));
  for (std::size_t i = 0; i < cfg.estimator.theta0.size(); ++i) {
    cfg.estimator.theta0[i] = 0.1;
  }
  cfg.estimator.P0 =
      SymMatrix::scaled_identity(static_cast<std::size_t>(cfg.generator.d), 100.0);
  cfg.estimator.q0 = 1.0;
  cfg.estimator.cap_mode = CapMode::faithful();
  cfg.horizon = 100000;
  cfg.generator.horizon = cfg.horizon;
  cfg.record = RecordSpec{};
  cfg.analysis = make_rate_params(cfg.estimator.delta, 0.01);
  cfg.outputs = "out";
  cfg.replications = 1;
  cfg.parallel_jobs = 1;
  cfg.snapshots = false;
  return cfg;
}

CapMode parse_cap_mode(const std::string& token) {
  if (token == "faithful") return CapMode::faithful();
  if (token == "unbounded") return CapMode::unbounded();
  const std::string prefix = "constant:";
  if (token.rfind(prefix, 0) == 0) {
    const std::string num = token.substr(prefix.size());
    char* end = nullptr;
    const double c = std::strtod(num.c_str(), &end);
    if (end != num.c_str() && *end == '\0' && std::isfinite(c) && c > 1.0) {
      return CapMode::constant(c);
    }
    throw ConfigError(
        "config: estimator.cap_mode constant:C requires finite C > 1, got '" +
        token + "'");
  }
  throw ConfigError(
      "config: estimator.cap_mode must be faithful, constant:C, or unbounded; "
      "got '" + token + "'");
}

std::string cap_mode_label(const CapMode& mode) {
  switch (mode.kind) {
    case CapKind::Faithful:
      return "faithful";
    case CapKind::Constant: {
      std::ostringstream os;
      os << "constant:" << mode.bound;
      return os.str();
    }
    case CapKind::Unbounded:
      return "unbounded";
  }
  return "?";
}

void validate(RunConfig& cfg) {
  cfg.warnings.clear();

  // generator
  if (cfg.generator.d < 1 || cfg.generator.d > 32) {
    fail("generator.d", "must lie in [1, 32]");
  }
  if (cfg.generator.beta_star.size() !=
      static_cast<std::size_t>(cfg.generator.d)) {
    fail("generator.beta_star",
         "must have generator.d = " + std::to_string(cfg.generator.d) +
             " entries");
  }
  if (!all_finite(cfg.generator.beta_star)) {
    fail("generator.beta_star", "must be finite");
  }
  if (!(cfg.generator.p >= 0.0 && cfg.generator.p <= 1.0)) {
    fail("generator.p", "must lie in [0, 1]");
  }
  if (!(cfg.generator.sigma2 >= 0.0) || !std::isfinite(cfg.generator.sigma2)) {
    fail("generator.sigma2", "must be >= 0 and finite");
  }
  check_regressor(cfg.generator.regressor, "generator.regressor",
                  cfg.warnings);

  // estimator (d is implied by the generator)
  cfg.estimator.d = cfg.generator.d;
  if (!(cfg.estimator.delta >= 0.0 && cfg.estimator.delta < 0.5)) {
    fail("estimator.delta",
         "must lie in the half-open interval [0, 0.5); 0.5 itself is excluded");
  }
  if (!(cfg.estimator.sigma2 > 0.0) || !std::isfinite(cfg.estimator.sigma2)) {
    fail("estimator.sigma2", "must be positive and finite");
  }
  if (cfg.estimator.theta0.size() !=
      static_cast<std::size_t>(cfg.estimator.d)) {
    fail("estimator.theta0",
         "must have " + std::to_string(cfg.estimator.d) + " entries");
  }
  if (!all_finite(cfg.estimator.theta0) ||
      norm_sq(cfg.estimator.theta0) == 0.0) {
    fail("estimator.theta0", "must be finite and nonzero");
  }
  if (cfg.estimator.P0.dim() != static_cast<std::size_t>(cfg.estimator.d)) {
    fail("estimator.P0",
         "must be " + std::to_string(cfg.estimator.d) + "x" +
             std::to_string(cfg.estimator.d));
  }
  if (!is_spd(cfg.estimator.P0)) {
    fail("estimator.P0", "must be symmetric positive definite");
  }
  if (!(cfg.estimator.q0 >= 1.0) || !std::isfinite(cfg.estimator.q0)) {
    fail("estimator.q0", "must be finite and >= 1");
  }
  if (cfg.estimator.cap_mode.kind == CapKind::Constant &&
      !(cfg.estimator.cap_mode.bound > 1.0 &&
        std::isfinite(cfg.estimator.cap_mode.bound))) {
    fail("estimator.cap_mode", "constant cap must be finite and > 1");
  }

  // harness
  if (cfg.horizon < 1) fail("horizon", "must be >= 1");
  cfg.generator.horizon = cfg.horizon;
  if (cfg.record.kind == RecordSpec::Kind::Stride && cfg.record.stride < 1) {
    fail("record_every", "stride must be >= 1");
  }
  if (cfg.record.kind == RecordSpec::Kind::Geometric &&
      !(cfg.record.ratio > 1.0)) {
    fail("record_every", "geometric ratio must exceed 1");
  }
  if (cfg.replications < 1) fail("replications", "must be >= 1");
  if (cfg.parallel_jobs < 1) fail("parallel_jobs", "must be >= 1");

  try {
    cfg.analysis = make_rate_params(cfg.estimator.delta, cfg.analysis.epsilon);
  } catch (const ConfigError& e) {
    fail("analysis.epsilon", e.what());
  }

  for (double p : cfg.sweep.p) {
    if (!(p >= 0.0 && p <= 1.0)) fail("sweep.p", "entries must lie in [0, 1]");
  }
  for (double del : cfg.sweep.delta) {
    if (!(del >= 0.0 && del < 0.5)) {
      fail("sweep.delta", "entries must lie in [0, 0.5)");
    }
  }
  for (double s2 : cfg.sweep.sigma2) {
    if (!(s2 >= 0.0) || !std::isfinite(s2)) {
      fail("sweep.sigma2", "entries must be >= 0 and finite");
    }
  }
  for (const RegressorSpec& r : cfg.sweep.regressors) {
    check_regressor(r, "sweep.regressor", cfg.warnings);
  }
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  expect_object(j, "(root)");
  reject_unknown(j, "(root)",
                 {"generator", "estimator", "horizon", "record_every",
                  "analysis", "outputs", "replications", "parallel_jobs",
                  "snapshots", "sweep"});

  RunConfig cfg = default_config();
  bool estimator_sigma2_given = false;
  bool theta0_given = false;
  bool p0_given = false;

  if (j.contains("generator")) {
    const json& g = j.at("generator");
    expect_object(g, "generator");
    reject_unknown(g, "generator",
                   {"d", "beta_star", "p", "sigma2", "regressor", "seed"});
    if (g.contains("d")) {
      const std::int64_t d = get_integer(g.at("d"), "generator.d");
      if (d < 1 || d > 32) fail("generator.d", "must lie in [1, 32]");
      cfg.generator.d = static_cast<int>(d);
      // resize the dependent defaults; explicit values overwrite below
      cfg.generator.beta_star = Vector::zeros(static_cast<std::size_t>(d));
      for (std::size_t i = 0; i < cfg.generator.beta_star.size(); ++i) {
        cfg.generator.beta_star[i] = 1.0;
      }
    }
    if (g.contains("beta_star")) {
      cfg.generator.beta_star = get_vector(g.at("beta_star"), "generator.beta_star");
    }
    if (g.contains("p")) cfg.generator.p = get_number(g.at("p"), "generator.p");
    if (g.contains("sigma2")) {
      cfg.generator.sigma2 = get_number(g.at("sigma2"), "generator.sigma2");
    }
    if (g.contains("regressor")) {
      cfg.generator.regressor =
          parse_regressor(g.at("regressor"), "generator.regressor",
                          cfg.generator.d);
    }
    if (g.contains("seed")) {
      if (!g.at("seed").is_number_unsigned() &&
          !g.at("seed").is_number_integer()) {
        fail("generator.seed", "must be a non-negative integer");
      }
      const std::int64_t s = g.at("seed").get<std::int64_t>();
      if (s < 0) fail("generator.seed", "must be a non-negative integer");
      cfg.generator.seed = static_cast<std::uint64_t>(s);
    }
  }

  if (j.contains("estimator")) {
    const json& e = j.at("estimator");
    expect_object(e, "estimator");
    reject_unknown(e, "estimator",
                   {"delta", "sigma2", "theta0", "P0", "q0", "cap_mode"});
    if (e.contains("delta")) {
      cfg.estimator.delta = get_number(e.at("delta"), "estimator.delta");
    }
    if (e.contains("sigma2")) {
      cfg.estimator.sigma2 = get_number(e.at("sigma2"), "estimator.sigma2");
      estimator_sigma2_given = true;
    }
    if (e.contains("theta0")) {
      cfg.estimator.theta0 = get_vector(e.at("theta0"), "estimator.theta0");
      theta0_given = true;
    }
    if (e.contains("P0")) {
      cfg.estimator.P0 = get_matrix(e.at("P0"), cfg.generator.d, "estimator.P0");
      p0_given = true;
    }
    if (e.contains("q0")) {
      cfg.estimator.q0 = get_number(e.at("q0"), "estimator.q0");
    }
    if (e.contains("cap_mode")) {
      if (!e.at("cap_mode").is_string()) {
        fail("estimator.cap_mode",
             "must be faithful, constant:C, or unbounded");
      }
      cfg.estimator.cap_mode =
          parse_cap_mode(e.at("cap_mode").get<std::string>());
    }
  }

  // Recompute dimension-dependent defaults for fields not given explicitly.
  cfg.estimator.d = cfg.generator.d;
  if (!theta0_given) {
    cfg.estimator.theta0 =
        Vector::zeros(static_cast<std::size_t>(cfg.generator.d));
    for (std::size_t i = 0; i < cfg.estimator.theta0.size(); ++i) {
      cfg.estimator.theta0[i] = 0.1;
    }
  }
  if (!p0_given) {
    cfg.estimator.P0 = SymMatrix::scaled_identity(
        static_cast<std::size_t>(cfg.generator.d), 100.0);
  }
  if (!estimator_sigma2_given) {
    // The estimator needs a strictly positive variance; fall back to 1 when
    // the generator is noise-free.
    cfg.estimator.sigma2 =
        cfg.generator.sigma2 > 0.0 ? cfg.generator.sigma2 : 1.0;
  }

  if (j.contains("horizon")) {
    cfg.horizon = get_integer(j.at("horizon"), "horizon");
  }
  if (j.contains("record_every")) {
    const json& r = j.at("record_every");
    if (r.is_string()) {
      if (r.get<std::string>() != "geometric") {
        fail("record_every",
             "must be a positive integer stride or the string \"geometric\"");
      }
      cfg.record.kind = RecordSpec::Kind::Geometric;
    } else if (r.is_number_integer()) {
      cfg.record.kind = RecordSpec::Kind::Stride;
      cfg.record.stride = r.get<std::int64_t>();
    } else {
      fail("record_every",
           "must be a positive integer stride or the string \"geometric\"");
    }
  }
  if (j.contains("analysis")) {
    const json& a = j.at("analysis");
    expect_object(a, "analysis");
    reject_unknown(a, "analysis", {"epsilon"});
    if (a.contains("epsilon")) {
      cfg.analysis.epsilon = get_number(a.at("epsilon"), "analysis.epsilon");
    }
  }
  if (j.contains("outputs")) {
    if (!j.at("outputs").is_string()) fail("outputs", "must be a string");
    cfg.outputs = j.at("outputs").get<std::string>();
  }
  if (j.contains("replications")) {
    cfg.replications =
        static_cast<int>(get_integer(j.at("replications"), "replications"));
  }
  if (j.contains("parallel_jobs")) {
    cfg.parallel_jobs =
        static_cast<int>(get_integer(j.at("parallel_jobs"), "parallel_jobs"));
  }
  if (j.contains("snapshots")) {
    if (!j.at("snapshots").is_boolean()) fail("snapshots", "must be a boolean");
    cfg.snapshots = j.at("snapshots").get<bool>();
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    expect_object(s, "sweep");
    reject_unknown(s, "sweep", {"p", "delta", "sigma2", "regressor"});
    if (s.contains("p")) {
      cfg.sweep.p = get_vector(s.at("p"), "sweep.p").entries();
    }
    if (s.contains("delta")) {
      cfg.sweep.delta = get_vector(s.at("delta"), "sweep.delta").entries();
    }
    if (s.contains("sigma2")) {
      cfg.sweep.sigma2 = get_vector(s.at("sigma2"), "sweep.sigma2").entries();
    }
    if (s.contains("regressor")) {
      if (!s.at("regressor").is_array()) {
        fail("sweep.regressor", "must be an array of regressor objects");
      }
      int i = 0;
      for (const auto& r : s.at("regressor")) {
        cfg.sweep.regressors.push_back(parse_regressor(
            r, "sweep.regressor[" + std::to_string(i) + "]", cfg.generator.d));
        ++i;
      }
    }
  }

  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open config file: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return parse_config(os.str());
}

}  // namespace mlr
