#include "mlr/estimator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mlr/errors.hpp"

namespace mlr {

namespace {

// Largest double strictly below 1. alpha must stay in [0, 1): alpha = 1
// would let the scaling gain forget the projection region entirely, and
// -expm1(-u^2/2s2) rounds to exactly 1.0 once u^2/2s2 > ~36.7.
constexpr double kAlphaMax = 1.0 - 0x1.0p-53;

void check_finite(double v, std::int64_t n, const char* what) {
  if (!std::isfinite(v)) {
    throw NumericError(std::string("estimator: non-finite ") + what +
                       " at step " + std::to_string(n));
  }
}

}  // namespace

double step_weight(std::int64_t n, double delta) {
  const auto m = n < 1 ? std::int64_t{1} : n;
  return std::pow(static_cast<double>(m), delta);
}

double tanh_saturating(double x) {
  if (x > 20.0) return 1.0;
  if (x < -20.0) return -1.0;
  return std::tanh(x);
}

double cap(std::int64_t n, const CapMode& mode) {
  switch (mode.kind) {
    case CapKind::Faithful:
      // e + n never overflows for the step counts we can reach.
      return std::sqrt(
          std::log(static_cast<double>(n) + 2.718281828459045235360287));
    case CapKind::Constant:
      return mode.bound;
    case CapKind::Unbounded:
      return std::numeric_limits<double>::infinity();
  }
  return std::numeric_limits<double>::quiet_NaN();  // unreachable
}

double project_q(double x, std::int64_t n, const CapMode& mode) {
  const double hi = cap(n, mode);
  if (x < 1.0) return 1.0;
  if (x > hi) return hi;
  return x;
}

EstimatorState new_state(const EstimatorConfig& cfg) {
  if (cfg.d < 1) throw ConfigError("estimator: dimension must be positive");
  if (!(cfg.delta >= 0.0) || !(cfg.delta < 0.5)) {
    throw ConfigError("estimator: delta must lie in [0, 0.5)");
  }
  if (!(cfg.sigma2 > 0.0) || !std::isfinite(cfg.sigma2)) {
    throw ConfigError("estimator: noise variance must be positive and finite");
  }
  if (cfg.theta0.size() != static_cast<std::size_t>(cfg.d)) {
    throw ConfigError("estimator: theta0 has wrong dimension");
  }
  if (!all_finite(cfg.theta0) || norm_sq(cfg.theta0) == 0.0) {
    throw ConfigError("estimator: theta0 must be finite and nonzero");
  }
  if (cfg.P0.dim() != static_cast<std::size_t>(cfg.d)) {
    throw ConfigError("estimator: P0 has wrong dimension");
  }
  if (!is_spd(cfg.P0)) {
    throw ConfigError("estimator: P0 must be symmetric positive definite");
  }
  if (!(cfg.q0 >= 1.0) || !std::isfinite(cfg.q0)) {
    throw ConfigError("estimator: q0 must be finite and >= 1");
  }
  if (cfg.cap_mode.kind == CapKind::Constant &&
      !(cfg.cap_mode.bound > 1.0 && std::isfinite(cfg.cap_mode.bound))) {
    throw ConfigError("estimator: constant cap must be finite and > 1");
  }

  EstimatorState st;
  st.n = 0;
  st.theta = cfg.theta0;
  st.P = cfg.P0;
  st.q = cfg.q0;
  st.r = 1.0;
  st.beta = cfg.q0 * cfg.theta0;
  return st;
}

ScaleStep scale_step(const EstimatorState& state, const Vector& phi, double y,
                     const EstimatorConfig& cfg) {
  const std::int64_t n = state.n + 1;  // index of the incoming observation
  const double w = step_weight(n, cfg.delta);
  const double u = dot(state.theta, phi);

  // expm1 keeps alpha = 0 exactly when u = 0 and avoids cancellation for
  // small u; the clamp keeps alpha < 1 for huge u.
  double alpha = -std::expm1(-(u * u) / (2.0 * cfg.sigma2));
  if (alpha > kAlphaMax) alpha = kAlphaMax;

  const double s_next = y * tanh_saturating(state.q * u * y / cfg.sigma2);
  const double r_next = state.r + alpha * alpha * u * u / w;
  const double scale_innovation = s_next - state.q * u;
  const double q_raw =
      state.q + alpha * u / (w * r_next) * scale_innovation;
  check_finite(q_raw, n, "scaling iterate");
  const double q_next = project_q(q_raw, n, cfg.cap_mode);

  ScaleStep out;
  out.q_next = q_next;
  out.r_next = r_next;
  out.trace.alpha = alpha;
  out.trace.s_next = s_next;
  out.trace.q_raw = q_raw;
  out.trace.u = u;
  out.trace.scale_innovation = scale_innovation;
  return out;
}

LsStep ls_step(const EstimatorState& state, const Vector& phi, double y,
               const EstimatorConfig& cfg) {
  const std::int64_t n = state.n + 1;
  const double w = step_weight(n, cfg.delta);

  Vector h = state.P.matvec(phi);  // P phi
  const double denom = w + dot(phi, h);
  // w >= 1 and phi^T P phi >= 0 for SPD P, so the gain is well defined; a
  // nonpositive denominator means P has lost definiteness to rounding.
  if (!(denom > 0.0) || !std::isfinite(denom)) {
    throw NumericError("estimator: degenerate gain denominator at step " +
                       std::to_string(n));
  }
  const double a = 1.0 / denom;
  const double innovation = y - dot(state.theta, phi);

  LsStep out;
  out.theta_next = state.theta + (a * innovation) * h;
  out.P_next = state.P;
  out.P_next.rank1_update(-a, h);  // P - a (P phi)(P phi)^T
  out.a = a;
  if (!all_finite(out.theta_next)) {
    throw NumericError("estimator: non-finite direction estimate at step " +
                       std::to_string(n));
  }
  return out;
}

StepResult step(const EstimatorState& state, const Vector& phi, double y,
                const EstimatorConfig& cfg) {
  if (phi.size() != static_cast<std::size_t>(cfg.d)) {
    throw ConfigError("estimator: regressor has wrong dimension");
  }
  // Both halves read the same pre-update state; the scaling update must see
  // u = theta_n^T phi, not the refreshed direction.
  ScaleStep sc = scale_step(state, phi, y, cfg);
  LsStep ls = ls_step(state, phi, y, cfg);

  StepResult out;
  out.state.n = state.n + 1;
  out.state.theta = std::move(ls.theta_next);
  out.state.P = std::move(ls.P_next);
  out.state.q = sc.q_next;
  out.state.r = sc.r_next;
  out.state.beta = out.state.q * out.state.theta;
  out.trace = sc.trace;
  out.trace.a = ls.a;
  out.trace.ls_innovation = y - out.trace.u;
  return out;
}

}  // namespace mlr
