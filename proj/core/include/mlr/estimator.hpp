#pragma once

// Two-step recursive identification for the symmetric two-component mixed
// linear model, advanced one observation at a time as a pure state machine.
//
// Step 1 is a weighted recursive least-squares update of the direction
// estimate theta (gain weighted by n^delta to tame unbounded regressors):
//
//   a_n     = 1 / (n^delta + phi^T P phi)
//   theta'  = theta + a_n * P phi * (y - theta^T phi)
//   P'      = P - a_n * (P phi)(P phi)^T
//
// Step 2 is a projected scalar recursion for the norm-scaling estimate q,
// driven by a soft label average of the output (both evaluated with the
// pre-update theta):
//
//   u       = theta^T phi
//   alpha   = 1 - exp(-u^2 / (2 sigma^2))
//   s'      = y * tanh(q u y / sigma^2)
//   r'      = r + alpha^2 u^2 / n^delta
//   q'      = clamp(q + alpha u / (n^delta r') * (s' - q u), 1, cap(n))
//
// The published estimate is beta = q * theta. Observations are indexed from
// n = 1; each uses the weight max(n,1)^delta, which removes the n = 0
// singularity of n^delta without changing asymptotics.

#include <cstdint>

#include "mlr/linalg.hpp"

namespace mlr {

enum class CapKind { Faithful, Constant, Unbounded };

/// Upper bound of the projection interval [1, cap(n)] for the scaling
/// iterate. Faithful grows as sqrt(ln(n + e)); Constant and Unbounded are
/// experiment knobs for horizons where the slow-growing bound binds.
struct CapMode {
  CapKind kind = CapKind::Faithful;
  double bound = 0.0;  // Constant only

  static CapMode faithful() { return CapMode{CapKind::Faithful, 0.0}; }
  static CapMode constant(double c) { return CapMode{CapKind::Constant, c}; }
  static CapMode unbounded() { return CapMode{CapKind::Unbounded, 0.0}; }
};

struct EstimatorConfig {
  int d = 1;
  double delta = 0.1;  // weight exponent, in [0, 1/2)
  double sigma2 = 1.0; // noise variance, assumed known
  Vector theta0;       // initial direction, != 0
  SymMatrix P0;        // initial gain matrix, SPD
  double q0 = 1.0;     // initial scaling estimate, >= 1
  CapMode cap_mode;
};

struct EstimatorState {
  std::int64_t n = 0;  // observations consumed; the next one has index n + 1
  Vector theta;
  SymMatrix P;
  double q = 1.0;
  double r = 1.0;
  Vector beta;  // q * theta, recomputed on every step
};

/// Per-step diagnostics.
struct StepTrace {
  double a = 0.0;      // LS gain scalar
  double alpha = 0.0;  // scaling-step gain, in [0, 1)
  double s_next = 0.0;
  double q_raw = 0.0;  // scaling iterate before projection
  double u = 0.0;      // theta^T phi with the pre-update theta
  double ls_innovation = 0.0;     // y - u
  double scale_innovation = 0.0;  // s_next - q u
};

struct ScaleStep {
  double q_next = 0.0;
  double r_next = 0.0;
  StepTrace trace;
};

struct LsStep {
  Vector theta_next;
  SymMatrix P_next;
  double a = 0.0;
};

struct StepResult {
  EstimatorState state;
  StepTrace trace;
};

/// Upper end of the projection interval at step n (n >= 1).
double cap(std::int64_t n, const CapMode& mode);

/// Clamp x onto [1, cap(n)] — the nearest point of the projection region.
double project_q(double x, std::int64_t n, const CapMode& mode);

/// Validated initial state: n = 0, theta = theta0, P = P0, q = q0, r = 1.
EstimatorState new_state(const EstimatorConfig& cfg);

/// Scaling-estimate update for the next observation, using the current
/// (pre-LS-update) theta. Does not mutate the state.
ScaleStep scale_step(const EstimatorState& state, const Vector& phi, double y,
                     const EstimatorConfig& cfg);

/// Weighted recursive least-squares update. Does not mutate the state.
LsStep ls_step(const EstimatorState& state, const Vector& phi, double y,
               const EstimatorConfig& cfg);

/// Full step: scaling update with the pre-update theta, then the LS update,
/// then beta = q' * theta'.
StepResult step(const EstimatorState& state, const Vector& phi, double y,
                const EstimatorConfig& cfg);

/// Weight of observation n: max(n,1)^delta.
double step_weight(std::int64_t n, double delta);

/// tanh with hard saturation for |x| > 20; the tail it cuts is below 1e-17.
double tanh_saturating(double x);

}  // namespace mlr
