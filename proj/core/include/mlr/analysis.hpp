#pragma once

// Theoretical bound curves and empirical rate fitting. The convergence
// guarantees for this estimator are asymptotic orders, not absolute
// constants, so everything here is built to compare SLOPES (on log-log
// axes) and boundedness of normalized quantities:
//
//   - direction error:      ||theta_n - theta*||^2 = O(n^kappa / lambda_min(n))
//   - mis-classification:   gap_n = O(sqrt(ln n / n^{1-delta}))
//   - within-cluster error: J_n/n <= sigma^2 + O(n^{-(1-kappa)/2})
//
// with kappa = max{1/2 + delta + epsilon, (2 + delta)/3 + epsilon} < 1.

#include <vector>

namespace mlr {

/// One sample of a positive-time series, e.g. (n, lambda_min(n)).
struct SeriesPoint {
  double n = 0.0;
  double v = 0.0;
};

struct RateParams {
  double delta = 0.1;
  double epsilon = 0.01;
  double kappa = 0.0;  // derived
};

/// max{1/2 + delta + epsilon, (2 + delta)/3 + epsilon}. Throws ConfigError
/// when the result reaches 1 ("epsilon too large") — the bounds are vacuous
/// past that point.
double kappa(double delta, double epsilon);

/// RateParams with kappa filled in and validated.
RateParams make_rate_params(double delta, double epsilon = 0.01);

/// Pointwise n^kappa / lambda_min(n) over a recorded eigenvalue trajectory.
std::vector<SeriesPoint> thm1_bound(const std::vector<SeriesPoint>& lambda_min,
                                    double kappa);

/// sqrt(ln n / n^{1-delta}) for real n >= 1 (0 at n = 1).
double thm2_bound(double n, double delta);

/// Normalized within-cluster excess (J/n - sigma2) * n^{(1-kappa)/2}; the
/// theory predicts this stays bounded above. Can be negative — the argmin
/// classifier often beats the raw noise floor.
double thm3_excess(double j, double n, double sigma2, double kappa);

/// Ordinary least-squares slope of y against x. Needs >= 2 distinct x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

/// OLS slope of ln v against ln n over points with n in [n_lo, n_hi].
/// Requires at least 5 points in the window, all with v > 0. This is the
/// empirical rate: v ~ c n^s gives back s to rounding error.
double loglog_slope(const std::vector<SeriesPoint>& series, double n_lo,
                    double n_hi);

}  // namespace mlr
