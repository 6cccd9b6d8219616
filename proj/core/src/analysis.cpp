#include "mlr/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "mlr/errors.hpp"

namespace mlr {

double kappa(double delta, double epsilon) {
  if (!(delta >= 0.0) || !(delta < 0.5)) {
    throw ConfigError("kappa: delta must lie in [0, 0.5)");
  }
  if (!(epsilon > 0.0)) throw ConfigError("kappa: epsilon must be positive");
  const double k =
      std::max(0.5 + delta + epsilon, (2.0 + delta) / 3.0 + epsilon);
  if (k >= 1.0) throw ConfigError("kappa: epsilon too large (kappa >= 1)");
  return k;
}

RateParams make_rate_params(double delta, double epsilon) {
  RateParams rp;
  rp.delta = delta;
  rp.epsilon = epsilon;
  rp.kappa = kappa(delta, epsilon);
  return rp;
}

std::vector<SeriesPoint> thm1_bound(const std::vector<SeriesPoint>& lambda_min,
                                    double kappa) {
  std::vector<SeriesPoint> out;
  out.reserve(lambda_min.size());
  for (const SeriesPoint& p : lambda_min) {
    if (!(p.v > 0.0)) {
      throw ConfigError("thm1_bound: lambda_min values must be positive");
    }
    out.push_back({p.n, std::pow(p.n, kappa) / p.v});
  }
  return out;
}

double thm2_bound(double n, double delta) {
  if (!(n >= 1.0)) throw ConfigError("thm2_bound: n must be >= 1");
  return std::sqrt(std::log(n) / std::pow(n, 1.0 - delta));
}

double thm3_excess(double j, double n, double sigma2, double kappa) {
  if (!(n > 0.0)) throw ConfigError("thm3_excess: n must be positive");
  return (j / n - sigma2) * std::pow(n, (1.0 - kappa) / 2.0);
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ConfigError("ols_slope: need matching x/y with >= 2 points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw ConfigError("ols_slope: x values are all identical");
  return sxy / sxx;
}

double loglog_slope(const std::vector<SeriesPoint>& series, double n_lo,
                    double n_hi) {
  std::vector<double> lx, ly;
  for (const SeriesPoint& p : series) {
    if (p.n < n_lo || p.n > n_hi) continue;
    if (!(p.v > 0.0)) {
      throw ConfigError("loglog_slope: values must be positive in the window");
    }
    lx.push_back(std::log(p.n));
    ly.push_back(std::log(p.v));
  }
  if (lx.size() < 5) {
    throw ConfigError("loglog_slope: fewer than 5 points in the window");
  }
  return ols_slope(lx, ly);
}

}  // namespace mlr
