#include "mlr/clustering.hpp"

#include <cmath>

#include "mlr/errors.hpp"

namespace mlr {

namespace {

// Squared residuals of the two submodels at a candidate parameter.
struct Residuals {
  double r1;  // (y - beta^T phi)^2, submodel 1
  double r2;  // (y + beta^T phi)^2, submodel 2
};

Residuals residuals(const Vector& beta, const Vector& phi, double y) {
  const double v = dot(beta, phi);
  if (!std::isfinite(v) || !std::isfinite(y)) {
    throw ConfigError("classify: non-finite input");
  }
  const double d1 = y - v;
  const double d2 = y + v;
  return {d1 * d1, d2 * d2};
}

}  // namespace

int classify(const Vector& beta, const Vector& phi, double y) {
  const Residuals r = residuals(beta, phi, y);
  return r.r2 < r.r1 ? 2 : 1;  // ties to 1
}

int oracle_classify(const Vector& beta_star, const Vector& phi, double y) {
  return classify(beta_star, phi, y);
}

int true_index(int z) {
  if (z == 1) return 1;
  if (z == -1) return 2;
  throw ConfigError("true_index: label must be +1 or -1");
}

ClusterMetrics update_metrics(const ClusterMetrics& m, const Vector& beta_k,
                              const Vector& beta_star, const Vector& phi,
                              double y, int z) {
  const int truth = true_index(z);
  const Residuals alg = residuals(beta_k, phi, y);
  const int i_alg = alg.r2 < alg.r1 ? 2 : 1;
  const int i_oracle = oracle_classify(beta_star, phi, y);

  ClusterMetrics out = m;
  out.n += 1;
  if (i_alg != truth) out.miss_alg += 1;
  // Swapped permutation: the same classifier with labels 1 and 2 exchanged.
  if ((3 - i_alg) != truth) out.miss_alg_swapped += 1;
  if (i_oracle != truth) out.miss_oracle += 1;
  out.j += i_alg == 1 ? alg.r1 : alg.r2;
  const Residuals orc = residuals(beta_star, phi, y);
  out.j_oracle += i_oracle == 1 ? orc.r1 : orc.r2;
  return out;
}

double misclass_gap(const ClusterMetrics& m, bool permutation_aligned) {
  if (m.n < 1) throw ConfigError("misclass_gap: no observations");
  std::int64_t alg = m.miss_alg;
  if (permutation_aligned && m.miss_alg_swapped < alg) {
    alg = m.miss_alg_swapped;
  }
  const std::int64_t gap = alg >= m.miss_oracle ? alg - m.miss_oracle
                                                : m.miss_oracle - alg;
  return static_cast<double>(gap) / static_cast<double>(m.n);
}

ClusterMetrics merge(const ClusterMetrics& a, const ClusterMetrics& b) {
  ClusterMetrics out;
  out.n = a.n + b.n;
  out.miss_alg = a.miss_alg + b.miss_alg;
  out.miss_oracle = a.miss_oracle + b.miss_oracle;
  out.miss_alg_swapped = a.miss_alg_swapped + b.miss_alg_swapped;
  out.j = a.j + b.j;
  out.j_oracle = a.j_oracle + b.j_oracle;
  return out;
}

}  // namespace mlr
