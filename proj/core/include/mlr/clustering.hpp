#pragma once

// Online assignment of observations to the two submodels and the cumulative
// error metrics built on top of it.
//
// The mixture is symmetric: submodel 1 generates y = beta^T phi + w and
// submodel 2 generates y = -beta^T phi + w. A point is assigned to whichever
// submodel leaves the smaller residual,
//
//   classify(beta, phi, y) = argmin_{i in {1,2}} (y + (-1)^i beta^T phi)^2,
//
// ties going to index 1. The running metrics compare three classifiers on
// the same stream: the online estimate beta_k, the true parameter (the
// oracle), and the generating label itself.

#include <cstdint>

#include "mlr/linalg.hpp"

namespace mlr {

struct ClusterMetrics {
  std::int64_t n = 0;
  std::int64_t miss_alg = 0;         // classify(beta_k) != true index
  std::int64_t miss_oracle = 0;      // classify(beta*)  != true index
  std::int64_t miss_alg_swapped = 0; // beta_k count under swapped labels
  double j = 0.0;         // within-cluster error of the online classifier
  double j_oracle = 0.0;  // same with beta* in place of beta_k
};

/// Index in {1, 2} of the submodel with the smaller squared residual; exact
/// ties break to 1. Throws ConfigError on non-finite input.
int classify(const Vector& beta, const Vector& phi, double y);

/// classify with the true parameter; the best any classifier can do without
/// seeing the label.
int oracle_classify(const Vector& beta_star, const Vector& phi, double y);

/// The index the generator actually used: z = +1 -> 1, z = -1 -> 2.
int true_index(int z);

/// Consume one labeled observation: bump n, the three disagreement counts,
/// and both within-cluster error accumulators.
ClusterMetrics update_metrics(const ClusterMetrics& m, const Vector& beta_k,
                              const Vector& beta_star, const Vector& phi,
                              double y, int z);

/// |miss_alg - miss_oracle| / n. With permutation_aligned, miss_alg is first
/// replaced by min(miss_alg, miss_alg_swapped): the sign of beta is not
/// identifiable, so when the estimate converges to -beta* the raw count
/// saturates even though the clustering is perfect up to relabeling.
double misclass_gap(const ClusterMetrics& m, bool permutation_aligned = false);

/// Component-wise sum, for combining metrics from parallel replications.
ClusterMetrics merge(const ClusterMetrics& a, const ClusterMetrics& b);

}  // namespace mlr
