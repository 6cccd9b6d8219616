#pragma once

// End-to-end experiment harness: generate -> estimate -> classify ->
// analyze, with replications, checkpointed trajectory records, summary
// aggregation, parameter sweeps, offline re-evaluation from stored
// artifacts, and theoretical bound curves.
//
// Determinism contract: (config, seed) fixes every output byte. Replication
// r uses generator seed (seed XOR r); replications are computed in parallel
// but written by one collector in replication order.

#include <cstdint>
#include <string>
#include <vector>

#include "mlr/analysis.hpp"
#include "mlr/clustering.hpp"
#include "mlr/config.hpp"
#include "mlr/csv.hpp"
#include "mlr/datagen.hpp"
#include "mlr/estimator.hpp"
#include "mlr/snapshot.hpp"

namespace mlr {

/// One trajectory checkpoint. err_sq measures against the identifiable
/// target beta* sgn(2p-1); the estimator itself never sees p.
struct RunRecord {
  std::int64_t n = 0;
  double err_sq = 0.0;      // || beta* sgn(2p-1) - beta_n ||^2
  double q_n = 0.0;
  double r_n = 0.0;
  double alpha_mean = 0.0;  // mean alpha over steps since the last checkpoint
  double lambda_min = 0.0;  // of P0^{-1} + sum phi phi^T
  double lambda_max = 0.0;
  double thm1_bound = 0.0;  // n^kappa / lambda_min(n)
  double miss_alg_avg = 0.0;
  double miss_oracle_avg = 0.0;
  double miss_gap = 0.0;    // |miss_alg - miss_oracle| / n
  double thm2_bound = 0.0;  // sqrt(ln n / n^{1-delta})
  double jn_avg = 0.0;      // J_n / n
  double thm3_excess = 0.0; // (J/n - sigma2) n^{(1-kappa)/2}
};

/// CSV header, in field order: n, err_sq, q_n, r_n, alpha_mean, ...
std::vector<std::string> run_record_columns();
std::vector<double> run_record_row(const RunRecord& rec);

/// Checkpoint steps in [1, horizon]: multiples of the stride, or a rounded
/// geometric grid starting at 1; the final step is always included.
std::vector<std::int64_t> checkpoint_schedule(std::int64_t horizon,
                                              const RecordSpec& spec);

struct ReplicationResult {
  int replication = 0;
  std::vector<RunRecord> records;
  std::vector<StateSnapshot> snapshots;  // when requested; includes n = 0
  ClusterMetrics metrics;
  EstimatorState final_state;
  bool failed = false;          // numeric failure mid-run; records are partial
  std::int64_t failed_step = 0;
  std::string failure;
};

/// Run one full pipeline for replication index r (generator seed = base
/// seed XOR r). A NumericError mid-run is captured in the result, not
/// thrown, so parallel batches can flush partial output.
ReplicationResult run_replication(const RunConfig& cfg, int replication,
                                  bool keep_snapshots);

struct ExperimentResult {
  std::vector<ReplicationResult> replications;
  Table summary;  // per-checkpoint mean and max over replications
  std::vector<std::string> artifacts;  // files written, in order
};

/// All replications (parallel up to cfg.parallel_jobs) plus aggregation.
/// With write_files: <outputs>_rep<r>.csv per replication, optional
/// <outputs>_rep<r>_snapshots.csv, and <outputs>_summary.csv. If any
/// replication fails numerically, partial trajectories are still written
/// and a NumericError carrying the step index is then thrown.
ExperimentResult run_experiment(const RunConfig& cfg, bool write_files = true);

/// Cross-product sweep over cfg.sweep axes (empty axes pin the base value).
/// Each grid point is a full run_experiment with outputs prefix
/// <outputs>_g<k>. Returns (and with write_files, writes <outputs>_sweep.csv)
/// one summary row per grid point.
Table sweep(const RunConfig& cfg, bool write_files = true);

/// Emit a raw stream CSV (columns n, phi_0..phi_{d-1}, y, z) of `horizon`
/// observations from the configured generator.
void write_stream_csv(const std::string& path, const GeneratorConfig& cfg,
                      std::int64_t horizon);

/// Read a stream CSV back (w is not stored and comes back as 0).
std::vector<LabeledObservation> read_stream_csv(const std::string& path);

/// Recompute metrics offline from a stored stream + snapshots. err_sq is
/// evaluated at every snapshot; the cumulative classification metrics are
/// replayed only when snapshots cover every step (stride 1 including n = 0),
/// since classifying observation k needs beta_{k-1}.
Table evaluate(const RunConfig& cfg, const std::string& stream_csv,
               const std::string& snapshots_csv);

/// Theoretical curves for a recorded lambda_min series: n, thm1_bound,
/// thm2_bound, thm3_rate (the n^{-(1-kappa)/2} envelope).
Table bounds_table(const RateParams& rp,
                   const std::vector<SeriesPoint>& lambda_min_series);

}  // namespace mlr
