#pragma once

// Experiment configuration: a single JSON document mapping onto the
// generator and estimator configs plus harness knobs. Parsing is strict —
// unknown keys and out-of-range values fail with the offending field path —
// and every omitted field gets the documented default, so the minimal
// config "{}" is a complete, runnable experiment.

#include <cstdint>
#include <string>
#include <vector>

#include "mlr/analysis.hpp"
#include "mlr/datagen.hpp"
#include "mlr/estimator.hpp"

namespace mlr {

/// Checkpoint placement: every `stride` steps, or a geometric grid
/// n = 1, ceil(1*ratio), ... (always including the final step).
struct RecordSpec {
  enum class Kind { Stride, Geometric };
  Kind kind = Kind::Geometric;
  std::int64_t stride = 1;
  double ratio = 1.25;
};

/// Grid for the sweep subcommand; empty axes fall back to the base config's
/// single value. The cross-product of all axes is run.
struct SweepGrid {
  std::vector<double> p;
  std::vector<double> delta;
  std::vector<double> sigma2;
  std::vector<RegressorSpec> regressors;
};

struct RunConfig {
  GeneratorConfig generator;
  EstimatorConfig estimator;
  std::int64_t horizon = 100000;
  RecordSpec record;
  RateParams analysis;      // epsilon configurable; delta mirrors estimator
  std::string outputs = "out";
  int replications = 1;
  int parallel_jobs = 1;
  bool snapshots = false;   // also write per-checkpoint state snapshots
  SweepGrid sweep;
  std::vector<std::string> warnings;  // non-fatal findings, e.g. |a| >= 1
};

/// All defaults filled in and consistent (the estimator inherits the
/// generator's dimension and noise variance unless overridden).
RunConfig default_config();

/// Parse + validate a JSON config document. Throws ConfigError whose
/// message names the offending field path.
RunConfig parse_config(const std::string& json_text);

/// Read the file at `path` (IoError if unreadable) and parse_config it.
RunConfig load_config(const std::string& path);

/// Parse a cap-mode token: "faithful", "constant:C" (C > 1), "unbounded".
CapMode parse_cap_mode(const std::string& token);

/// Token for a cap mode, inverse of parse_cap_mode.
std::string cap_mode_label(const CapMode& mode);

/// Re-validate all semantic invariants (used after programmatic edits such
/// as CLI flag overrides). Throws ConfigError naming the offending field;
/// refreshes cfg.warnings with non-fatal findings.
void validate(RunConfig& cfg);

}  // namespace mlr
