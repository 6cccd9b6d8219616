#pragma once

// Flat serialization of estimator states: one record per checkpoint holding
// (n, theta, upper triangle of P, q, r). beta is never stored — it is
// q * theta by definition and is recomputed on restore. Available as CSV
// (one row per snapshot) and JSON (array of objects), both round-trip
// exact thanks to 17-digit formatting.

#include <cstdint>
#include <string>
#include <vector>

#include "mlr/estimator.hpp"

namespace mlr {

struct StateSnapshot {
  std::int64_t n = 0;
  Vector theta;
  std::vector<double> p_upper;  // packed row-major upper triangle of P
  double q = 1.0;
  double r = 1.0;
};

StateSnapshot make_snapshot(const EstimatorState& state);

/// Rebuild a full state; beta = q * theta is recomputed here.
EstimatorState restore_state(const StateSnapshot& snap);

/// CSV header for dimension d: n, theta_0.., p_0_0, p_0_1, ..., q, r.
std::vector<std::string> snapshot_columns(int d);

void write_snapshots_csv(const std::string& path,
                         const std::vector<StateSnapshot>& snaps, int d);

/// Reads back a snapshot CSV; the dimension is recovered from the header.
std::vector<StateSnapshot> read_snapshots_csv(const std::string& path);

void write_snapshots_json(const std::string& path,
                          const std::vector<StateSnapshot>& snaps);

std::vector<StateSnapshot> read_snapshots_json(const std::string& path);

}  // namespace mlr
