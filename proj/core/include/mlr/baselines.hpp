#pragma once

// Reference computations the recursive pipeline is checked against: the
// closed-form batch equivalent of the weighted LS recursion, the offline
// EM-style average for the scaling parameter, and extreme eigenvalues of the
// accumulated Gram matrix (the excitation measure the error bounds divide
// by). These are deliberately direct — assemble the matrix, solve it — so
// they can serve as oracles for the incremental code.

#include <cstdint>
#include <utility>
#include <vector>

#include "mlr/linalg.hpp"

namespace mlr {

struct BatchObservation {
  Vector phi;
  double y = 0.0;
};

/// Weighted regularized least squares over a recorded stream. Observation k
/// (1-based) carries weight max(k,1)^{-delta}; the regularizer pulls toward
/// theta0 with curvature P0^{-1}.
struct BatchProblem {
  std::vector<BatchObservation> observations;
  Vector theta0;
  SymMatrix P0;
  double delta = 0.0;
};

/// argmin_theta sum_k max(k,1)^{-delta} (y_k - theta^T phi_k)^2
///            + (theta - theta0)^T P0^{-1} (theta - theta0),
/// by normal equations. With zero observations this is theta0. Matches the
/// recursive LS update at every prefix length.
Vector batch_weighted_ls(const BatchProblem& prob);

/// One recorded term of an estimator trace: u_k = theta_k^T phi_k, the
/// following output y_{k+1}, and the scaling iterate q_k in force at step k.
struct EmTerm {
  double u = 0.0;
  double y = 0.0;
  double q = 0.0;
};

/// Offline EM-style scaling estimate over a recorded trace:
///   q = [sum_k u_k^2]^{-1} [sum_k y_k tanh(q_k u_k y_k / sigma2)],
/// evaluated with the per-step q_k exactly as recorded.
double offline_em_q(const std::vector<EmTerm>& history, double sigma2);

/// Fixed-point variant: iterate the same quotient with a single frozen q
/// (ignoring the recorded per-step values) until |q_{t+1} - q_t| < tol.
/// Throws NumericError if it fails to settle within max_iter rounds.
double offline_em_q_fixed_point(const std::vector<EmTerm>& history,
                                double sigma2, double q_init,
                                double tol = 1e-10, int max_iter = 1000);

/// Running Gram matrix M_n = P0^{-1} + sum_{k<=n} phi_k phi_k^T with
/// eigenvalue queries at checkpoints. M_n grows in the positive-semidefinite
/// order, so both extreme eigenvalues are non-decreasing in n.
class GramAccumulator {
 public:
  explicit GramAccumulator(const SymMatrix& P0);

  void add(const Vector& phi);

  std::int64_t n() const { return n_; }
  const SymMatrix& matrix() const { return m_; }

  /// (lambda_min, lambda_max) of the current matrix.
  std::pair<double, double> extremes() const;

 private:
  SymMatrix m_;
  std::int64_t n_ = 0;
};

struct GramCheckpoint {
  std::int64_t n = 0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Eigenvalue trajectory of the Gram matrix over a recorded regressor
/// stream. checkpoints selects the n values to report (only those <= the
/// stream length are used); when empty, a geometric grid 1, 2, 4, ... plus
/// the final n is substituted so eigensolve cost stays negligible.
std::vector<GramCheckpoint> gram_lambda(
    const std::vector<Vector>& observations, const SymMatrix& P0,
    std::vector<std::int64_t> checkpoints = {});

}  // namespace mlr
