#include "mlr/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mlr/errors.hpp"
#include "mlr/estimator.hpp"

namespace mlr {

Vector batch_weighted_ls(const BatchProblem& prob) {
  const std::size_t d = prob.theta0.size();
  if (d < 1) throw ConfigError("batch ls: empty theta0");
  if (prob.P0.dim() != d) throw ConfigError("batch ls: P0 dimension mismatch");
  if (!is_spd(prob.P0)) throw ConfigError("batch ls: P0 must be SPD");

  // Normal equations: (P0^{-1} + sum w_k phi phi^T) theta
  //                   = P0^{-1} theta0 + sum w_k y_k phi_k.
  SymMatrix m = inverse_spd(prob.P0);
  Vector rhs = m.matvec(prob.theta0);
  std::int64_t k = 0;
  for (const BatchObservation& obs : prob.observations) {
    ++k;
    if (obs.phi.size() != d) {
      throw ConfigError("batch ls: observation dimension mismatch");
    }
    const double w = 1.0 / step_weight(k, prob.delta);
    m.rank1_update(w, obs.phi);
    rhs += (w * obs.y) * obs.phi;
  }
  return solve_spd(m, rhs);
}

double offline_em_q(const std::vector<EmTerm>& history, double sigma2) {
  if (!(sigma2 > 0.0)) throw ConfigError("offline em: sigma2 must be positive");
  double denom = 0.0;
  double numer = 0.0;
  for (const EmTerm& t : history) {
    denom += t.u * t.u;
    numer += t.y * tanh_saturating(t.q * t.u * t.y / sigma2);
  }
  if (denom == 0.0) throw NumericError("offline em: no excitation");
  return numer / denom;
}

double offline_em_q_fixed_point(const std::vector<EmTerm>& history,
                                double sigma2, double q_init, double tol,
                                int max_iter) {
  if (!(sigma2 > 0.0)) throw ConfigError("offline em: sigma2 must be positive");
  double denom = 0.0;
  for (const EmTerm& t : history) denom += t.u * t.u;
  if (denom == 0.0) throw NumericError("offline em: no excitation");

  double q = q_init;
  for (int it = 0; it < max_iter; ++it) {
    double numer = 0.0;
    for (const EmTerm& t : history) {
      numer += t.y * tanh_saturating(q * t.u * t.y / sigma2);
    }
    const double next = numer / denom;
    if (std::abs(next - q) < tol) return next;
    q = next;
  }
  throw NumericError("offline em: fixed point did not settle in " +
                     std::to_string(max_iter) + " iterations");
}

GramAccumulator::GramAccumulator(const SymMatrix& P0)
    : m_(inverse_spd(P0)) {}

void GramAccumulator::add(const Vector& phi) {
  if (phi.size() != m_.dim()) {
    throw ConfigError("gram: regressor dimension mismatch");
  }
  m_.rank1_update(1.0, phi);
  ++n_;
}

std::pair<double, double> GramAccumulator::extremes() const {
  const std::vector<double> ev = sym_eigvals(m_);
  return {ev.front(), ev.back()};
}

std::vector<GramCheckpoint> gram_lambda(const std::vector<Vector>& observations,
                                        const SymMatrix& P0,
                                        std::vector<std::int64_t> checkpoints) {
  const auto total = static_cast<std::int64_t>(observations.size());
  if (checkpoints.empty()) {
    for (std::int64_t n = 1; n <= total; n *= 2) checkpoints.push_back(n);
    if (total > 0 &&
        (checkpoints.empty() || checkpoints.back() != total)) {
      checkpoints.push_back(total);
    }
  }
  std::sort(checkpoints.begin(), checkpoints.end());
  checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()),
                    checkpoints.end());

  GramAccumulator acc(P0);
  std::vector<GramCheckpoint> out;
  std::size_t next = 0;
  // A leading n = 0 checkpoint reports the bare regularizer spectrum.
  while (next < checkpoints.size() && checkpoints[next] <= 0) {
    const auto [lo, hi] = acc.extremes();
    out.push_back({0, lo, hi});
    ++next;
  }
  for (const Vector& phi : observations) {
    acc.add(phi);
    if (next < checkpoints.size() && acc.n() == checkpoints[next]) {
      const auto [lo, hi] = acc.extremes();
      out.push_back({acc.n(), lo, hi});
      ++next;
    }
  }
  return out;
}

}  // namespace mlr
