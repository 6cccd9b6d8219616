#pragma once

// Seeded synthetic data for the two-component symmetric mixed linear model
//   y_{n+1} = z_n * beta*^T phi_n + w_{n+1},
// where z_n is a hidden +/-1 label with P(z = 1) = p and w is conditionally
// Gaussian noise. Regressor processes: fresh Gaussian draws, an AR(1)
// recursion with polynomially decaying input, or uniform draws on a sphere.

#include <cstdint>
#include <string>
#include <vector>

#include "mlr/linalg.hpp"
#include "mlr/rng.hpp"

namespace mlr {

enum class RegressorKind { IidGaussian, Ar1, BoundedSphere };

struct RegressorSpec {
  RegressorKind kind = RegressorKind::Ar1;
  SymMatrix covariance;               // IidGaussian only; default identity
  double a = 0.8;                     // Ar1 pole
  double input_scale_exponent = 0.1;  // Ar1 input shrinks as n^-gamma
  double radius = 1.0;                // BoundedSphere

  static RegressorSpec iid_gaussian();
  static RegressorSpec iid_gaussian(SymMatrix cov);
  static RegressorSpec ar1(double a, double input_scale_exponent);
  static RegressorSpec bounded_sphere(double radius);

  /// Short comma-free token for CSV keys, e.g. "ar1(a=0.8;gamma=0.1)".
  std::string label() const;
};

struct GeneratorConfig {
  int d = 3;
  Vector beta_star{1.0, 2.0, -1.0};
  double p = 0.6;
  double sigma2 = 1.0;
  RegressorSpec regressor;
  std::uint64_t seed = 1;
  std::int64_t horizon = 100000;
};

struct LabeledObservation {
  Vector phi;
  double y = 0.0;
  int z = 1;       // hidden label; ground truth for evaluation only
  double w = 0.0;  // recorded noise draw, for evaluation only
};

/// Replayable observation stream: identical (config, seed) gives an
/// identical stream. Copying a Generator snapshots the stream position.
class Generator {
 public:
  explicit Generator(const GeneratorConfig& cfg);

  LabeledObservation next();

  const GeneratorConfig& config() const { return cfg_; }
  std::int64_t emitted() const { return n_ - 1; }
  const Vector& current_phi() const { return phi_; }

 private:
  Vector gaussian_vector();
  Vector initial_phi();
  Vector next_phi(std::int64_t n);

  GeneratorConfig cfg_;
  CounterRng labels_;
  CounterRng noise_;
  CounterRng input_;
  std::vector<double> cov_chol_;  // lower factor, IidGaussian only
  Vector phi_;
  std::int64_t n_ = 1;  // index of the next emission
};

Generator make_generator(const GeneratorConfig& cfg);

/// One step of the AR(1)-with-decaying-input recursion
///   phi' = a * phi + n^-gamma * e,
/// exposed so the recursion can be checked directly against chosen inputs.
Vector ar1_advance(const Vector& phi, std::int64_t n, double a,
                   double input_scale_exponent, const Vector& e);

}  // namespace mlr
