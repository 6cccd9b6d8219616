#include "mlr/datagen.hpp"

#include <cmath>
#include <utility>

#include "mlr/errors.hpp"

namespace mlr {

namespace {

// Substream ids; fixed so streams stay mutually independent and replayable.
constexpr std::uint64_t kLabelStream = 0;
constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kInputStream = 2;

}  // namespace

RegressorSpec RegressorSpec::iid_gaussian() {
  RegressorSpec s;
  s.kind = RegressorKind::IidGaussian;
  return s;
}

RegressorSpec RegressorSpec::iid_gaussian(SymMatrix cov) {
  RegressorSpec s;
  s.kind = RegressorKind::IidGaussian;
  s.covariance = std::move(cov);
  return s;
}

RegressorSpec RegressorSpec::ar1(double a, double input_scale_exponent) {
  RegressorSpec s;
  s.kind = RegressorKind::Ar1;
  s.a = a;
  s.input_scale_exponent = input_scale_exponent;
  return s;
}

RegressorSpec RegressorSpec::bounded_sphere(double radius) {
  RegressorSpec s;
  s.kind = RegressorKind::BoundedSphere;
  s.radius = radius;
  return s;
}

std::string RegressorSpec::label() const {
  auto num = [](double x) {
    std::string s = std::to_string(x);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  };
  switch (kind) {
    case RegressorKind::IidGaussian:
      return "iid_gaussian";
    case RegressorKind::Ar1:
      return "ar1(a=" + num(a) + ";gamma=" + num(input_scale_exponent) + ")";
    case RegressorKind::BoundedSphere:
      return "bounded_sphere(r=" + num(radius) + ")";
  }
  return "unknown";
}

Generator::Generator(const GeneratorConfig& cfg)
    : cfg_(cfg),
      labels_(cfg.seed, kLabelStream),
      noise_(cfg.seed, kNoiseStream),
      input_(cfg.seed, kInputStream) {
  if (cfg_.d < 1 || cfg_.d > 32) {
    throw ConfigError("generator: dimension must lie in [1, 32], got " +
                      std::to_string(cfg_.d));
  }
  if (cfg_.beta_star.size() != static_cast<std::size_t>(cfg_.d)) {
    throw ConfigError("generator: beta_star length does not match dimension");
  }
  if (!all_finite(cfg_.beta_star)) {
    throw ConfigError("generator: beta_star has non-finite entries");
  }
  if (!(cfg_.p >= 0.0 && cfg_.p <= 1.0)) {
    throw ConfigError("generator: p must lie in [0, 1], got " + std::to_string(cfg_.p));
  }
  if (!(cfg_.sigma2 >= 0.0) || !std::isfinite(cfg_.sigma2)) {
    throw ConfigError("generator: sigma2 must be finite and >= 0");
  }
  switch (cfg_.regressor.kind) {
    case RegressorKind::IidGaussian: {
      if (cfg_.regressor.covariance.dim() == 0) {
        cfg_.regressor.covariance = SymMatrix::identity(cfg_.d);
      }
      if (cfg_.regressor.covariance.dim() != static_cast<std::size_t>(cfg_.d)) {
        throw ConfigError("generator: covariance dimension does not match d");
      }
      try {
        cov_chol_ = cholesky_lower(cfg_.regressor.covariance);
      } catch (const NumericError&) {
        throw ConfigError("generator: covariance must be SPD");
      }
      break;
    }
    case RegressorKind::Ar1:
      if (!std::isfinite(cfg_.regressor.a) ||
          !std::isfinite(cfg_.regressor.input_scale_exponent)) {
        throw ConfigError("generator: ar1 parameters must be finite");
      }
      break;
    case RegressorKind::BoundedSphere:
      if (!(cfg_.regressor.radius > 0.0)) {
        throw ConfigError("generator: sphere radius must be positive");
      }
      break;
  }
  phi_ = initial_phi();
}

Generator make_generator(const GeneratorConfig& cfg) { return Generator(cfg); }

Vector Generator::gaussian_vector() {
  Vector g = Vector::zeros(cfg_.d);
  for (int i = 0; i < cfg_.d; ++i) g[i] = input_.next_gaussian();
  return g;
}

Vector Generator::initial_phi() {
  switch (cfg_.regressor.kind) {
    case RegressorKind::IidGaussian: {
      const Vector g = gaussian_vector();
      Vector out = Vector::zeros(cfg_.d);
      for (int i = 0; i < cfg_.d; ++i) {
        double acc = 0.0;
        for (int k = 0; k <= i; ++k) acc += cov_chol_[i * cfg_.d + k] * g[k];
        out[i] = acc;
      }
      return out;
    }
    case RegressorKind::Ar1:
      return gaussian_vector();
    case RegressorKind::BoundedSphere: {
      Vector g = gaussian_vector();
      const double nrm = norm(g);
      if (nrm == 0.0) {
        Vector e = Vector::zeros(cfg_.d);
        e[0] = cfg_.regressor.radius;
        return e;
      }
      return (cfg_.regressor.radius / nrm) * g;
    }
  }
  return Vector::zeros(cfg_.d);
}

Vector ar1_advance(const Vector& phi, std::int64_t n, double a,
                   double input_scale_exponent, const Vector& e) {
  const double scale = std::pow(static_cast<double>(n), -input_scale_exponent);
  Vector out = a * phi;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += scale * e[i];
  return out;
}

Vector Generator::next_phi(std::int64_t n) {
  switch (cfg_.regressor.kind) {
    case RegressorKind::IidGaussian:
    case RegressorKind::BoundedSphere:
      return initial_phi();  // fresh draw each step
    case RegressorKind::Ar1:
      return ar1_advance(phi_, n, cfg_.regressor.a, cfg_.regressor.input_scale_exponent,
                         gaussian_vector());
  }
  return phi_;
}

LabeledObservation Generator::next() {
  LabeledObservation obs;
  obs.phi = phi_;
  const double u = labels_.next_uniform();
  obs.z = (u <= cfg_.p) ? 1 : -1;
  obs.w = std::sqrt(cfg_.sigma2) * noise_.next_gaussian();
  obs.y = static_cast<double>(obs.z) * dot(cfg_.beta_star, phi_) + obs.w;
  phi_ = next_phi(n_);
  ++n_;
  return obs;
}

}  // namespace mlr
