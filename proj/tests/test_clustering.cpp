#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "mlr/clustering.hpp"
#include "mlr/datagen.hpp"
#include "mlr/errors.hpp"
#include "mlr/rng.hpp"

using namespace mlr;

TEST_CASE("classify picks the smaller residual") {
  const Vector beta{2.0};
  // beta^T phi = 2; submodel 1 predicts +2, submodel 2 predicts -2.
  CHECK(classify(beta, Vector{1.0}, 1.9) == 1);
  CHECK(classify(beta, Vector{1.0}, -1.9) == 2);
  CHECK(classify(beta, Vector{1.0}, 0.0) == 1);  // exact tie -> 1
  CHECK(classify(beta, Vector{0.0}, 5.0) == 1);  // beta^T phi = 0 is a tie
}

TEST_CASE("classify rejects non-finite input") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(classify(Vector{nan}, Vector{1.0}, 0.0), ConfigError);
  CHECK_THROWS_AS(classify(Vector{1.0}, Vector{1.0}, nan), ConfigError);
}

TEST_CASE("oracle_classify is classify at the true parameter") {
  const Vector beta_star{1.0, -2.0};
  CounterRng rng(5, 0);
  for (int i = 0; i < 200; ++i) {
    const Vector phi{rng.next_gaussian(), rng.next_gaussian()};
    const double y = rng.next_gaussian() * 2.0;
    CHECK(oracle_classify(beta_star, phi, y) == classify(beta_star, phi, y));
  }
}

TEST_CASE("classification is symmetric under beta -> -beta off ties") {
  const Vector beta{1.0, 0.5};
  const Vector minus = -1.0 * beta;
  CounterRng rng(9, 0);
  for (int i = 0; i < 500; ++i) {
    const Vector phi{rng.next_gaussian(), rng.next_gaussian()};
    const double y = rng.next_gaussian();
    if (y * dot(beta, phi) == 0.0) continue;  // ties break asymmetrically
    CHECK(classify(beta, phi, y) + classify(minus, phi, y) == 3);
  }
}

TEST_CASE("true_index maps the generating label") {
  CHECK(true_index(1) == 1);
  CHECK(true_index(-1) == 2);
  CHECK_THROWS_AS(true_index(0), ConfigError);
}

TEST_CASE("update_metrics on a perfectly classified point") {
  const Vector beta{2.0};
  ClusterMetrics m;
  // z = +1, y = 2.1: submodel 1 residual 0.1^2, submodel 2 residual 4.1^2.
  m = update_metrics(m, beta, beta, Vector{1.0}, 2.1, 1);
  CHECK(m.n == 1);
  CHECK(m.miss_alg == 0);
  CHECK(m.miss_oracle == 0);
  CHECK(m.miss_alg_swapped == 1);  // the swapped classifier is always wrong here
  CHECK(m.j == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(m.j_oracle == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("update_metrics on a noise-flipped point") {
  const Vector beta{2.0};
  ClusterMetrics m;
  // z = +1 but y = -1.9 sits closer to submodel 2: every classifier that
  // ignores the label gets it wrong, and J charges the chosen submodel.
  m = update_metrics(m, beta, beta, Vector{1.0}, -1.9, 1);
  CHECK(m.n == 1);
  CHECK(m.miss_alg == 1);
  CHECK(m.miss_oracle == 1);
  CHECK(m.miss_alg_swapped == 0);
  CHECK(m.j == doctest::Approx(0.01).epsilon(1e-12));  // (-1.9 + 2)^2
}

TEST_CASE("sign-flipped estimate: raw count saturates, aligned gap vanishes") {
  GeneratorConfig gen;
  gen.p = 0.6;
  gen.sigma2 = 0.0;  // noise-free so the oracle is always right
  Generator g(gen);
  ClusterMetrics m;
  const Vector flipped = -1.0 * gen.beta_star;
  for (int i = 0; i < 2000; ++i) {
    const LabeledObservation obs = g.next();
    m = update_metrics(m, flipped, gen.beta_star, obs.phi, obs.y, obs.z);
  }
  CHECK(m.miss_oracle == 0);
  CHECK(m.miss_alg == 2000);  // every label flipped
  CHECK(m.miss_alg_swapped == 0);
  CHECK(misclass_gap(m) == doctest::Approx(1.0));
  CHECK(misclass_gap(m, true) == 0.0);
  // The within-cluster error is label-blind: J is identical for both signs.
  CHECK(m.j == doctest::Approx(m.j_oracle).epsilon(1e-12));
}

TEST_CASE("misclass_gap arithmetic") {
  ClusterMetrics m;
  m.n = 100;
  m.miss_alg = 7;
  m.miss_oracle = 5;
  m.miss_alg_swapped = 93;
  CHECK(misclass_gap(m) == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(misclass_gap(m, true) == doctest::Approx(0.02).epsilon(1e-12));

  m.miss_alg_swapped = 3;
  CHECK(misclass_gap(m, true) == doctest::Approx(0.02).epsilon(1e-12));

  ClusterMetrics empty;
  CHECK_THROWS_AS(misclass_gap(empty), ConfigError);
}

TEST_CASE("residual-minimizing labels beat random relabelings on J") {
  GeneratorConfig gen;
  gen.sigma2 = 1.0;
  gen.seed = 21;
  Generator g(gen);
  const int n = 300;
  std::vector<LabeledObservation> obs;
  for (int i = 0; i < n; ++i) obs.push_back(g.next());

  ClusterMetrics m;
  for (const auto& o : obs) {
    m = update_metrics(m, gen.beta_star, gen.beta_star, o.phi, o.y, o.z);
  }

  // J with argmin assignments is pointwise minimal, so no label sequence
  // can do better.
  CounterRng rng(77, 0);
  for (int trial = 0; trial < 20; ++trial) {
    double j_random = 0.0;
    for (const auto& o : obs) {
      const int idx = rng.next_uniform() <= 0.5 ? 1 : 2;
      const double pred = (idx == 1 ? 1.0 : -1.0) * dot(gen.beta_star, o.phi);
      j_random += (o.y - pred) * (o.y - pred);
    }
    CHECK(m.j <= j_random + 1e-9);
  }
}

TEST_CASE("oracle within-cluster error stays near the noise floor") {
  GeneratorConfig gen;
  gen.sigma2 = 1.0;
  gen.seed = 4;
  Generator g(gen);
  ClusterMetrics m;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const LabeledObservation obs = g.next();
    m = update_metrics(m, gen.beta_star, gen.beta_star, obs.phi, obs.y, obs.z);
  }
  // J/n <= sigma^2 in expectation (argmin can only shave the residual);
  // allow a little room above for sampling noise.
  CHECK(m.j / m.n <= 1.05);
  CHECK(m.j / m.n >= 0.5);
  CHECK(m.j_oracle == m.j);  // same parameter, same assignments
}

TEST_CASE("merge adds component-wise") {
  ClusterMetrics a;
  a.n = 3;
  a.miss_alg = 1;
  a.miss_oracle = 0;
  a.miss_alg_swapped = 2;
  a.j = 1.5;
  a.j_oracle = 1.25;
  ClusterMetrics b;
  b.n = 5;
  b.miss_alg = 2;
  b.miss_oracle = 2;
  b.miss_alg_swapped = 3;
  b.j = 0.5;
  b.j_oracle = 0.75;
  const ClusterMetrics c = merge(a, b);
  CHECK(c.n == 8);
  CHECK(c.miss_alg == 3);
  CHECK(c.miss_oracle == 2);
  CHECK(c.miss_alg_swapped == 5);
  CHECK(c.j == 2.0);
  CHECK(c.j_oracle == 2.0);
}
