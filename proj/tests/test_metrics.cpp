#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "mlrlab/errors.hpp"
#include "mlrlab/least_squares.hpp"
#include "mlrlab/metrics.hpp"
#include "mlrlab/random.hpp"
#include "mlrlab/synthetic.hpp"

using namespace mlrlab;

namespace {

MLRModel model2(std::initializer_list<std::initializer_list<double>> rows) {
  MLRModel m;
  for (auto r : rows) {
    Vector v(static_cast<Index>(r.size()));
    Index i = 0;
    for (double x : r) v(i++) = x;
    m.betas.push_back(v);
  }
  return m;
}

// Enumerates every injective map [K*] -> [K] and returns the smallest mean
// distance; with K = K* this is the permutation minimum.
double exhaustive(const MLRModel& est, const MLRModel& truth) {
  const int K = est.K();
  const int Ks = truth.K();
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(static_cast<std::size_t>(Ks));
  std::vector<bool> used(static_cast<std::size_t>(K), false);
  auto rec = [&](auto&& self, int k) -> void {
    if (k == Ks) {
      double total = 0;
      for (int j = 0; j < Ks; ++j) total += (est.betas[pick[j]] - truth.betas[j]).norm();
      best = std::min(best, total / Ks);
      return;
    }
    for (int c = 0; c < K; ++c) {
      if (used[c]) continue;
      used[c] = true;
      pick[k] = c;
      self(self, k + 1);
      used[c] = false;
    }
  };
  rec(rec, 0);
  return best;
}

}  // namespace

TEST_CASE("f_latent examples") {
  const auto truth = model2({{1, 0}, {0, 1}});
  auto same = f_latent(truth, truth);
  CHECK(same.value == 0.0);
  CHECK(same.permutation == std::vector<int>{0, 1});

  CHECK(f_latent(model2({{0, 1}, {1, 0}}), truth).value == 0.0);

  const auto r = f_latent(model2({{0, 1}, {1, 0.5}}), truth);
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(r.permutation == std::vector<int>{1, 0});
}

TEST_CASE("assignment and brute force agree on random instances") {
  Rng rng(2718);
  for (int trial = 0; trial < 100; ++trial) {
    const int K = 1 + static_cast<int>(rng.below(6));
    const int d = 1 + static_cast<int>(rng.below(5));
    const auto est = random_initialization(K, d, rng.next_u64());
    const auto truth = random_initialization(K, d, rng.next_u64());
    const double oracle = exhaustive(est, truth);
    CHECK(std::abs(f_latent(est, truth).value - oracle) <= 1e-12);
    const auto via_assignment = f_latent_assignment(est, truth);
    CHECK(std::abs(via_assignment.value - oracle) <= 1e-12);
  }
}

TEST_CASE("hungarian route above the brute-force size") {
  const auto truth = random_initialization(10, 3, 5);
  MLRModel est;
  const std::vector<int> perm{3, 7, 0, 9, 1, 5, 2, 8, 6, 4};
  for (int k : perm) est.betas.push_back(truth.betas[k]);
  const auto r = f_latent(est, truth);
  CHECK(r.value <= 1e-15);
  for (int k = 0; k < 10; ++k) CHECK(perm[r.permutation[k]] == k);
}

TEST_CASE("f_latent is invariant to permuting the estimate") {
  const auto truth = random_initialization(5, 4, 8);
  const auto est = random_initialization(5, 4, 9);
  MLRModel shuffled;
  for (int k : {4, 2, 0, 3, 1}) shuffled.betas.push_back(est.betas[k]);
  CHECK(f_latent(est, truth).value == doctest::Approx(f_latent(shuffled, truth).value).epsilon(1e-15));
}

TEST_CASE("f_latent_overparam") {
  const auto truth = random_initialization(3, 4, 10);
  const auto est = random_initialization(3, 4, 11);
  CHECK(f_latent_overparam(est, truth) == f_latent(est, truth).value);

  auto extended = truth;
  extended.betas.push_back(Vector::Constant(4, 9.0));
  CHECK(f_latent_overparam(extended, truth) == 0.0);

  const auto small_truth = model2({{1, 0}, {0, 1}});
  const auto handcrafted = model2({{0.9, 0.1}, {5, 5}, {0.2, 1.1}});
  CHECK(f_latent_overparam(handcrafted, small_truth) ==
        doctest::Approx(exhaustive(handcrafted, small_truth)).epsilon(1e-14));

  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int Ks = 1 + static_cast<int>(rng.below(4));
    const int K = Ks + static_cast<int>(rng.below(3));
    const auto e = random_initialization(K, 3, rng.next_u64());
    const auto t = random_initialization(Ks, 3, rng.next_u64());
    CHECK(std::abs(f_latent_overparam(e, t) - exhaustive(e, t)) <= 1e-12);
    auto more = e;
    more.betas.push_back(random_initialization(1, 3, rng.next_u64()).betas[0]);
    CHECK(f_latent_overparam(more, t) <= f_latent_overparam(e, t));
  }
  CHECK_THROWS_AS(f_latent_overparam(small_truth, extended), InvalidArgument);
}

TEST_CASE("f_real") {
  MixtureSpec spec;
  spec.K = 2;
  spec.proportions = {0.6, 0.4};
  spec.d = 4;
  spec.sigma = 0.0;
  spec.seed = 12;
  const auto data = generate_synthetic(spec, 200);
  CHECK(f_real(*data.truth, data) <= 1e-28);

  const Vector beta = ols(data.X, data.y);
  const Vector resid = data.y - data.X * beta;
  const double mean = data.y.mean();
  const double ss_tot = (data.y.array() - mean).square().sum();
  const double r2 = 1.0 - resid.squaredNorm() / ss_tot;
  const MLRModel single({beta});
  CHECK(f_real(single, data) == doctest::Approx(1.0 - r2).epsilon(1e-12));

  auto dup = single;
  dup.betas.push_back(beta);
  CHECK(f_real(dup, data) == f_real(single, data));

  const auto est = random_initialization(3, 4, 13);
  MLRModel swapped({est.betas[2], est.betas[0], est.betas[1]});
  CHECK(f_real(est, data) == f_real(swapped, data));

  Dataset flat = data;
  flat.y.setConstant(3.0);
  CHECK_THROWS_AS(f_real(single, flat), ZeroVariance);
}

TEST_CASE("failure threshold and convergence rule") {
  CHECK(failure_threshold(1e-2) == doctest::Approx(2e-2));
  CHECK(failure_threshold(0.0) == 1e-6);
  CHECK(failure_threshold(0.5) == 1.0);
  CHECK(stopping_tolerance(1e-2) == doctest::Approx(1e-4));
  CHECK(stopping_tolerance(0.0) == 2.0 * kMachineEpsilon);
  CHECK(stopping_tolerance(500.0) == 1.0);
  CHECK(gd_stopping_tolerance(1e-2) == doctest::Approx(1e-6));

  const auto m = random_initialization(2, 3, 14);
  CHECK(converged(m, m, 1e-12));
  const double delta = 1e-3;
  MLRModel moved = m;
  for (auto& b : moved.betas) b *= 1.0 + 2.0 * delta;
  // Relative change of 2 delta / (1 + 2 delta) per vector: ratio above delta^2.
  CHECK_FALSE(converged(m, moved, delta));
  MLRModel zero({Vector::Zero(3), Vector::Zero(3)});
  CHECK_THROWS_AS(converged(m, zero, delta), Indeterminate);
}

TEST_CASE("solve_assignment") {
  Matrix cost(3, 3);
  cost << 4, 1, 3, 2, 0, 5, 3, 2, 2;
  const auto cols = solve_assignment(cost);
  CHECK(cost(0, cols[0]) + cost(1, cols[1]) + cost(2, cols[2]) == 5.0);

  Matrix wide(2, 4);
  wide << 9, 9, 1, 9, 9, 2, 9, 0;
  CHECK(solve_assignment(wide) == std::vector<int>{2, 3});
}

TEST_CASE("evaluate") {
  MixtureSpec spec;
  spec.K = 2;
  spec.proportions = {0.5, 0.5};
  spec.d = 3;
  spec.sigma = 0.01;
  spec.seed = 15;
  const auto data = generate_synthetic(spec, 100);
  const auto rep = evaluate(*data.truth, data, 0.01);
  CHECK(rep.f_latent == 0.0);
  CHECK_FALSE(rep.failed);
  CHECK(rep.threshold == doctest::Approx(0.02));
  const auto bad = evaluate(random_initialization(2, 3, 16), data, 0.01);
  CHECK(bad.failed);
}
