#include <doctest.h>

#include <cmath>

#include "mlrlab/errors.hpp"
#include "mlrlab/theory.hpp"

using namespace mlrlab;
using namespace mlrlab::theory;

namespace {

TheoryInputs inputs(double p1, double sigma_eps, double R, double eta = 1.0, double D = 0.0) {
  TheoryInputs in;
  in.p1 = p1;
  in.p2 = 1.0 - p1;
  in.sigma_eps = sigma_eps;
  in.delta_norm = 1.0;
  in.eta = eta;
  in.R = R;
  in.D = D;
  return in;
}

}  // namespace

TEST_CASE("gamma") {
  CHECK(gamma(0.8, 0.2) == doctest::Approx(0.3125).epsilon(1e-15));
  CHECK(gamma(2.0 / 3.0, 1.0 / 3.0) == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(gamma(1.0, 0.0) == 0.0);
}

TEST_CASE("q value") {
  const auto in = inputs(0.8, 0.0, 100.0);
  const auto noiseless = q_value(in);
  CHECK(noiseless.q == gamma(in.p1, in.p2));
  CHECK(noiseless.applicable);

  const auto noisy = q_value(inputs(0.8, 0.01, 1e6));
  CHECK(noisy.q == doctest::Approx(0.3125 + (1.25 + 0.001) * 0.01).epsilon(1e-14));
  CHECK(noisy.q == doctest::Approx(0.32501).epsilon(1e-12));

  CHECK_FALSE(q_value(inputs(2.0 / 3.0, 0.0, 100.0)).applicable);
}

TEST_CASE("admissible threshold range") {
  const auto noisy = wth_range(inputs(0.8, 0.01, 1e6));
  CHECK(std::abs(noisy.lo - 0.687) <= 1e-3);
  CHECK(std::abs(noisy.hi - 0.905) <= 1e-3);
  CHECK(std::abs(noisy.lo - 0.69) <= 0.01);
  CHECK(std::abs(noisy.hi - 0.90) <= 0.01);

  const auto clean = wth_range(inputs(0.9, 0.0, 100.0));
  CHECK(gamma(0.9, 0.1) == doctest::Approx(5.0 / 36.0));
  CHECK(clean.lo == doctest::Approx(1.0 / (1.0 + std::pow(31.0 / 36.0, 2))).epsilon(1e-14));
  CHECK(clean.hi == doctest::Approx(1.0 / (1.0 + std::pow(5.0 / 36.0, 2))).epsilon(1e-14));
  CHECK(std::abs(clean.lo - 0.574) <= 1e-3);
  CHECK(std::abs(clean.hi - 0.981) <= 1e-3);

  // gamma = 1/2 exactly at p = (5/7, 2/7).
  CHECK_THROWS_AS(wth_range(inputs(5.0 / 7.0, 0.0, 100.0)), EmptyRange);
}

TEST_CASE("threshold range widens with imbalance") {
  double prev_lo = 1.0, prev_hi = 0.0;
  for (double p1 : {0.75, 0.8, 0.85, 0.9, 0.95}) {
    const auto r = wth_range(inputs(p1, 0.01, 1e4));
    CHECK(r.lo < prev_lo);
    CHECK(r.hi > prev_hi);
    prev_lo = r.lo;
    prev_hi = r.hi;
  }
  double prev_q = 1.0;
  for (double p1 : {0.7, 0.8, 0.9, 0.99}) {
    const double q = q_value(inputs(p1, 0.01, 1e4)).q;
    CHECK(q < prev_q);
    prev_q = q;
  }
}

TEST_CASE("R lower bound") {
  CHECK(r_lower_bound(inputs(0.8, 0.0, 100.0)) == doctest::Approx(11.25).epsilon(1e-14));

  const auto tiny_eta = inputs(0.8, 0.0, 100.0, 1e-12);
  const double q = q_value(tiny_eta).q;
  CHECK(r_lower_bound(tiny_eta) == doctest::Approx(1.0 / (q * q)).epsilon(1e-12));

  const auto far = inputs(0.8, 0.0, 100.0, 1.0, 100.0);
  CHECK(r_lower_bound(far) == doctest::Approx(5.0 * 300.0 * 300.0).epsilon(1e-14));
  CHECK(r_lower_bound(far) / (45.0 * 100.0 * 100.0) == doctest::Approx(1.0));

  // q - xi / sqrt(R) = gamma + xi / p1 vanishes only for one noiseless component.
  CHECK_THROWS_AS(r_lower_bound(inputs(1.0, 0.0, 100.0)), Inapplicable);
}

TEST_CASE("recovery bound") {
  CHECK(recovery_bound(inputs(0.8, 0.0, 100.0)) == 0.0);
  CHECK(recovery_bound(inputs(0.8, 0.01, 100.0)) ==
        doctest::Approx(0.1 * 0.01 / 0.3225).epsilon(1e-14));
  CHECK(std::abs(recovery_bound(inputs(0.8, 0.01, 100.0)) - 3.10e-3) <= 1e-5);

  double prev = 1.0;
  for (double R : {1.0, 10.0, 1e3, 1e6, 1e12}) {
    const double b = recovery_bound(inputs(0.8, 0.01, R));
    CHECK(b < prev);
    prev = b;
  }
  CHECK(recovery_bound(inputs(0.8, 0.01, 1e300)) < 1e-140);
  CHECK(recovery_bound(inputs(0.8, 0.02, 100.0)) > recovery_bound(inputs(0.8, 0.01, 100.0)));

  CHECK_THROWS_AS(recovery_bound(inputs(0.6, 0.0, 100.0)), Inapplicable);
}

TEST_CASE("input validation") {
  auto bad = inputs(0.8, 0.01, 100.0);
  bad.p2 = 0.3;
  CHECK_THROWS_AS(q_value(bad), InvalidArgument);
  auto flipped = inputs(0.3, 0.01, 100.0);
  CHECK_THROWS_AS(q_value(flipped), InvalidArgument);
  auto zero_gap = inputs(0.8, 0.01, 100.0);
  zero_gap.delta_norm = 0.0;
  CHECK_THROWS_AS(q_value(zero_gap), InvalidArgument);
}
