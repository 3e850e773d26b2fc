#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "becsim/coherent.hpp"
#include "becsim/jump.hpp"
#include "test_util.hpp"

using namespace becsim;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

// Inverse-CDF sampling via bisection; independent route for the KS check.
double inverse_cdf_sample(const FringeStats& fs, double u) {
  auto cdf = [&](double phi) {
    return ((phi + kPi) +
            fs.beta_c * (std::sin(phi - fs.theta) - std::sin(-kPi - fs.theta))) /
           (2.0 * kPi);
  };
  double lo = -kPi, hi = kPi;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}
}  // namespace

TEST_CASE("number states have a flat fringe") {
  const FringeStats fs = fringe_stats(number_state(4, 9));
  CHECK(fs.beta_c == 0.0);
  CHECK(fs.theta == 0.0);
  CHECK(detection_density(number_state(4, 9), 0.3) ==
        Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));
}

TEST_CASE("fringe_stats rejects the vacuum") {
  CHECK_THROWS_AS(fringe_stats(number_state(0, 0)), std::domain_error);
}

TEST_CASE("phase-state density peaks at 2 phi0 and vanishes opposite") {
  const FringeStats fs = fringe_stats(phase_state(0.0, 12));
  CHECK(detection_density(fs, 0.0) == Approx(1.0 / kPi).epsilon(1e-12));
  CHECK(detection_density(fs, kPi) == Approx(0.0).epsilon(1e-12));
  CHECK(detection_density(fs, kPi / 2) ==
        Approx(1.0 / (2.0 * kPi)).epsilon(1e-12));

  const FringeStats tilted = fringe_stats(phase_state(0.4, 12));
  CHECK(detection_density(tilted, 0.8) == Approx(1.0 / kPi).epsilon(1e-10));
}

TEST_CASE("density integrates to one for random states") {
  Rng rng(33);
  for (int rep = 0; rep < 6; ++rep) {
    const TwoModeFockState s = testutil::random_state(25, rng);
    const FringeStats fs = fringe_stats(s);
    const int npts = 10000;
    const double h = 2.0 * kPi / npts;
    double integral = 0.5 * (detection_density(fs, -kPi) +
                             detection_density(fs, kPi));
    for (int j = 1; j < npts; ++j) {
      integral += detection_density(fs, -kPi + h * j);
    }
    integral *= h;
    CHECK(integral == Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("visibility stays within [0, 1] on random states") {
  Rng rng(35);
  for (int rep = 0; rep < 40; ++rep) {
    const TwoModeFockState s = testutil::random_state(1 + rep % 31, rng);
    const FringeStats fs = fringe_stats(s);
    CHECK(fs.beta_c >= 0.0);
    CHECK(fs.beta_c <= 1.0 + 1e-12);
  }
}

TEST_CASE("uniform sampling from a number state passes chi-square") {
  Rng rng(101);
  const FringeStats fs = fringe_stats(number_state(8, 8));
  std::vector<double> samples(100000);
  for (double& s : samples) s = sample_position(fs, rng);
  // 20 bins, 19 dof, 99% critical value
  CHECK(testutil::chi2_uniform(samples, 20) < 36.191);
}

TEST_CASE("phase-state samples have mean cos of one half") {
  Rng rng(103);
  const FringeStats fs = fringe_stats(phase_state(0.0, 16));
  double mean_cos = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) mean_cos += std::cos(sample_position(fs, rng));
  mean_cos /= n;
  CHECK(mean_cos == Approx(0.5).epsilon(0.02));
  CHECK(std::abs(mean_cos - 0.5) < 0.01);
}

TEST_CASE("rejection and inverse-CDF sampling agree (KS, 99%)") {
  Rng rng(107);
  for (int rep = 0; rep < 3; ++rep) {
    FringeStats fs;
    fs.beta_c = uniform_double(rng);
    fs.theta = (2.0 * uniform_double(rng) - 1.0) * kPi;
    const std::size_t n = 100000;
    std::vector<double> rejection(n), inverse(n);
    for (std::size_t i = 0; i < n; ++i) {
      rejection[i] = sample_position(fs, rng);
    }
    for (std::size_t i = 0; i < n; ++i) {
      inverse[i] = inverse_cdf_sample(fs, uniform_double(rng));
    }
    const double d = testutil::ks_statistic(rejection, inverse);
    CHECK(d < testutil::ks_critical_99(n, n));
  }
}

TEST_CASE("sampling is reproducible for a fixed seed") {
  const FringeStats fs = fringe_stats(phase_state(0.2, 10));
  Rng rng1(999), rng2(999);
  for (int i = 0; i < 100; ++i) {
    CHECK(sample_position(fs, rng1) == sample_position(fs, rng2));
  }
}

TEST_CASE("visibility after one detection from |n,n> ignores the position") {
  for (int n : {3, 100}) {
    const double reference = fringe_stats(normalized(apply_interference_jump(
                                 number_state(n, n), 0.0)))
                                 .beta_c;
    for (double phi : {-2.9, -0.4, 0.7, 1.9, kPi - 1e-3}) {
      const double beta = fringe_stats(normalized(apply_interference_jump(
                              number_state(n, n), phi)))
                              .beta_c;
      CHECK(std::abs(beta - reference) < 1e-12);
    }
  }
}
