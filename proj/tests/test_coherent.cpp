#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "becsim/coherent.hpp"
#include "becsim/jump.hpp"
#include "becsim/math.hpp"
#include "becsim/trajectory.hpp"
#include "test_util.hpp"

using namespace becsim;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

ModePair random_pair(Rng& rng) {
  const double theta = uniform_double(rng) * kPi;
  const double chi = (2.0 * uniform_double(rng) - 1.0) * kPi;
  return ModePair::from_angles(theta, chi);
}

Complex direct_inner(const TwoModeFockState& bra, const TwoModeFockState& ket) {
  return bra.amplitudes().dot(ket.amplitudes());
}

}  // namespace

TEST_CASE("mode pair normalizes and fixes the gauge") {
  const ModePair p(Complex(0.0, 2.0), Complex(2.0, 0.0));
  CHECK(std::norm(p.mu) + std::norm(p.nu) == Approx(1.0).epsilon(1e-12));
  CHECK(p.mu.imag() == 0.0);
  CHECK(p.mu.real() >= 0.0);

  const ModePair q = ModePair::from_angles(1.1, -2.0);
  CHECK(q.theta() == Approx(1.1).epsilon(1e-12));
  CHECK(q.chi() == Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("single-mode limit gives a number state") {
  const TwoModeFockState s = atomic_coherent_state(ModePair(1.0, 0.0), 5);
  CHECK(s.total_atoms() == 5);
  CHECK(std::abs(s.amplitude(5) - Complex(1.0, 0.0)) < 1e-14);
  for (int m = 0; m < 5; ++m) CHECK(std::abs(s.amplitude(m)) == 0.0);
}

TEST_CASE("balanced two-atom coherent state expands by hand") {
  const double r = 1.0 / std::sqrt(2.0);
  const TwoModeFockState s = atomic_coherent_state(ModePair(r, r), 2);
  CHECK(s.amplitude(0).real() == Approx(0.5).epsilon(1e-13));
  CHECK(s.amplitude(1).real() == Approx(r).epsilon(1e-13));
  CHECK(s.amplitude(2).real() == Approx(0.5).epsilon(1e-13));
}

TEST_CASE("coherent state occupations are N|mu|^2 and N|nu|^2") {
  Rng rng(5);
  for (int rep = 0; rep < 8; ++rep) {
    const ModePair p = random_pair(rng);
    const int n_atoms = 1 + int(uniform_double(rng) * 150);
    const TwoModeFockState s = atomic_coherent_state(p, n_atoms);
    CHECK(norm_sq(s) == Approx(1.0).epsilon(1e-10));
    const auto [na, nb] = mode_occupations(s);
    CHECK(na == Approx(n_atoms * std::norm(p.mu)).epsilon(1e-9));
    CHECK(nb == Approx(n_atoms * std::norm(p.nu)).epsilon(1e-9));
  }
}

TEST_CASE("coherent state occupancy is binomial") {
  Rng rng(6);
  const ModePair p = random_pair(rng);
  const int n_atoms = 60;
  const TwoModeFockState s = atomic_coherent_state(p, n_atoms);
  for (int m = 0; m <= n_atoms; ++m) {
    const double expected = std::exp(log_choose(n_atoms, m) +
                                     2.0 * m * std::log(std::abs(p.mu)) +
                                     2.0 * (n_atoms - m) *
                                         std::log(std::abs(p.nu)));
    CHECK(std::norm(s.amplitude(m)) == Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("phase state keeps explicit relative phases") {
  const TwoModeFockState s = phase_state(0.0, 1);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(s.amplitude(0) - Complex(r, 0.0)) < 1e-14);
  CHECK(std::abs(s.amplitude(1) - Complex(r, 0.0)) < 1e-14);

  const double phi = 0.7;
  const int n_atoms = 9;
  const TwoModeFockState sp = phase_state(phi, n_atoms);
  for (int n = 0; n <= n_atoms; ++n) {
    const double mag = std::exp(0.5 * (log_choose(n_atoms, n) -
                                       n_atoms * std::log(2.0)));
    const Complex expected = std::polar(mag, phi * (2.0 * n - n_atoms));
    CHECK(std::abs(sp.amplitude(n) - expected) < 1e-13);
  }
}

TEST_CASE("phase states have unit visibility and theta = 2 phi") {
  for (double phi : {0.0, 0.3, -1.2, kPi / 8}) {
    const FringeStats fs = fringe_stats(phase_state(phi, 24));
    CHECK(fs.beta_c == Approx(1.0).epsilon(1e-12));
    CHECK(std::remainder(fs.theta - 2.0 * phi, 2.0 * kPi) ==
          Approx(0.0).epsilon(1e-10));
  }
}

TEST_CASE("phase state expectation of a^dag b is N/2 at phi=0") {
  const int n_atoms = 40;
  const TwoModeFockState s = normalized(phase_state(0.0, n_atoms));
  CHECK(expect_adag_b(s).real() == Approx(n_atoms / 2.0).epsilon(1e-10));
}

TEST_CASE("coherent-state visibility is 2|mu||nu|") {
  Rng rng(9);
  for (int rep = 0; rep < 8; ++rep) {
    const ModePair p = random_pair(rng);
    const int n_atoms = 2 + int(uniform_double(rng) * 120);
    const FringeStats fs = fringe_stats(atomic_coherent_state(p, n_atoms));
    CHECK(fs.beta_c ==
          Approx(2.0 * std::abs(p.mu) * std::abs(p.nu)).epsilon(1e-10));
  }
}

TEST_CASE("overlap kernel against the direct inner product") {
  CHECK(std::abs(overlap_kernel(ModePair(1.0, 0.0), ModePair(0.0, 1.0), 3)) ==
        0.0);
  Rng rng(21);
  for (int n_atoms : {1, 7, 50, 200}) {
    for (int rep = 0; rep < 12; ++rep) {
      const ModePair p1 = random_pair(rng);
      const ModePair p2 = random_pair(rng);
      CHECK(std::abs(overlap_kernel(p1, p1, n_atoms)) ==
            Approx(1.0).epsilon(1e-12));
      const Complex kernel = overlap_kernel(p1, p2, n_atoms);
      const Complex direct = direct_inner(atomic_coherent_state(p2, n_atoms),
                                          atomic_coherent_state(p1, n_atoms));
      CHECK(std::abs(kernel - direct) < 1e-10);
    }
  }
}

TEST_CASE("phase-state kernel is cos(phi - phi') to the 2N") {
  const int n_atoms = 4;
  // gauge-invariant statement, so compare squared magnitudes
  const double p = overlap_with(phase_state(kPi / 2, n_atoms),
                                ModePair(std::polar(1.0 / std::sqrt(2.0), 0.0),
                                         std::polar(1.0 / std::sqrt(2.0), 0.0)));
  CHECK(p == Approx(0.0).epsilon(1e-12));

  const double p2 = overlap_with(
      phase_state(0.4, 6),
      ModePair(std::polar(1.0 / std::sqrt(2.0), 0.1),
               std::polar(1.0 / std::sqrt(2.0), -0.1)));
  CHECK(p2 == Approx(std::pow(std::cos(0.4 - 0.1), 12)).epsilon(1e-10));
}

TEST_CASE("overlap_with equals the squared kernel for coherent states") {
  Rng rng(23);
  for (int n_atoms : {1, 7, 50, 200}) {
    for (int rep = 0; rep < 6; ++rep) {
      const ModePair p1 = random_pair(rng);
      const ModePair p2 = random_pair(rng);
      const double direct =
          overlap_with(atomic_coherent_state(p1, n_atoms), p2);
      const double kernel = std::norm(overlap_kernel(p1, p2, n_atoms));
      CHECK(std::abs(direct - kernel) < 1e-10);
      CHECK(overlap_with(atomic_coherent_state(p1, n_atoms), p1) ==
            Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("overlap is gauge invariant") {
  Rng rng(29);
  const TwoModeFockState s = testutil::random_state(30, rng);
  const TwoModeFockState rotated{s.amplitudes() * std::polar(1.0, 1.234)};
  const ModePair p = random_pair(rng);
  CHECK(overlap_with(s, p) == Approx(overlap_with(rotated, p)).epsilon(1e-12));
  const OverlapResult r1 = max_overlap(s);
  const OverlapResult r2 = max_overlap(rotated);
  CHECK(r1.p_max == Approx(r2.p_max).epsilon(1e-12));
  // argmax agrees only to the refinement tolerance of the chart search
  CHECK(std::abs(r1.argmax.theta() - r2.argmax.theta()) < 2e-6);
}

TEST_CASE("annihilators map coherent states down the ladder") {
  Rng rng(31);
  for (int rep = 0; rep < 8; ++rep) {
    const ModePair p = random_pair(rng);
    const int n_atoms = 2 + int(uniform_double(rng) * 100);
    const TwoModeFockState s = atomic_coherent_state(p, n_atoms);
    const TwoModeFockState down = atomic_coherent_state(p, n_atoms - 1);

    if (std::abs(p.mu) > 1e-3) {
      const Eigen::VectorXcd lhs = apply_loss_jump(s, Mode::a).amplitudes();
      const Eigen::VectorXcd rhs =
          std::sqrt(double(n_atoms)) * p.mu * down.amplitudes();
      CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-10);
    }
    if (std::abs(p.nu) > 1e-3) {
      const Eigen::VectorXcd lhs = apply_loss_jump(s, Mode::b).amplitudes();
      const Eigen::VectorXcd rhs =
          std::sqrt(double(n_atoms)) * p.nu * down.amplitudes();
      CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-10);
    }
  }
}

TEST_CASE("collision dephasing of a balanced ten-atom coherent state") {
  // |beta_c(t)| = |cos(2 kappa t)|^{N-1} exactly
  const double r = 1.0 / std::sqrt(2.0);
  const TwoModeFockState acs = atomic_coherent_state(ModePair(r, r), 10);
  const double kappa = 1.0;
  for (double t : {0.1, 0.3}) {
    const double beta = fringe_stats(apply_collision_phase(acs, kappa, t)).beta_c;
    const double expected = std::pow(std::abs(std::cos(2.0 * kappa * t)), 9);
    CHECK(std::abs(beta - expected) < 1e-10);
  }
}

TEST_CASE("max overlap recovers members of the family") {
  const double phi0 = 0.37;
  const int n_atoms = 35;
  const OverlapResult r = max_overlap(phase_state(phi0, n_atoms));
  CHECK(r.p_max == Approx(1.0).epsilon(1e-8));
  CHECK(r.argmax.theta() == Approx(kPi / 2).epsilon(1e-5));
  CHECK(std::remainder(r.argmax.chi() + 2.0 * phi0, 2.0 * kPi) ==
        Approx(0.0).epsilon(1e-5));
}

TEST_CASE("max overlap of the vacuum is 1") {
  const OverlapResult r = max_overlap(number_state(0, 0));
  CHECK(r.p_max == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("max overlap after one detection from |100,100>") {
  const TwoModeFockState s =
      normalized(apply_interference_jump(number_state(100, 100), 0.0));
  const OverlapResult r = max_overlap(s);
  // 2 C(200,100)/2^200, and the 2/sqrt(pi n) large-n estimate
  const double exact = 2.0 * std::exp(log_choose(200, 100) -
                                      200.0 * std::log(2.0));
  CHECK(r.p_max == Approx(exact).epsilon(1e-9));
  CHECK(std::abs(2.0 / std::sqrt(100.0 * kPi) - r.p_max) / r.p_max < 0.002);
  CHECK(r.argmax.theta() == Approx(kPi / 2).epsilon(1e-5));
}

TEST_CASE("overlap of |n,n> with the balanced pair is the central binomial") {
  const int n = 100;
  const double r = 1.0 / std::sqrt(2.0);
  const double p = overlap_with(number_state(n, n), ModePair(r, r));
  const double expected =
      std::exp(log_choose(2 * n, n) - 2.0 * n * std::log(2.0));
  CHECK(p == Approx(expected).epsilon(1e-10));
}

TEST_CASE("equal-position overlap profile matches the closed form") {
  // P(phi) = C(2n,n)/2^{2n} (1 + cos 2 phi) after one detection at 0
  const int n = 3;
  const TwoModeFockState s =
      normalized(apply_interference_jump(number_state(n, n), 0.0));
  const double pref = std::exp(log_choose(2 * n, n) - 2.0 * n * std::log(2.0));
  for (double phi : {0.0, 0.4, 1.0, kPi / 2}) {
    const double expected = pref * (1.0 + std::cos(2.0 * phi));
    const double r = 1.0 / std::sqrt(2.0);
    const ModePair pair(std::polar(r, phi), std::polar(r, -phi));
    CHECK(overlap_with(s, pair) == Approx(expected).epsilon(1e-11));
  }
}
