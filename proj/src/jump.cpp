#include "becsim/jump.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace becsim {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kFlatThreshold = 1e-14;
}  // namespace

FringeStats fringe_stats(const TwoModeFockState& state) {
  const int m_total = state.total_atoms();
  if (m_total < 1) {
    throw std::domain_error("jump: no next detection exists for the vacuum");
  }
  const Complex ab = expect_adag_b(state);
  double beta = 2.0 * std::abs(ab) / (double(m_total) * norm_sq(state));
  if (beta > 1.0) {
    if (beta > 1.0 + 1e-12) {
      throw std::logic_error("jump: visibility exceeds 1 beyond tolerance");
    }
    beta = 1.0;
  }
  FringeStats fs;
  fs.beta_c = beta;
  fs.theta = beta < kFlatThreshold ? 0.0 : -std::arg(ab);
  return fs;
}

double detection_density(const FringeStats& fringe, double phi) {
  return (1.0 + fringe.beta_c * std::cos(phi - fringe.theta)) / (2.0 * kPi);
}

double detection_density(const TwoModeFockState& state, double phi) {
  return detection_density(fringe_stats(state), phi);
}

double sample_position(const FringeStats& fringe, Rng& rng) {
  const double envelope = 1.0 + fringe.beta_c;
  for (;;) {
    const double phi = -kPi + 2.0 * kPi * uniform_double(rng);
    const double accept = 1.0 + fringe.beta_c * std::cos(phi - fringe.theta);
    if (uniform_double(rng) * envelope <= accept) {
      return phi;
    }
  }
}

double sample_position(const TwoModeFockState& state, Rng& rng) {
  return sample_position(fringe_stats(state), rng);
}

}  // namespace becsim
