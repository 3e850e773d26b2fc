#pragma once

#include "becsim/fock.hpp"
#include "becsim/rng.hpp"

namespace becsim {

/// Fringe of the next-detection probability density
///   P(phi) = (1/2pi) [1 + beta_c cos(phi - theta)].
/// beta_c is the conditional visibility 2|<a^dag b>| / (M <psi|psi>);
/// theta is the most likely detection angle, -arg<a^dag b>. theta is
/// reported as 0 whenever beta_c < 1e-14.
struct FringeStats {
  double beta_c = 0.0;
  double theta = 0.0;
};

/// Throws std::domain_error on the vacuum (no next detection exists) and
/// std::logic_error if beta_c exceeds 1 by more than 1e-12 (an internal
/// consistency failure); excursions below that are clamped.
FringeStats fringe_stats(const TwoModeFockState& state);

double detection_density(const FringeStats& fringe, double phi);
double detection_density(const TwoModeFockState& state, double phi);

/// Draws a detection angle from P(phi) by rejection against the flat
/// envelope: propose uniform on [-pi, pi), accept with probability
/// (1 + beta cos(phi - theta)) / (1 + beta). At most 2 proposals expected.
double sample_position(const FringeStats& fringe, Rng& rng);
double sample_position(const TwoModeFockState& state, Rng& rng);

}  // namespace becsim
