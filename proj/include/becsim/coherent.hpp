#pragma once

#include "becsim/fock.hpp"

namespace becsim {

/// A point (mu, nu) on the two-mode sphere, |mu|^2 + |nu|^2 = 1, labeling
/// the coherent superposition (a^dag mu + b^dag nu)^N |0,0> / sqrt(N!).
///
/// The constructor normalizes and removes the unphysical global phase so
/// that mu is real and >= 0. The remaining chart is the polar angle
/// theta in [0, pi] and relative phase chi in [-pi, pi):
///   mu = cos(theta/2),  nu = sin(theta/2) e^{i chi}.
struct ModePair {
  Complex mu;
  Complex nu;

  ModePair(Complex mu_in, Complex nu_in);
  static ModePair from_angles(double theta, double chi);

  double theta() const;
  double chi() const;
};

/// Expands |mu,nu>_N over the number basis: c_n = sqrt(C(N,n)) mu^n
/// nu^{N-n}, built in log-magnitude/phase form so that N up to a few
/// hundred stays representable.
TwoModeFockState atomic_coherent_state(const ModePair& pair, int n_atoms);

/// |phi>_N, the coherent state with mu = e^{i phi}/sqrt(2),
/// nu = e^{-i phi}/sqrt(2). Amplitudes keep the explicit relative phases
/// e^{i phi (2n - N)} rather than the gauged form.
TwoModeFockState phase_state(double phi, int n_atoms);

/// Scalar product <mu',nu'|mu,nu>_N = (mu mu'* + nu nu'*)^N, evaluated in
/// log/arg form.
Complex overlap_kernel(const ModePair& pair, const ModePair& other,
                       int n_atoms);

/// Normalized squared overlap |<psi|mu,nu>_N|^2 / <psi|psi> with
/// N = state.total_atoms(). A real number in [0, 1].
double overlap_with(const TwoModeFockState& state, const ModePair& pair);

struct OverlapResult {
  double p_max = 0.0;
  ModePair argmax{1.0, 0.0};
  int grid_resolution_used = 0;  // number of coarse-grid points scanned
};

/// Maximum of overlap_with over the whole (theta, chi) chart: a 181 x 361
/// coarse scan (1 degree steps) followed by coordinate-wise golden-section
/// refinement until the chart step is below 1e-6 rad. Deterministic; grid
/// ties resolve to the lowest theta, then the lowest chi.
OverlapResult max_overlap(const TwoModeFockState& state);

}  // namespace becsim
