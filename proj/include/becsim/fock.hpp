#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace becsim {

using Complex = std::complex<double>;

/// Which condensate mode an annihilation acts on.
enum class Mode { a, b };

/// Pure state of two single-mode condensates sharing a fixed total atom
/// number M. Amplitudes are stored over the basis |m, M-m> where m is the
/// occupation of mode a, so the vector has exactly M+1 entries.
///
/// States are immutable values: every operation returns a new state.
class TwoModeFockState {
 public:
  /// Takes ownership of an amplitude vector; the total atom number is
  /// size-1. Rejects empty, non-finite and identically zero vectors.
  explicit TwoModeFockState(Eigen::VectorXcd amplitudes);

  int total_atoms() const { return static_cast<int>(amps_.size()) - 1; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }
  Complex amplitude(int m) const { return amps_(m); }

 private:
  Eigen::VectorXcd amps_;
};

/// |n1, n2>: all population in a single basis ket.
TwoModeFockState number_state(int n1, int n2);

/// Applies (a + b e^{i phi}) for a detection at angle phi. The returned
/// state is unnormalized and has one atom fewer. Throws std::domain_error
/// on the vacuum.
TwoModeFockState apply_interference_jump(const TwoModeFockState& state,
                                         double phi);

/// Applies the bare annihilator of one mode (an undetected loss). Throws
/// std::domain_error if the result has zero norm (empty mode).
TwoModeFockState apply_loss_jump(const TwoModeFockState& state, Mode mode);

/// <psi|a^dag b|psi>, not divided by <psi|psi>.
Complex expect_adag_b(const TwoModeFockState& state);

/// (<a^dag a>, <b^dag b>) normalized by the squared norm; sums to the
/// total atom number.
std::pair<double, double> mode_occupations(const TwoModeFockState& state);

/// Diagonal phase evolution under kappa * [(a^dag a)^2 + (b^dag b)^2] for a
/// time dt: multiplies c_m by exp(-i kappa dt (m^2 + (M-m)^2)).
TwoModeFockState apply_collision_phase(const TwoModeFockState& state,
                                       double kappa, double dt);

/// Sum of |c_m|^2.
double norm_sq(const TwoModeFockState& state);

/// Unit-norm copy. Throws std::domain_error on a zero-norm state.
TwoModeFockState normalized(const TwoModeFockState& state);

}  // namespace becsim
