#include "becsim/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace becsim {

namespace {

constexpr double kZeroNormTol = 0.0;  // exact zero only; callers renormalize

}  // namespace

TwoModeFockState::TwoModeFockState(Eigen::VectorXcd amplitudes)
    : amps_(std::move(amplitudes)) {
  if (amps_.size() < 1) {
    throw std::invalid_argument("fock: amplitude vector must be non-empty");
  }
  if (!amps_.allFinite()) {
    throw std::invalid_argument("fock: amplitudes must be finite");
  }
  if (amps_.squaredNorm() <= kZeroNormTol) {
    throw std::domain_error("fock: zero-norm state");
  }
}

TwoModeFockState number_state(int n1, int n2) {
  if (n1 < 0 || n2 < 0) {
    throw std::invalid_argument("fock: negative occupation");
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(n1 + n2 + 1);
  amps(n1) = 1.0;
  return TwoModeFockState(std::move(amps));
}

TwoModeFockState apply_interference_jump(const TwoModeFockState& state,
                                         double phi) {
  const int m_total = state.total_atoms();
  if (m_total < 1) {
    throw std::domain_error("fock: no atoms left to detect");
  }
  const Eigen::VectorXcd& c = state.amplitudes();
  const Complex phase = std::polar(1.0, phi);
  Eigen::VectorXcd d(m_total);
  for (int m = 0; m < m_total; ++m) {
    d(m) = std::sqrt(double(m + 1)) * c(m + 1) +
           phase * std::sqrt(double(m_total - m)) * c(m);
  }
  return TwoModeFockState(std::move(d));
}

TwoModeFockState apply_loss_jump(const TwoModeFockState& state, Mode mode) {
  const int m_total = state.total_atoms();
  if (m_total < 1) {
    throw std::domain_error("fock: no atoms left to lose");
  }
  const Eigen::VectorXcd& c = state.amplitudes();
  Eigen::VectorXcd d(m_total);
  if (mode == Mode::a) {
    for (int m = 0; m < m_total; ++m) {
      d(m) = std::sqrt(double(m + 1)) * c(m + 1);
    }
  } else {
    for (int m = 0; m < m_total; ++m) {
      d(m) = std::sqrt(double(m_total - m)) * c(m);
    }
  }
  if (d.squaredNorm() <= 0.0) {
    throw std::domain_error("fock: loss from an empty mode");
  }
  return TwoModeFockState(std::move(d));
}

Complex expect_adag_b(const TwoModeFockState& state) {
  const int m_total = state.total_atoms();
  const Eigen::VectorXcd& c = state.amplitudes();
  Complex acc = 0.0;
  for (int m = 0; m + 1 <= m_total; ++m) {
    acc += std::conj(c(m + 1)) * c(m) *
           std::sqrt(double(m + 1) * double(m_total - m));
  }
  return acc;
}

std::pair<double, double> mode_occupations(const TwoModeFockState& state) {
  const int m_total = state.total_atoms();
  const Eigen::ArrayXd p = state.amplitudes().array().abs2();
  const double total = p.sum();
  double na = 0.0;
  for (int m = 1; m <= m_total; ++m) {
    na += double(m) * p(m);
  }
  na /= total;
  const double nb = double(m_total) - na;
  return {na, nb};
}

TwoModeFockState apply_collision_phase(const TwoModeFockState& state,
                                       double kappa, double dt) {
  if (dt < 0.0) {
    throw std::invalid_argument("fock: negative evolution time");
  }
  const int m_total = state.total_atoms();
  Eigen::VectorXcd d = state.amplitudes();
  for (int m = 0; m <= m_total; ++m) {
    const double na = double(m);
    const double nb = double(m_total - m);
    d(m) *= std::polar(1.0, -kappa * dt * (na * na + nb * nb));
  }
  return TwoModeFockState(std::move(d));
}

double norm_sq(const TwoModeFockState& state) {
  return state.amplitudes().squaredNorm();
}

TwoModeFockState normalized(const TwoModeFockState& state) {
  const double n2 = norm_sq(state);
  if (n2 <= 0.0) {
    throw std::domain_error("fock: cannot normalize a zero state");
  }
  return TwoModeFockState(state.amplitudes() / std::sqrt(n2));
}

}  // namespace becsim
