#include "becsim/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "becsim/math.hpp"

namespace becsim {

namespace {

constexpr double kPi = std::numbers::pi;

// Amplitudes of |mu,nu>_N with the phase of each coefficient supplied by
// the caller: |c_n| = exp(0.5 log C(N,n) + n log|mu| + (N-n) log|nu|).
Eigen::VectorXcd acs_amplitudes(double abs_mu, double arg_mu, double abs_nu,
                                double arg_nu, int n_atoms) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n_atoms + 1);
  if (abs_mu == 0.0 && abs_nu == 0.0) {
    throw std::invalid_argument("coherent: mu and nu both zero");
  }
  if (abs_mu == 0.0) {
    c(0) = std::polar(1.0, double(n_atoms) * arg_nu) *
           std::pow(abs_nu, n_atoms);
    return c;
  }
  if (abs_nu == 0.0) {
    c(n_atoms) = std::polar(1.0, double(n_atoms) * arg_mu) *
                 std::pow(abs_mu, n_atoms);
    return c;
  }
  const double lmu = std::log(abs_mu);
  const double lnu = std::log(abs_nu);
  for (int n = 0; n <= n_atoms; ++n) {
    const double lmag = 0.5 * log_choose(n_atoms, n) + double(n) * lmu +
                        double(n_atoms - n) * lnu;
    const double phase = double(n) * arg_mu + double(n_atoms - n) * arg_nu;
    c(n) = std::polar(std::exp(lmag), phase);
  }
  return c;
}

// P(theta, chi) for a fixed state, with the heavy lifting hoisted out:
// conj(c_n) * sqrt(C(N,n)) is precomputed once.
class OverlapChart {
 public:
  explicit OverlapChart(const TwoModeFockState& state)
      : n_atoms_(state.total_atoms()),
        weights_(n_atoms_ + 1),
        inv_norm_(1.0 / norm_sq(state)) {
    const Eigen::VectorXcd& c = state.amplitudes();
    for (int n = 0; n <= n_atoms_; ++n) {
      weights_(n) = std::conj(c(n)) * std::exp(0.5 * log_choose(n_atoms_, n));
    }
  }

  int n_atoms() const { return n_atoms_; }

  // Coefficients g_f (f = N - n) such that <psi|mu,nu> = sum_f g_f e^{i chi f}
  // at fixed theta.
  Eigen::VectorXcd row_coefficients(double theta) const {
    const double cmu = std::cos(0.5 * theta);
    const double smu = std::sin(0.5 * theta);
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(n_atoms_ + 1);
    if (cmu <= 0.0) {
      g(n_atoms_) = weights_(0) * std::pow(smu, n_atoms_);
      return g;
    }
    if (smu <= 0.0) {
      g(0) = weights_(n_atoms_) * std::pow(cmu, n_atoms_);
      return g;
    }
    const double lc = std::log(cmu);
    const double ls = std::log(smu);
    for (int n = 0; n <= n_atoms_; ++n) {
      g(n_atoms_ - n) = weights_(n) *
                        std::exp(double(n) * lc + double(n_atoms_ - n) * ls);
    }
    return g;
  }

  double value(double theta, double chi) const {
    const Eigen::VectorXcd g = row_coefficients(theta);
    Complex s = 0.0;
    for (int f = 0; f <= n_atoms_; ++f) {
      s += g(f) * std::polar(1.0, chi * double(f));
    }
    return std::norm(s) * inv_norm_;
  }

  double inv_norm() const { return inv_norm_; }

 private:
  int n_atoms_;
  Eigen::VectorXcd weights_;
  double inv_norm_;
};

// Golden-section maximization on [lo, hi]; returns the best abscissa and
// updates (best_x, best_p) with every evaluation so the final answer can
// never fall below the starting point.
template <typename F>
void golden_refine(F&& f, double lo, double hi, double tol, double& best_x,
                   double& best_p) {
  constexpr double kInvPhi = 0.6180339887498949;
  auto consider = [&](double x, double p) {
    if (p > best_p) {
      best_p = p;
      best_x = x;
    }
  };
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  consider(x1, f1);
  consider(x2, f2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = f(x2);
      consider(x2, f2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = f(x1);
      consider(x1, f1);
    }
  }
}

}  // namespace

ModePair::ModePair(Complex mu_in, Complex nu_in) : mu(mu_in), nu(nu_in) {
  const double scale = std::sqrt(std::norm(mu) + std::norm(nu));
  if (scale <= 0.0 || !std::isfinite(scale)) {
    throw std::invalid_argument("coherent: (mu, nu) must be nonzero");
  }
  mu /= scale;
  nu /= scale;
  if (std::abs(mu) > 0.0) {
    const Complex gauge = std::polar(1.0, -std::arg(mu));
    mu = std::abs(mu);
    nu *= gauge;
  } else {
    mu = 0.0;
    nu = std::abs(nu);
  }
}

ModePair ModePair::from_angles(double theta, double chi) {
  return ModePair(std::cos(0.5 * theta),
                  std::polar(std::sin(0.5 * theta), chi));
}

double ModePair::theta() const {
  const double m = std::clamp(mu.real(), 0.0, 1.0);
  return 2.0 * std::acos(m);
}

double ModePair::chi() const {
  if (std::abs(nu) == 0.0) return 0.0;
  double c = std::arg(nu);
  if (c >= kPi) c -= 2.0 * kPi;  // fold to [-pi, pi)
  return c;
}

TwoModeFockState atomic_coherent_state(const ModePair& pair, int n_atoms) {
  if (n_atoms < 0) {
    throw std::invalid_argument("coherent: negative atom number");
  }
  return TwoModeFockState(acs_amplitudes(std::abs(pair.mu), std::arg(pair.mu),
                                         std::abs(pair.nu), std::arg(pair.nu),
                                         n_atoms));
}

TwoModeFockState phase_state(double phi, int n_atoms) {
  if (n_atoms < 0) {
    throw std::invalid_argument("coherent: negative atom number");
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return TwoModeFockState(
      acs_amplitudes(inv_sqrt2, phi, inv_sqrt2, -phi, n_atoms));
}

Complex overlap_kernel(const ModePair& pair, const ModePair& other,
                       int n_atoms) {
  if (n_atoms < 0) {
    throw std::invalid_argument("coherent: negative atom number");
  }
  const Complex z =
      pair.mu * std::conj(other.mu) + pair.nu * std::conj(other.nu);
  const double mag = std::abs(z);
  if (n_atoms == 0) return 1.0;
  if (mag == 0.0) return 0.0;
  return std::polar(std::exp(double(n_atoms) * std::log(mag)),
                    double(n_atoms) * std::arg(z));
}

double overlap_with(const TwoModeFockState& state, const ModePair& pair) {
  const TwoModeFockState acs = atomic_coherent_state(pair, state.total_atoms());
  const Complex inner = state.amplitudes().dot(acs.amplitudes());
  return std::norm(inner) / norm_sq(state);
}

OverlapResult max_overlap(const TwoModeFockState& state) {
  const OverlapChart chart(state);
  const int n_atoms = chart.n_atoms();

  constexpr int kThetaSteps = 180;  // 181 nodes over [0, pi]
  constexpr int kChiSteps = 360;    // 361 nodes over [-pi, pi]; the chi = pi
                                    // column duplicates chi = -pi
  const double dtheta = kPi / kThetaSteps;
  const double dchi = 2.0 * kPi / kChiSteps;

  // At fixed theta the chi sweep is a degree-N trig polynomial,
  //   <psi|mu,nu> = sum_f g_f e^{i chi_j f},  chi_j = -pi + j dchi,
  // which is a length-360 DFT of the folded coefficients (-1)^f g_f.
  Eigen::FFT<double> fft;
  std::vector<Complex> folded(kChiSteps), swept(kChiSteps);

  double best_theta = 0.0;
  double best_chi = -kPi;
  double best_p = -1.0;
  for (int i = 0; i <= kThetaSteps; ++i) {
    const Eigen::VectorXcd g = chart.row_coefficients(dtheta * i);
    std::fill(folded.begin(), folded.end(), Complex(0.0, 0.0));
    for (int f = 0; f <= n_atoms; ++f) {
      const Complex signed_g = (f % 2 == 0) ? g(f) : -g(f);
      folded[f % kChiSteps] += std::conj(signed_g);
    }
    // fwd computes sum_f x_f e^{-2pi i jf/L}; conjugating twice flips the sign
    fft.fwd(swept, folded);
    for (int j = 0; j < kChiSteps; ++j) {
      const double p = std::norm(swept[j]) * chart.inv_norm();
      if (p > best_p) {
        best_p = p;
        best_theta = dtheta * i;
        best_chi = -kPi + dchi * j;
      }
    }
  }

  // Coordinate-wise golden-section refinement. P is smooth, so alternating
  // 1-D passes inside the winning grid cell converge; stop once both
  // coordinates settle below the 1e-6 rad chart step.
  constexpr double kTol = 1e-7;
  for (int round = 0; round < 12; ++round) {
    const double prev_theta = best_theta;
    const double prev_chi = best_chi;
    golden_refine(
        [&](double th) { return chart.value(th, best_chi); },
        std::max(0.0, best_theta - dtheta), std::min(kPi, best_theta + dtheta),
        kTol, best_theta, best_p);
    golden_refine([&](double ch) { return chart.value(best_theta, ch); },
                  best_chi - dchi, best_chi + dchi, kTol, best_chi, best_p);
    if (std::abs(best_theta - prev_theta) < 1e-8 &&
        std::abs(best_chi - prev_chi) < 1e-8) {
      break;
    }
  }

  OverlapResult result;
  result.argmax = ModePair::from_angles(best_theta, best_chi);
  // re-evaluation through the public path differs from best_p only at the
  // last ulp; keep whichever is larger
  result.p_max = std::max(best_p, overlap_with(state, result.argmax));
  result.grid_resolution_used = (kThetaSteps + 1) * (kChiSteps + 1);
  return result;
}

}  // namespace becsim
