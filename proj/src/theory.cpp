#include "becsim/theory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "becsim/fock.hpp"
#include "becsim/math.hpp"

namespace becsim::theory {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

double mean_beta_after_1(long n1, long n2) {
  require(n1 >= 0 && n2 >= 0 && n1 + n2 >= 2, "beta1: need n1+n2 >= 2");
  const double nsum = double(n1 + n2);
  return 2.0 * double(n1) * double(n2) / (nsum * nsum - nsum);
}

double mean_beta_after_2(long n1, long n2) {
  require(n1 + n2 >= 3, "beta2: need n1+n2 >= 3");
  return (4.0 / kPi) * mean_beta_after_1(n1, n2);
}

double beta_equalpos_approx(double k) {
  require(k >= 1.0, "beta_equalpos: need k >= 1");
  return std::exp(-1.0 / k);
}

double beta_unequal_approx(long n1, long n2, double k) {
  require(n1 >= 0 && n2 >= 0 && n1 + n2 >= 1, "beta_unequal: empty system");
  require(k >= 1.0, "beta_unequal: need k >= 1");
  return 2.0 * std::sqrt(double(n1) * double(n2)) / double(n1 + n2) *
         std::exp(-1.0 / k);
}

double pphi_approx(long n, double k, double phi) {
  require(n >= 1 && k >= 1.0 && k <= 2.0 * double(n),
          "pphi: need 1 <= k <= 2n");
  const double dn = double(n);
  const double amp = 0.5 * std::sqrt(k * (4.0 * dn - k)) / dn;
  return amp * std::exp(-0.5 * phi * phi * k * (2.0 * dn - k) / dn);
}

double pphi_approx_max(long n, double k) { return pphi_approx(n, k, 0.0); }

double beta_imperfect(double k, double eta) {
  require(eta > 0.0 && eta <= 1.0, "beta_imperfect: need 0 < eta <= 1");
  require(k >= 1.0, "beta_imperfect: need k >= 1");
  // e^{-1/(eta k)}; eta k may fall below 1, so this cannot delegate to
  // beta_equalpos_approx and its domain guard
  return std::exp(-1.0 / (eta * k));
}

double pphi_imperfect(long n, double k, double eta, double phi) {
  require(eta > 0.0 && eta <= 1.0, "pphi_imperfect: need 0 < eta <= 1");
  require(n >= 1 && k >= 1.0 && k <= 2.0 * double(n),
          "pphi_imperfect: need 1 <= k <= 2n");
  const double dn = double(n);
  const double denom = 2.0 * dn - k + eta * k;
  const double arg = 1.0 - eta * k / denom;
  const double amp = std::sqrt(std::max(0.0, 1.0 - arg * arg));
  return amp * std::exp(-phi * phi * eta * k * (2.0 * dn - k) / denom);
}

double mean_remaining(long n_total, double gamma, double t) {
  require(t >= 0.0, "mean_remaining: need t >= 0");
  return double(n_total) * std::exp(-2.0 * gamma * t);
}

double mean_detected(long n_total, double gamma, double t) {
  require(t >= 0.0, "mean_detected: need t >= 0");
  return double(n_total) * (-std::expm1(-2.0 * gamma * t));
}

double beta_collision_acs(long n_atoms, double kappa, double t) {
  require(n_atoms >= 1, "beta_collision_acs: need N >= 1");
  const double c = std::abs(std::cos(2.0 * kappa * t));
  if (n_atoms == 1) return 1.0;
  return std::pow(c, double(n_atoms - 1));
}

double beta_collision_psik(long n, double k, double kappa, double t) {
  require(n >= 1 && k >= 1.0 && k <= 2.0 * double(n) - 1.0,
          "beta_collision_psik: need 1 <= k <= 2n-1");
  const double dn = double(n);
  const double width = k * (2.0 * dn - k - 1.0) / (4.0 * dn - k - 2.0);
  return std::exp(-1.0 / k) *
         std::exp(-2.0 * kappa * kappa * t * t * width);
}

double beta_steady(long n, double k, double gamma, double kappa) {
  require(kappa > 0.0, "beta_steady: need kappa > 0");
  require(gamma > 0.0, "beta_steady: need gamma > 0");
  require(n >= 1 && k >= 1.0 && k <= 2.0 * double(n) - 1.0,
          "beta_steady: need 1 <= k <= 2n-1");
  const double dn = double(n);
  const double n0 = 2.0 * dn - k;
  const double inv_tau =
      kappa * std::sqrt(2.0 * k * (2.0 * dn - k - 1.0) / (4.0 * dn - k - 2.0));
  const double s = n0 * gamma / inv_tau;
  const double decayed = std::sqrt(kPi) * s * erfcx(s);
  return 1.0 / (1.0 + std::sqrt(std::max(0.0, 1.0 - decayed)));
}

double max_overlap_decay(long n, double k, double kappa, double t) {
  require(n >= 1 && k >= 1.0 && k <= 2.0 * double(n),
          "max_overlap_decay: need 1 <= k <= 2n");
  const double dn = double(n);
  const double rate = t * kappa * k * (2.0 * dn - k) / (2.0 * dn);
  return pphi_approx_max(n, k) / std::sqrt(1.0 + rate * rate);
}

double oracle_beta_equalpos(long n, long k) {
  require(n >= 1 && n <= 500, "oracle_beta_equalpos: need 1 <= n <= 500");
  require(k >= 1 && k <= 2 * n, "oracle_beta_equalpos: need 1 <= k <= 2n");
  if (k == 2 * n) {
    throw std::domain_error(
        "oracle_beta_equalpos: no atoms remain, visibility undefined");
  }
  const double dn = double(n);
  const double dk = double(k);
  std::vector<double> log_norm_terms;
  log_norm_terms.reserve(k + 1);
  for (long m = 0; m <= k; ++m) {
    log_norm_terms.push_back(2.0 * log_choose(dk, double(m)) +
                             log_choose(2.0 * dn - dk, dn - double(m)));
  }
  std::vector<double> log_ab_terms;
  log_ab_terms.reserve(k);
  for (long m = 0; m + 1 <= k; ++m) {
    log_ab_terms.push_back(log_choose(dk, double(m)) +
                           log_choose(dk, double(m + 1)) +
                           log_choose(2.0 * dn - dk - 1.0,
                                      dn - double(m) - 1.0));
  }
  return 2.0 * std::exp(log_sum_exp(log_ab_terms) -
                        log_sum_exp(log_norm_terms));
}

double oracle_mean_beta_quadrature(long n1, long n2, int k,
                                   int points_per_axis) {
  require(k == 1 || k == 2, "quadrature oracle: only k in {1, 2}");
  require(n1 >= 0 && n2 >= 0 && n1 + n2 <= 400,
          "quadrature oracle: need n1+n2 <= 400");
  require(n1 + n2 >= k + 1, "quadrature oracle: too few atoms");
  require(points_per_axis >= 512, "quadrature oracle: need >= 512 nodes");

  const long n_total = n1 + n2;
  const int pts = points_per_axis;
  const double h = 2.0 * kPi / pts;

  // log of 2/(2pi)^k / (N (N-1) ... (N-k))
  double log_pref = std::log(2.0) - double(k) * std::log(2.0 * kPi);
  for (int j = 0; j <= k; ++j) {
    log_pref -= std::log(double(n_total - j));
  }

  // Composite trapezoid nodes over [-pi, pi]; the integrand is 2pi-periodic
  // so the half-weight endpoints coincide.
  std::vector<double> node(pts + 1);
  std::vector<double> weight(pts + 1, h);
  for (int j = 0; j <= pts; ++j) node[j] = -kPi + h * j;
  weight.front() = 0.5 * h;
  weight.back() = 0.5 * h;

  const TwoModeFockState initial = number_state(int(n1), int(n2));
  double total = 0.0;
  for (int j1 = 0; j1 <= pts; ++j1) {
    const TwoModeFockState raw1 = apply_interference_jump(initial, node[j1]);
    const double log_r1 = 0.5 * std::log(norm_sq(raw1));
    if (k == 1) {
      const double ab = std::abs(expect_adag_b(raw1));
      if (ab > 0.0) {
        total += weight[j1] * std::exp(log_pref + std::log(ab));
      }
      continue;
    }
    const TwoModeFockState state1 = normalized(raw1);
    for (int j2 = 0; j2 <= pts; ++j2) {
      const TwoModeFockState raw2 = apply_interference_jump(state1, node[j2]);
      const double ab = std::abs(expect_adag_b(raw2));
      if (ab > 0.0) {
        total += weight[j1] * weight[j2] *
                 std::exp(log_pref + 2.0 * log_r1 + std::log(ab));
      }
    }
  }
  return total;
}

}  // namespace becsim::theory
