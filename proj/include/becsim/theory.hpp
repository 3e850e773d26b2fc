#pragma once

namespace becsim::theory {

/// Mean conditional visibility after the first detection,
/// 2 n1 n2 / ((n1+n2)^2 - (n1+n2)). Requires n1 + n2 >= 2.
double mean_beta_after_1(long n1, long n2);

/// Mean conditional visibility after the second detection, (4/pi) times
/// the first. Requires n1 + n2 >= 3.
double mean_beta_after_2(long n1, long n2);

/// Equal-occupation, equal-position approximation e^{-1/k}. Non-integer k
/// is accepted (time-averaged and efficiency-substituted uses).
double beta_equalpos_approx(double k);

/// Unequal-occupation version (2 sqrt(n1 n2)/(n1+n2)) e^{-1/k}.
double beta_unequal_approx(long n1, long n2, double k);

/// Gaussian approximation to the phase-state overlap profile,
/// (1/2) sqrt(k(4n-k)/n^2) exp(-(phi^2/2) k(2n-k)/n), for 1 <= k <= 2n.
double pphi_approx(long n, double k, double phi);

/// Its maximum, sqrt(k(4n-k))/(2n).
double pphi_approx_max(long n, double k);

/// Imperfect-detector visibility e^{-1/(eta k)} with k counting all atoms
/// lost; requires 0 < eta <= 1.
double beta_imperfect(double k, double eta);

/// Imperfect-detector overlap profile,
/// sqrt(1 - (1 - eta k/(2n-k+eta k))^2) exp(-phi^2 eta k(2n-k)/(2n-k+eta k)).
double pphi_imperfect(long n, double k, double eta, double phi);

/// Mean atoms remaining / detected at time t under the 2*gamma intensity
/// decay: N e^{-2 gamma t} and N (1 - e^{-2 gamma t}).
double mean_remaining(long n_total, double gamma, double t);
double mean_detected(long n_total, double gamma, double t);

/// Collisional dephasing of an equal-weight coherent state:
/// |cos(2 kappa t)|^{N-1} (exact, revives at multiples of pi/(2 kappa)).
double beta_collision_acs(long n_atoms, double kappa, double t);

/// Collisional dephasing of the k-fold equal-position state:
/// e^{-1/k} exp(-2 kappa^2 t^2 k(2n-k-1)/(4n-k-2)).
double beta_collision_psik(long n, double k, double kappa, double t);

/// Steady-state visibility balancing detection gain against collisional
/// decay: with n0 = 2n-k, tau the Gaussian decay time of
/// beta_collision_psik and s = n0 gamma tau, the averaged decay factor is
/// F = sqrt(pi) s erfcx(s) and beta_st = 1 / (1 + sqrt(1 - F)).
double beta_steady(long n, double k, double gamma, double kappa);

/// Collisional decay of the maximum coherent-state overlap:
/// pphi_approx_max / sqrt(1 + [t kappa k (2n-k)/(2n)]^2).
double max_overlap_decay(long n, double k, double kappa, double t);

/// Exact visibility of the k-fold equal-position state from the closed
/// binomial sums, evaluated in log space (n <= 500, 1 <= k <= 2n-1):
///   beta = 2 S_ab / S_norm,
///   S_norm = sum_m C(k,m)^2 C(2n-k, n-m),
///   S_ab   = sum_m C(k,m) C(k,m+1) C(2n-k-1, n-m-1).
double oracle_beta_equalpos(long n, long k);

/// Mean visibility after k in {1, 2} detections by direct quadrature of
/// the k-dimensional position integral with exact state-vector inner
/// products (composite trapezoid, points_per_axis >= 512 nodes per axis).
/// Requires n1 + n2 <= 400 and n1 + n2 >= k + 1.
double oracle_mean_beta_quadrature(long n1, long n2, int k,
                                   int points_per_axis = 512);

}  // namespace becsim::theory
