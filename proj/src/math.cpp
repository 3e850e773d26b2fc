#include "becsim/math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace becsim {

double log_choose(double n, double k) {
  if (k < 0.0 || k > n) {
    return -std::numeric_limits<double>::infinity();
  }
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double log_sum_exp(std::span<const double> terms) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double t : terms) mx = std::max(mx, t);
  if (!std::isfinite(mx)) return mx;
  double acc = 0.0;
  for (double t : terms) {
    if (std::isfinite(t)) acc += std::exp(t - mx);
  }
  return mx + std::log(acc);
}

double erfcx(double x) {
  if (x < 0.0) {
    throw std::invalid_argument("erfcx: negative argument not supported");
  }
  if (x <= 5.0) {
    // exp(25) ~ 7e10 and erfc(5) ~ 1.5e-12: both representable.
    return std::exp(x * x) * std::erfc(x);
  }
  // Laplace continued fraction, evaluated bottom-up. 40 levels is far more
  // than needed for x > 5 (the tail converges like (m/2x^2)^m).
  double cf = 0.0;
  for (int m = 40; m >= 1; --m) {
    cf = (0.5 * m) / (x + cf);
  }
  return 1.0 / (std::sqrt(std::numbers::pi) * (x + cf));
}

}  // namespace becsim
