#pragma once

#include <span>

namespace becsim {

/// log of the binomial coefficient C(n, k); -inf outside 0 <= k <= n.
double log_choose(double n, double k);

/// log(sum(exp(terms))) with the usual max-shift; -inf terms are skipped.
double log_sum_exp(std::span<const double> terms);

/// Scaled complementary error function exp(x^2) * erfc(x) for x >= 0.
/// Uses exp(x^2)*std::erfc(x) up to x = 5 and the Laplace continued
/// fraction beyond, where the unscaled product would overflow/underflow.
double erfcx(double x);

}  // namespace becsim
