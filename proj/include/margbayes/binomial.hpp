#pragma once

#include <cstdint>
#include <vector>

namespace margbayes {

/// Probability mass function of Bin(trials, p) at 0..trials.
///
/// Log-weights come from lgamma and log1p; the vector is then normalised by
/// its compensated sum, which removes the shared rounding of lgamma(trials+1).
/// p = 0 and p = 1 give the degenerate point masses exactly.
std::vector<double> binomial_pmf(std::int64_t trials, double p);

/// E[f(X)] for X ~ Bin(trials, p), summed in index order.
template <typename F>
double binomial_expectation(std::int64_t trials, double p, F&& f) {
  const auto pmf = binomial_pmf(trials, p);
  double sum = 0.0;
  double comp = 0.0;
  for (std::int64_t x = 0; x <= trials; ++x) {
    const double w = pmf[static_cast<std::size_t>(x)];
    if (w == 0.0) continue;
    const double y = w * f(x) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace margbayes
