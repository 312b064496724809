#include "margbayes/binomial.hpp"

#include <algorithm>
#include <cmath>

#include "margbayes/core_model.hpp"

namespace margbayes {

std::vector<double> binomial_pmf(std::int64_t trials, double p) {
  if (trials < 0) throw Error(ErrorKind::DomainError, "binomial trials must be >= 0");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::DomainError, "binomial p outside [0,1]");
  const auto size = static_cast<std::size_t>(trials + 1);
  std::vector<double> pmf(size, 0.0);
  if (p == 0.0) {
    pmf.front() = 1.0;
    return pmf;
  }
  if (p == 1.0) {
    pmf.back() = 1.0;
    return pmf;
  }

  const double n = static_cast<double>(trials);
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double log_n_fact = std::lgamma(n + 1.0);
  std::vector<double> logw(size);
  double peak = -INFINITY;
  for (std::size_t x = 0; x < size; ++x) {
    const double k = static_cast<double>(x);
    logw[x] = log_n_fact - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * log_p +
              (n - k) * log_q;
    peak = std::max(peak, logw[x]);
  }

  double sum = 0.0;
  double comp = 0.0;
  for (std::size_t x = 0; x < size; ++x) {
    pmf[x] = std::exp(logw[x] - peak);
    const double y = pmf[x] - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  for (double& w : pmf) w /= sum;
  return pmf;
}

}  // namespace margbayes
