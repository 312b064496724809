#include "margbayes/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "margbayes/core_model.hpp"

namespace margbayes {

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureSpec& spec) {
  using GK15 = boost::math::quadrature::gauss_kronrod<double, 15>;
  QuadratureResult result;
  result.value = GK15::integrate(f, a, b, spec.max_depth, spec.rel_tol, &result.error);
  result.truncation = b;
  if (!(result.error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(result.value)))) {
    throw Error(ErrorKind::QuadratureFailure, "subdivision budget exhausted");
  }
  return result;
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double decay_rate, const QuadratureSpec& spec) {
  if (!(decay_rate > 0.0)) {
    throw Error(ErrorKind::QuadratureFailure, "integrand must decay exponentially");
  }
  const double cutoff = spec.abs_tol * 1e-3;
  double upper = 1.0;
  while (!(std::abs(f(upper)) < cutoff)) {
    upper *= 2.0;
    if (upper > 1e6) throw Error(ErrorKind::QuadratureFailure, "no truncation point found");
  }
  auto result = integrate_adaptive(f, 0.0, upper, spec);
  result.tail_bound = std::abs(f(upper)) / decay_rate;
  result.error += result.tail_bound;
  return result;
}

}  // namespace margbayes
