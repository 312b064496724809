#pragma once

#include <cstddef>
#include <functional>

namespace margbayes {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  /// Bisection depth limit, so at most 2^max_depth subintervals.
  unsigned max_depth = 15;
};

struct QuadratureResult {
  double value = 0.0;
  /// Kronrod error estimate plus the bound on the discarded tail.
  double error = 0.0;
  /// Upper integration limit actually used.
  double truncation = 0.0;
  double tail_bound = 0.0;
};

/// Adaptive 7/15-point Gauss-Kronrod on [a, b] (Boost.Math). Throws
/// QuadratureFailure if the tolerance is not reached within max_depth.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureSpec& spec);

/// Integral of f over [0, inf) for an integrand that is positive and, beyond
/// t = 1, bounded by f(T) exp(-decay_rate (t - T)) for every T <= t.
/// The upper limit T doubles until f(T) < abs_tol * 1e-3; the tail is bounded by
/// f(T) / decay_rate and added to the reported error.
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f,
                                         double decay_rate, const QuadratureSpec& spec);

}  // namespace margbayes
