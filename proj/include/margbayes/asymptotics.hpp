#pragma once

// Integral and series representations of the worst-case risk difference
// and the scaled limits it obeys as N, m or n grow.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "margbayes/exact_risk.hpp"
#include "margbayes/quadrature.hpp"

namespace margbayes {

/// delta_star(N, m, ntilde) as the difference of two Laplace-type integrals,
///   int_0^inf (e^t-1)/t e^{-(N+1)t} e^{-ntilde t/p*} dt
///   - p* int_0^inf (e^t-1)/t e^{-(1+ntilde)t} (1-p*+p* e^{-t})^N dt,
/// with p* = 1/(1+m). error_bound is the summed quadrature error.
RiskReport delta_star_quadrature(std::int64_t N, std::int64_t m, double ntilde,
                                 const QuadratureSpec& spec = {});

/// H(p) from the series p^2 sum_k (1/k) E[(X+1+ntilde)^{-k}], stopping once a
/// term falls below tol times the partial sum. Throws NoConvergence after 1e4 terms.
double h_series(double p, std::int64_t N, double ntilde, double tol);

struct LimitPoint {
  double parameter = 0.0;
  double scaled_value = 0.0;
};

struct LimitReport {
  std::string parameter_name;
  std::vector<LimitPoint> points;
  /// NaN when the quantity has no known limit.
  double target = 0.0;
  double achieved_gap = 0.0;
};

/// (N+1)^2 delta_star(N, m, ntilde) over N_values; target (1 - (1+m))/2 = -m/2.
LimitReport sample_size_limit(std::int64_t m, double ntilde,
                              std::span<const std::int64_t> N_values);

/// (1+m) delta_star(N, m, ntilde) over m_values; target 1/ntilde - log(1 + 1/ntilde).
LimitReport row_count_limit(std::int64_t N, double ntilde,
                            std::span<const std::int64_t> m_values);

/// d/dn delta_star(N, m, .) by central differences in ntilde (dn = 2 dntilde).
/// Throws StepTooLarge unless 0 < step < ntilde - 1/2.
double column_derivative(std::int64_t N, std::int64_t m, double ntilde, double step = 1e-4);

/// n^3 column_derivative at ntilde = (1+n)/2 over n_values; no target.
LimitReport scaled_column_derivative(std::int64_t N, std::int64_t m,
                                     std::span<const std::int64_t> n_values,
                                     double step = 1e-4);

/// CSV with columns parameter,scaled_value,target,gap.
void write_csv(std::ostream& out, const LimitReport& report);

}  // namespace margbayes
