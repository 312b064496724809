#pragma once

// Simulation-free risks and risk differences for the two Bayes estimators.
//
// Every expectation here reduces to finite binomial sums: the estimators
// factor into per-cell and per-row terms, so E[L] only needs the marginal
// laws X_ij ~ Bin(N, p_ij), X_i ~ Bin(N, p_i) and Y_i ~ Bin(N', p_i).

#include <cstdint>
#include <string>
#include <vector>

#include "margbayes/core_model.hpp"

namespace margbayes {

enum class RiskMethod { ExactMarginal, ClosedForm, Decomposition, Quadrature, MonteCarlo };
enum class RiskTarget { RiskDirect, RiskCombined, Delta };

const char* to_string(RiskMethod method);
const char* to_string(RiskTarget target);
RiskMethod parse_risk_method(const std::string& s);
RiskTarget parse_risk_target(const std::string& s);

/// A risk (or risk difference, in nats) with how it was obtained.
struct RiskReport {
  double value = 0.0;
  RiskMethod method = RiskMethod::ExactMarginal;
  /// Zero for the exact methods; quadrature bound or MC standard error otherwise.
  double error_bound = 0.0;
  ProblemConfig config;
  RiskTarget target = RiskTarget::Delta;
  /// Monte Carlo replicate count, zero for the other methods.
  std::int64_t replicates = 0;
};

/// -log(1 - 1/(x + 1 + ntilde)), evaluated as log(x+1+ntilde) - log(x+ntilde)
/// through log1p. Throws DomainError when x + ntilde <= 0.
double h_term(double x, double ntilde);

/// H(p) = p^2 E[h(X)], X ~ Bin(N, p), as a function of p for fixed N and ntilde.
/// ntilde is (1+n)/2 for integer n but any real >= 1/2 is accepted.
class HFunction {
 public:
  HFunction(std::int64_t N, double ntilde);

  /// Throws DomainError for p outside (0, 1).
  double operator()(double p) const;
  /// Same on (0, 1]; p = 1 is the single-row case where X = N almost surely.
  double including_one(double p) const;

  std::int64_t N() const { return N_; }
  double ntilde() const { return ntilde_; }

 private:
  std::int64_t N_;
  double ntilde_;
};

double h_eval(double p, std::int64_t N, double ntilde);

/// log(1 + 1/(N + c)) - sum_i H(p_i): the risk difference for N' = 1 at
/// direct sample size N. cfg supplies m and n; cfg.N and cfg.Nprime are ignored.
RiskReport delta_single(const RowMargins& pdot, std::int64_t N, const ProblemConfig& cfg);

/// delta_single at the uniform margins 1/(1+m), with continuous ntilde.
/// The half-cell constant is (1+m) * ntilde.
double delta_star(std::int64_t N, std::int64_t m, double ntilde);

/// Direct evaluation of
///   log((N+N'+c)/(N+c)) + sum_i p_i E[log(X_i+ntilde) - log(X_i+Y_i+ntilde)]
/// by double binomial sums over (X_i, Y_i). Cost O((m+1)(N+1)(N'+1)).
RiskReport delta_expectation(const RowMargins& pdot, std::int64_t N, std::int64_t Nprime,
                             const ProblemConfig& cfg);

/// Telescoped risk difference: sum_{v=1}^{N'} delta_single(pdot, N+v-1).
RiskReport delta_decomposition(const RowMargins& pdot, const ProblemConfig& cfg);

/// Partial sums of delta_star(N+v-1, m, ntilde) for v = 1..count.
std::vector<double> delta_star_partial_sums(std::int64_t N, std::int64_t m, double ntilde,
                                            std::int64_t count);

/// E_p[L(p~, p)] by marginal linearity.
RiskReport exact_risk_direct(const CellProbabilities& p, const ProblemConfig& cfg);

/// E_p[L(p^, p)] by marginal linearity; uses X_i + Y_i ~ Bin(N+N', p_i).
RiskReport exact_risk_combined(const CellProbabilities& p, const ProblemConfig& cfg);

struct ConvexityReport {
  std::int64_t N = 0;
  double ntilde = 0.0;
  double grid_step = 0.0;
  double min_second_difference = 0.0;
  double argmin_p = 0.0;
  std::int64_t points = 0;
  /// Grid points whose second difference falls below the threshold.
  std::vector<double> violations;
};

inline constexpr double kConvexityThreshold = -1e-9;

/// Centered second differences [H(p+d) - 2H(p) + H(p-d)]/d^2, d = grid_step/2,
/// over p = grid_step, 2 grid_step, ..., 1 - grid_step.
ConvexityReport convexity_scan(std::int64_t N, double ntilde, double grid_step = 0.01);

/// g(x) - 2 g(x-1) + g(x-2) with g(x) = (x+2)(x+1) h(x) and g = 0 on negatives.
double htilde_second_difference(std::int64_t x, double ntilde);

}  // namespace margbayes
