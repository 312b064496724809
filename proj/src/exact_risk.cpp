#include "margbayes/exact_risk.hpp"

#include <cmath>

#include "margbayes/binomial.hpp"
#include "margbayes/parallel.hpp"

namespace margbayes {

const char* to_string(RiskMethod method) {
  switch (method) {
    case RiskMethod::ExactMarginal: return "exact";
    case RiskMethod::ClosedForm: return "closed";
    case RiskMethod::Decomposition: return "decomposition";
    case RiskMethod::Quadrature: return "quadrature";
    case RiskMethod::MonteCarlo: return "mc";
  }
  return "unknown";
}

const char* to_string(RiskTarget target) {
  switch (target) {
    case RiskTarget::RiskDirect: return "risk_direct";
    case RiskTarget::RiskCombined: return "risk_combined";
    case RiskTarget::Delta: return "delta";
  }
  return "unknown";
}

RiskMethod parse_risk_method(const std::string& s) {
  for (auto m : {RiskMethod::ExactMarginal, RiskMethod::ClosedForm, RiskMethod::Decomposition,
                 RiskMethod::Quadrature, RiskMethod::MonteCarlo}) {
    if (s == to_string(m)) return m;
  }
  throw Error(ErrorKind::InvalidInput, "unknown risk method '" + s + "'");
}

RiskTarget parse_risk_target(const std::string& s) {
  for (auto t : {RiskTarget::RiskDirect, RiskTarget::RiskCombined, RiskTarget::Delta}) {
    if (s == to_string(t)) return t;
  }
  throw Error(ErrorKind::InvalidInput, "unknown risk target '" + s + "'");
}

double h_term(double x, double ntilde) {
  const double base = x + ntilde;
  if (!(base > 0.0)) throw Error(ErrorKind::DomainError, "h_term needs x + ntilde > 0");
  return std::log1p(1.0 / base);
}

HFunction::HFunction(std::int64_t N, double ntilde) : N_(N), ntilde_(ntilde) {
  if (N < 0) throw Error(ErrorKind::DomainError, "H needs N >= 0");
  if (!(ntilde > 0.0)) throw Error(ErrorKind::DomainError, "H needs ntilde > 0");
}

double HFunction::operator()(double p) const {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::DomainError, "H is defined on (0, 1)");
  return including_one(p);
}

double HFunction::including_one(double p) const {
  if (!(p > 0.0 && p <= 1.0)) throw Error(ErrorKind::DomainError, "H is defined on (0, 1]");
  const double nt = ntilde_;
  const double e = binomial_expectation(N_, p, [nt](std::int64_t x) {
    return h_term(static_cast<double>(x), nt);
  });
  return p * p * e;
}

double h_eval(double p, std::int64_t N, double ntilde) { return HFunction(N, ntilde)(p); }

namespace {

void check_margins(const RowMargins& pdot, const ProblemConfig& cfg) {
  if (pdot.size() != cfg.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "margin vector length does not equal 1+m");
  }
}

RiskReport make_report(double value, RiskMethod method, const ProblemConfig& cfg,
                       RiskTarget target) {
  RiskReport r;
  r.value = value;
  r.method = method;
  r.config = cfg;
  r.target = target;
  return r;
}

}  // namespace

RiskReport delta_single(const RowMargins& pdot, std::int64_t N, const ProblemConfig& cfg) {
  check_margins(pdot, cfg);
  if (N < 0) throw Error(ErrorKind::DomainError, "delta_single needs N >= 0");
  const HFunction H(N, cfg.ntilde());
  double penalty = 0.0;
  for (double pi : pdot.values()) penalty += H.including_one(pi);
  const double value = std::log1p(1.0 / (static_cast<double>(N) + cfg.half_cells())) - penalty;
  ProblemConfig reported = cfg;
  reported.N = N;
  reported.Nprime = 1;
  return make_report(value, RiskMethod::ClosedForm, reported, RiskTarget::Delta);
}

double delta_star(std::int64_t N, std::int64_t m, double ntilde) {
  if (m < 0) throw Error(ErrorKind::DomainError, "delta_star needs m >= 0");
  const double rows = static_cast<double>(m + 1);
  const double pstar = 1.0 / rows;
  // (1+m) H(1/(1+m)) = p* E[h(X)].
  const double penalty = HFunction(N, ntilde).including_one(pstar) * rows;
  return std::log1p(1.0 / (static_cast<double>(N) + rows * ntilde)) - penalty;
}

RiskReport delta_expectation(const RowMargins& pdot, std::int64_t N, std::int64_t Nprime,
                             const ProblemConfig& cfg) {
  check_margins(pdot, cfg);
  if (N < 0 || Nprime < 0) throw Error(ErrorKind::DomainError, "sample sizes must be >= 0");
  ProblemConfig reported = cfg;
  reported.N = N;
  reported.Nprime = Nprime;
  if (Nprime == 0) return make_report(0.0, RiskMethod::ExactMarginal, reported, RiskTarget::Delta);

  const double nt = cfg.ntilde();
  const double c = cfg.half_cells();
  double rows_term = 0.0;
  for (double pi : pdot.values()) {
    const auto px = binomial_pmf(N, pi);
    const auto py = binomial_pmf(Nprime, pi);
    double e = 0.0;
    for (std::int64_t x = 0; x <= N; ++x) {
      const double wx = px[static_cast<std::size_t>(x)];
      if (wx == 0.0) continue;
      const double base = static_cast<double>(x) + nt;
      double inner = 0.0;
      for (std::int64_t y = 1; y <= Nprime; ++y) {
        // log(x + nt) - log(x + y + nt)
        inner -= py[static_cast<std::size_t>(y)] * std::log1p(static_cast<double>(y) / base);
      }
      e += wx * inner;
    }
    rows_term += pi * e;
  }
  const double lead = std::log1p(static_cast<double>(Nprime) / (static_cast<double>(N) + c));
  return make_report(lead + rows_term, RiskMethod::ExactMarginal, reported, RiskTarget::Delta);
}

RiskReport delta_decomposition(const RowMargins& pdot, const ProblemConfig& cfg) {
  check_margins(pdot, cfg);
  double sum = 0.0;
  for (std::int64_t v = 1; v <= cfg.Nprime; ++v) sum += delta_single(pdot, cfg.N + v - 1, cfg).value;
  return make_report(sum, RiskMethod::Decomposition, cfg, RiskTarget::Delta);
}

std::vector<double> delta_star_partial_sums(std::int64_t N, std::int64_t m, double ntilde,
                                            std::int64_t count) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
  double sum = 0.0;
  for (std::int64_t v = 1; v <= count; ++v) {
    sum += delta_star(N + v - 1, m, ntilde);
    out.push_back(sum);
  }
  return out;
}

namespace {

void check_grid(const CellProbabilities& p, const ProblemConfig& cfg) {
  if (p.grid().rows() != cfg.rows() || p.grid().cols() != cfg.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "probability grid shape does not match (1+m) x (1+n)");
  }
}

double expected_log_shift(std::int64_t trials, double p, double shift) {
  return binomial_expectation(trials, p, [shift](std::int64_t x) {
    return std::log(static_cast<double>(x) + shift);
  });
}

// sum_ij p_ij [log p_ij - E log(X_ij + 1/2)], the part common to both risks.
double cell_terms(const CellProbabilities& p, std::int64_t N) {
  double sum = 0.0;
  for (double pij : p.grid().values()) {
    sum += pij * (std::log(pij) - expected_log_shift(N, pij, 0.5));
  }
  return sum;
}

}  // namespace

RiskReport exact_risk_direct(const CellProbabilities& p, const ProblemConfig& cfg) {
  cfg.validate();
  check_grid(p, cfg);
  const double value =
      cell_terms(p, cfg.N) + std::log(static_cast<double>(cfg.N) + cfg.half_cells());
  return make_report(value, RiskMethod::ExactMarginal, cfg, RiskTarget::RiskDirect);
}

RiskReport exact_risk_combined(const CellProbabilities& p, const ProblemConfig& cfg) {
  cfg.validate();
  check_grid(p, cfg);
  const double nt = cfg.ntilde();
  const auto margins = row_margins(p);
  double rows_term = 0.0;
  for (double pi : margins.values()) {
    rows_term += pi * (expected_log_shift(cfg.N + cfg.Nprime, pi, nt) -
                       expected_log_shift(cfg.N, pi, nt));
  }
  const double value = cell_terms(p, cfg.N) +
                       std::log(static_cast<double>(cfg.N + cfg.Nprime) + cfg.half_cells()) -
                       rows_term;
  return make_report(value, RiskMethod::ExactMarginal, cfg, RiskTarget::RiskCombined);
}

ConvexityReport convexity_scan(std::int64_t N, double ntilde, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.1)) {
    throw Error(ErrorKind::InvalidInput, "grid_step must lie in (0, 0.1]");
  }
  const HFunction H(N, ntilde);
  const double half = grid_step / 2.0;
  const auto points = static_cast<std::size_t>(std::llround(1.0 / grid_step)) - 1;
  std::vector<double> second(points);
  parallel_for(points, default_workers(), [&](std::size_t k) {
    const double p = static_cast<double>(k + 1) * grid_step;
    second[k] = (H(p + half) - 2.0 * H(p) + H(p - half)) / (half * half);
  });

  ConvexityReport report;
  report.N = N;
  report.ntilde = ntilde;
  report.grid_step = grid_step;
  report.points = static_cast<std::int64_t>(points);
  report.min_second_difference = INFINITY;
  for (std::size_t k = 0; k < points; ++k) {
    const double p = static_cast<double>(k + 1) * grid_step;
    if (second[k] < report.min_second_difference) {
      report.min_second_difference = second[k];
      report.argmin_p = p;
    }
    if (second[k] < kConvexityThreshold) report.violations.push_back(p);
  }
  return report;
}

double htilde_second_difference(std::int64_t x, double ntilde) {
  auto g = [ntilde](std::int64_t k) {
    if (k < 0) return 0.0;
    const double xk = static_cast<double>(k);
    return (xk + 2.0) * (xk + 1.0) * h_term(xk, ntilde);
  };
  return g(x) - 2.0 * g(x - 1) + g(x - 2);
}

}  // namespace margbayes
