#include "margbayes/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "margbayes/binomial.hpp"
#include "margbayes/parallel.hpp"

namespace margbayes {

namespace {

// (e^t - 1)/t, tending to 1 at the origin.
double expm1_over_t(double t) { return t == 0.0 ? 1.0 : std::expm1(t) / t; }

std::int64_t column_count_from_ntilde(double ntilde) {
  return static_cast<std::int64_t>(std::llround(2.0 * ntilde - 1.0));
}

}  // namespace

RiskReport delta_star_quadrature(std::int64_t N, std::int64_t m, double ntilde,
                                 const QuadratureSpec& spec) {
  if (N < 1 || m < 0) throw Error(ErrorKind::DomainError, "need N >= 1 and m >= 0");
  if (!(ntilde > 0.0)) throw Error(ErrorKind::DomainError, "need ntilde > 0");
  const double pstar = 1.0 / static_cast<double>(m + 1);
  const double n_direct = static_cast<double>(N);

  const double rate_log = n_direct + 1.0 + ntilde / pstar;
  auto log_part = [=](double t) { return expm1_over_t(t) * std::exp(-rate_log * t); };

  auto penalty_part = [=](double t) {
    const double mgf = 1.0 - pstar + pstar * std::exp(-t);
    return pstar * expm1_over_t(t) * std::exp(-(1.0 + ntilde) * t) * std::pow(mgf, n_direct);
  };

  // Beyond t = 1 the integrands decay at least like e^{-(rate-1)t}/t.
  const auto first = integrate_semi_infinite(log_part, rate_log - 1.0, spec);
  const auto second = integrate_semi_infinite(penalty_part, ntilde, spec);

  RiskReport report;
  report.value = first.value - second.value;
  report.error_bound = first.error + second.error;
  report.method = RiskMethod::Quadrature;
  report.target = RiskTarget::Delta;
  report.config = ProblemConfig{m, column_count_from_ntilde(ntilde), N, 1};
  return report;
}

double h_series(double p, std::int64_t N, double ntilde, double tol) {
  if (!(p > 0.0 && p < 1.0)) throw Error(ErrorKind::DomainError, "H is defined on (0, 1)");
  if (!(tol > 0.0)) throw Error(ErrorKind::DomainError, "tol must be positive");
  const auto pmf = binomial_pmf(N, p);
  std::vector<double> ratio(pmf.size());
  std::vector<double> power(pmf.size());
  for (std::size_t x = 0; x < pmf.size(); ++x) {
    ratio[x] = 1.0 / (static_cast<double>(x) + 1.0 + ntilde);
    power[x] = pmf[x];
  }
  double partial = 0.0;
  constexpr int kMaxTerms = 10000;
  for (int k = 1; k <= kMaxTerms; ++k) {
    double moment = 0.0;
    for (std::size_t x = 0; x < pmf.size(); ++x) {
      power[x] *= ratio[x];
      moment += power[x];
    }
    const double term = moment / k;
    partial += term;
    if (term < tol * partial) return p * p * partial;
  }
  throw Error(ErrorKind::NoConvergence, "series did not converge within 1e4 terms");
}

namespace {

template <typename Param, typename Fn>
LimitReport tabulate(std::string name, std::span<const Param> values, double target, Fn&& fn) {
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (!(values[k] > values[k - 1])) {
      throw Error(ErrorKind::InvalidInput, "parameter values must be strictly increasing");
    }
  }
  if (values.empty()) throw Error(ErrorKind::InvalidInput, "no parameter values");
  LimitReport report;
  report.parameter_name = std::move(name);
  report.target = target;
  report.points.resize(values.size());
  parallel_for(values.size(), default_workers(), [&](std::size_t k) {
    report.points[k] = {static_cast<double>(values[k]), fn(values[k])};
  });
  report.achieved_gap = std::isnan(target)
                            ? std::numeric_limits<double>::quiet_NaN()
                            : std::abs(report.points.back().scaled_value - target);
  return report;
}

}  // namespace

LimitReport sample_size_limit(std::int64_t m, double ntilde,
                              std::span<const std::int64_t> N_values) {
  const double target = 0.5 * (1.0 - static_cast<double>(m + 1));
  return tabulate("N", N_values, target, [&](std::int64_t N) {
    const double scale = static_cast<double>(N + 1);
    return scale * scale * delta_star(N, m, ntilde);
  });
}

LimitReport row_count_limit(std::int64_t N, double ntilde,
                            std::span<const std::int64_t> m_values) {
  const double target = 1.0 / ntilde - std::log1p(1.0 / ntilde);
  return tabulate("m", m_values, target, [&](std::int64_t m) {
    return static_cast<double>(m + 1) * delta_star(N, m, ntilde);
  });
}

double column_derivative(std::int64_t N, std::int64_t m, double ntilde, double step) {
  if (!(step > 0.0) || step >= ntilde - 0.5) {
    throw Error(ErrorKind::StepTooLarge, "need 0 < step < ntilde - 1/2");
  }
  const double slope = (delta_star(N, m, ntilde + step) - delta_star(N, m, ntilde - step)) /
                       (2.0 * step);
  return 0.5 * slope;
}

LimitReport scaled_column_derivative(std::int64_t N, std::int64_t m,
                                     std::span<const std::int64_t> n_values, double step) {
  return tabulate("n", n_values, std::numeric_limits<double>::quiet_NaN(),
                  [&](std::int64_t n) {
                    const double nd = static_cast<double>(n);
                    return nd * nd * nd * column_derivative(N, m, 0.5 * (nd + 1.0), step);
                  });
}

void write_csv(std::ostream& out, const LimitReport& report) {
  const auto old_precision = out.precision(17);
  out << "parameter,scaled_value,target,gap\n";
  for (const auto& point : report.points) {
    const double gap = std::isnan(report.target)
                           ? std::numeric_limits<double>::quiet_NaN()
                           : std::abs(point.scaled_value - report.target);
    out << point.parameter << ',' << point.scaled_value << ',' << report.target << ',' << gap
        << '\n';
  }
  out.precision(old_precision);
}

}  // namespace margbayes
