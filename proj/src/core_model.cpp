#include "margbayes/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace margbayes {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveEntry: return "NonPositiveEntry";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::HypothesisUnmet: return "HypothesisUnmet";
    case ErrorKind::InvalidPlan: return "InvalidPlan";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void ProblemConfig::validate() const {
  if (m < 0 || n < 0) throw Error(ErrorKind::InvalidInput, "m and n must be >= 0");
  if (N < 1) throw Error(ErrorKind::InvalidInput, "N must be >= 1");
  if (Nprime < 0) throw Error(ErrorKind::InvalidInput, "Nprime must be >= 0");
}

namespace {

// Kahan summation.
double stable_sum(std::span<const double> xs) {
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

void check_simplex(std::span<const double> xs, double floor, const char* what) {
  for (double x : xs) {
    if (!(x >= floor) || !std::isfinite(x)) {
      std::ostringstream os;
      os << what << " entry " << x << " is below the positivity floor " << floor;
      throw Error(ErrorKind::NonPositiveEntry, os.str());
    }
  }
  const double total = stable_sum(xs);
  if (std::abs(total - 1.0) > kNormalizationTol) {
    std::ostringstream os;
    os.precision(17);
    os << what << " entries sum to " << total;
    throw Error(ErrorKind::NotNormalized, os.str());
  }
}

}  // namespace

CellProbabilities validate_probabilities(Grid<double> grid, double floor) {
  if (grid.size() == 0) throw Error(ErrorKind::ShapeMismatch, "empty probability grid");
  check_simplex(grid.values(), floor, "probability");
  return CellProbabilities(std::move(grid));
}

CellProbabilities CellProbabilities::uniform(std::int64_t m, std::int64_t n) {
  const auto rows = static_cast<std::size_t>(m + 1);
  const auto cols = static_cast<std::size_t>(n + 1);
  return CellProbabilities(Grid<double>(rows, cols, 1.0 / static_cast<double>(rows * cols)));
}

RowMargins::RowMargins(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorKind::ShapeMismatch, "empty margin vector");
  check_simplex(values_, kPositivityFloor, "margin");
}

RowMargins RowMargins::uniform(std::int64_t m) {
  return RowMargins(std::vector<double>(static_cast<std::size_t>(m + 1),
                                        1.0 / static_cast<double>(m + 1)));
}

RowMargins row_margins(const CellProbabilities& p) {
  const auto& g = p.grid();
  std::vector<double> out(g.rows());
  for (std::size_t i = 0; i < g.rows(); ++i) out[i] = stable_sum(g.row(i));
  return RowMargins(std::move(out));
}

DirectCounts::DirectCounts(Grid<std::int64_t> table)
    : table_(std::move(table)), row_totals_(table_.rows(), 0) {
  for (std::size_t i = 0; i < table_.rows(); ++i) {
    for (auto x : table_.row(i)) {
      if (x < 0) throw Error(ErrorKind::InvalidInput, "negative count in direct table");
      row_totals_[i] += x;
    }
    total_ += row_totals_[i];
  }
}

AggregatedCounts::AggregatedCounts(std::vector<std::int64_t> counts)
    : counts_(std::move(counts)) {
  for (auto y : counts_) {
    if (y < 0) throw Error(ErrorKind::InvalidInput, "negative aggregated count");
    total_ += y;
  }
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  // splitmix64 finalizer applied to a Weyl sequence position.
  std::uint64_t z = master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Rng make_stream(std::uint64_t master_seed, std::uint64_t index) {
  return Rng(derive_seed(master_seed, index));
}

std::vector<std::int64_t> sample_multinomial(std::span<const double> probs,
                                             std::int64_t total, Rng& rng) {
  std::vector<std::int64_t> out(probs.size(), 0);
  if (probs.empty()) return out;
  std::int64_t remaining = total;
  double mass = 1.0;
  for (std::size_t k = 0; k + 1 < probs.size() && remaining > 0; ++k) {
    const double q = mass > 0.0 ? std::clamp(probs[k] / mass, 0.0, 1.0) : 1.0;
    std::binomial_distribution<std::int64_t> draw(remaining, q);
    out[k] = draw(rng);
    remaining -= out[k];
    mass -= probs[k];
  }
  out.back() += remaining;
  return out;
}

DirectCounts sample_direct(const CellProbabilities& p, std::int64_t N, Rng& rng) {
  const auto& g = p.grid();
  auto flat = sample_multinomial(g.values(), N, rng);
  Grid<std::int64_t> table(g.rows(), g.cols());
  std::copy(flat.begin(), flat.end(), table.values().begin());
  return DirectCounts(std::move(table));
}

AggregatedCounts sample_aggregated(const RowMargins& pdot, std::int64_t Nprime, Rng& rng) {
  return AggregatedCounts(sample_multinomial(pdot.values(), Nprime, rng));
}

namespace {

void check_direct_shape(const DirectCounts& X, const ProblemConfig& cfg) {
  if (X.table().rows() != cfg.rows() || X.table().cols() != cfg.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "direct table shape does not match (1+m) x (1+n)");
  }
  if (X.total() != cfg.N) {
    throw Error(ErrorKind::ShapeMismatch, "direct table total does not equal N");
  }
}

}  // namespace

Estimate estimate_direct(const DirectCounts& X, const ProblemConfig& cfg) {
  check_direct_shape(X, cfg);
  const double denom = static_cast<double>(cfg.N) + cfg.half_cells();
  Grid<double> d(cfg.rows(), cfg.cols());
  for (std::size_t i = 0; i < cfg.rows(); ++i) {
    for (std::size_t j = 0; j < cfg.cols(); ++j) {
      d(i, j) = (static_cast<double>(X.table()(i, j)) + 0.5) / denom;
    }
  }
  return Estimate(std::move(d));
}

Estimate estimate_combined(const DirectCounts& X, const AggregatedCounts& Y,
                           const ProblemConfig& cfg) {
  check_direct_shape(X, cfg);
  if (Y.size() != cfg.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "aggregated vector length does not equal 1+m");
  }
  if (Y.total() != cfg.Nprime) {
    throw Error(ErrorKind::ShapeMismatch, "aggregated total does not equal Nprime");
  }
  const double nt = cfg.ntilde();
  const double denom = static_cast<double>(cfg.N + cfg.Nprime) + cfg.half_cells();
  Grid<double> d(cfg.rows(), cfg.cols());
  for (std::size_t i = 0; i < cfg.rows(); ++i) {
    const double xi = static_cast<double>(X.row_total(i));
    const double row_factor = (xi + static_cast<double>(Y[i]) + nt) / denom;
    for (std::size_t j = 0; j < cfg.cols(); ++j) {
      d(i, j) = row_factor * ((static_cast<double>(X.table()(i, j)) + 0.5) / (xi + nt));
    }
  }
  return Estimate(std::move(d));
}

double entropy_loss(const Grid<double>& d, const CellProbabilities& p) {
  const auto& g = p.grid();
  if (d.rows() != g.rows() || d.cols() != g.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "estimate and parameter shapes differ");
  }
  double loss = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double pk = g.values()[k];
    const double dk = d.values()[k];
    if (!(dk > 0.0)) throw Error(ErrorKind::DomainError, "estimate entry must be positive");
    loss += pk * std::log(pk / dk);
  }
  return loss;
}

}  // namespace margbayes
