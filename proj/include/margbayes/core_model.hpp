#pragma once

// Problem configuration, parameter and count types, samplers, the two
// Jeffreys-prior Bayes estimators and the entropy loss.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace margbayes {

enum class ErrorKind {
  NonPositiveEntry,
  NotNormalized,
  ShapeMismatch,
  DomainError,
  QuadratureFailure,
  NoConvergence,
  StepTooLarge,
  HypothesisUnmet,
  InvalidPlan,
  InvalidInput,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline constexpr double kPositivityFloor = 1e-12;
inline constexpr double kNormalizationTol = 1e-12;

/// Sizes of the (1+m) x (1+n) table and the two sample sizes.
struct ProblemConfig {
  std::int64_t m = 0;
  std::int64_t n = 0;
  std::int64_t N = 1;
  std::int64_t Nprime = 0;

  std::size_t rows() const { return static_cast<std::size_t>(m + 1); }
  std::size_t cols() const { return static_cast<std::size_t>(n + 1); }
  /// (1+m)(1+n)/2, the total Jeffreys smoothing mass.
  double half_cells() const { return 0.5 * static_cast<double>((m + 1) * (n + 1)); }
  /// (1+n)/2, the row-level smoothing mass.
  double ntilde() const { return 0.5 * static_cast<double>(n + 1); }

  /// Throws InvalidInput unless m, n >= 0, N >= 1 and Nprime >= 0.
  void validate() const;

  friend bool operator==(const ProblemConfig&, const ProblemConfig&) = default;
};

/// Dense row-major matrix.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<const T> values() const { return data_; }
  std::span<T> values() { return data_; }

  /// Builds from nested rows; throws ShapeMismatch if ragged or empty.
  static Grid from_rows(const std::vector<std::vector<T>>& rows);
  std::vector<std::vector<T>> to_rows() const;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <typename T>
Grid<T> Grid<T>::from_rows(const std::vector<std::vector<T>>& rows) {
  if (rows.empty() || rows.front().empty()) {
    throw Error(ErrorKind::ShapeMismatch, "grid must be nonempty");
  }
  Grid g(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != g.cols_) {
      throw Error(ErrorKind::ShapeMismatch, "grid rows have different lengths");
    }
    for (std::size_t j = 0; j < g.cols_; ++j) g(i, j) = rows[i][j];
  }
  return g;
}

template <typename T>
std::vector<std::vector<T>> Grid<T>::to_rows() const {
  std::vector<std::vector<T>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i].assign(row(i).begin(), row(i).end());
  return out;
}

/// Strictly positive cell probabilities summing to one.
class CellProbabilities {
 public:
  const Grid<double>& grid() const { return grid_; }
  std::int64_t m() const { return static_cast<std::int64_t>(grid_.rows()) - 1; }
  std::int64_t n() const { return static_cast<std::int64_t>(grid_.cols()) - 1; }
  double operator()(std::size_t i, std::size_t j) const { return grid_(i, j); }

  /// Uniform grid p* with every cell equal to 1/((1+m)(1+n)).
  static CellProbabilities uniform(std::int64_t m, std::int64_t n);

 private:
  friend CellProbabilities validate_probabilities(Grid<double> grid, double floor);
  explicit CellProbabilities(Grid<double> g) : grid_(std::move(g)) {}
  Grid<double> grid_;
};

CellProbabilities validate_probabilities(Grid<double> grid, double floor = kPositivityFloor);

/// Row margins p_i = sum_j p_ij.
class RowMargins {
 public:
  /// Throws NonPositiveEntry / NotNormalized on invalid input.
  explicit RowMargins(std::vector<double> values);

  static RowMargins uniform(std::int64_t m);

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

RowMargins row_margins(const CellProbabilities& p);

class DirectCounts {
 public:
  /// Throws InvalidInput on negative entries.
  explicit DirectCounts(Grid<std::int64_t> table);

  const Grid<std::int64_t>& table() const { return table_; }
  std::int64_t total() const { return total_; }
  std::int64_t row_total(std::size_t i) const { return row_totals_[i]; }
  std::span<const std::int64_t> row_totals() const { return row_totals_; }

 private:
  Grid<std::int64_t> table_;
  std::vector<std::int64_t> row_totals_;
  std::int64_t total_ = 0;
};

class AggregatedCounts {
 public:
  explicit AggregatedCounts(std::vector<std::int64_t> counts);

  std::span<const std::int64_t> counts() const { return counts_; }
  std::int64_t operator[](std::size_t i) const { return counts_[i]; }
  std::size_t size() const { return counts_.size(); }
  std::int64_t total() const { return total_; }

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

/// A point of the open simplex produced by one of the estimators.
class Estimate {
 public:
  const Grid<double>& grid() const { return grid_; }
  double operator()(std::size_t i, std::size_t j) const { return grid_(i, j); }

 private:
  friend Estimate estimate_direct(const DirectCounts&, const ProblemConfig&);
  friend Estimate estimate_combined(const DirectCounts&, const AggregatedCounts&,
                                    const ProblemConfig&);
  explicit Estimate(Grid<double> g) : grid_(std::move(g)) {}
  Grid<double> grid_;
};

using Rng = std::mt19937_64;

/// Independent stream number `index` derived from `master_seed`.
/// Stream i of a parallel job is the one for task i.
Rng make_stream(std::uint64_t master_seed, std::uint64_t index);
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

/// Multinomial(total, probs) via sequential conditional binomials.
std::vector<std::int64_t> sample_multinomial(std::span<const double> probs,
                                             std::int64_t total, Rng& rng);

DirectCounts sample_direct(const CellProbabilities& p, std::int64_t N, Rng& rng);
AggregatedCounts sample_aggregated(const RowMargins& pdot, std::int64_t Nprime, Rng& rng);

/// Posterior mean of p given X under the Jeffreys prior:
/// (X_ij + 1/2) / (N + (1+m)(1+n)/2).
Estimate estimate_direct(const DirectCounts& X, const ProblemConfig& cfg);

/// Posterior mean given X and the aggregated row counts Y:
/// (X_i. + Y_i + (1+n)/2)/(N + N' + (1+m)(1+n)/2) * (X_ij + 1/2)/(X_i. + (1+n)/2).
Estimate estimate_combined(const DirectCounts& X, const AggregatedCounts& Y,
                           const ProblemConfig& cfg);

/// Kullback-Leibler divergence sum p log(p/d).
double entropy_loss(const Grid<double>& d, const CellProbabilities& p);
inline double entropy_loss(const Estimate& d, const CellProbabilities& p) {
  return entropy_loss(d.grid(), p);
}

}  // namespace margbayes
