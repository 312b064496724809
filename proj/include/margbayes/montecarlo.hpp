#pragma once

// Paired-sampling Monte Carlo estimates of both risks and their difference.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "margbayes/core_model.hpp"

namespace margbayes {

inline constexpr std::int64_t kMinReplicates = 100;

struct SimulationPlan {
  ProblemConfig cfg;
  CellProbabilities p;
  std::int64_t replicates = 100000;
  std::uint64_t master_seed = 0;
  unsigned workers = 1;
};

struct SimulationResult {
  double risk_direct_mean = 0.0;
  double risk_direct_se = 0.0;
  double risk_combined_mean = 0.0;
  double risk_combined_se = 0.0;
  /// risk_combined_mean - risk_direct_mean.
  double delta_mean = 0.0;
  /// Standard error of the paired per-replicate differences.
  double delta_se = 0.0;
  std::int64_t replicates = 0;

  friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

/// Throws InvalidPlan for fewer than kMinReplicates replicates, zero workers,
/// or a grid that does not match the configuration.
void validate(const SimulationPlan& plan);

/// Replicate r draws X ~ Multin(N, p) and Y ~ Multin(N', p.) from stream r of
/// master_seed and scores both estimators on that draw. Replicates are grouped
/// in fixed chunks merged in chunk order, so the result does not depend on
/// the worker count.
SimulationResult simulate(const SimulationPlan& plan);

/// Runs each plan with its own seed. Throws InvalidPlan on an empty list.
std::vector<SimulationResult> sweep(const std::vector<SimulationPlan>& plans);

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const SimulationPlan& plan, const SimulationResult& r);

}  // namespace margbayes
