#include "margbayes/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "margbayes/parallel.hpp"

namespace margbayes {

namespace {

constexpr std::int64_t kChunk = 2048;

// Welford accumulator with Chan et al. merging.
struct Moments {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }

  void merge(const Moments& other) {
    if (other.count == 0) return;
    if (count == 0) {
      *this = other;
      return;
    }
    const double total = static_cast<double>(count + other.count);
    const double d = other.mean - mean;
    mean += d * static_cast<double>(other.count) / total;
    m2 += other.m2 + d * d * static_cast<double>(count) * static_cast<double>(other.count) / total;
    count += other.count;
  }

  double standard_error() const {
    if (count < 2) return 0.0;
    const double var = m2 / static_cast<double>(count - 1);
    return std::sqrt(var / static_cast<double>(count));
  }
};

struct ChunkMoments {
  Moments direct;
  Moments combined;
  Moments delta;
};

}  // namespace

void validate(const SimulationPlan& plan) {
  try {
    plan.cfg.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidPlan, e.what());
  }
  if (plan.replicates < kMinReplicates) {
    throw Error(ErrorKind::InvalidPlan, "at least 100 replicates are required");
  }
  if (plan.workers < 1) throw Error(ErrorKind::InvalidPlan, "workers must be >= 1");
  if (plan.p.grid().rows() != plan.cfg.rows() || plan.p.grid().cols() != plan.cfg.cols()) {
    throw Error(ErrorKind::InvalidPlan, "probability grid does not match (1+m) x (1+n)");
  }
}

SimulationResult simulate(const SimulationPlan& plan) {
  validate(plan);
  const auto margins = row_margins(plan.p);
  const auto chunks = static_cast<std::size_t>((plan.replicates + kChunk - 1) / kChunk);
  std::vector<ChunkMoments> partial(chunks);

  parallel_for(chunks, plan.workers, [&](std::size_t c) {
    const std::int64_t begin = static_cast<std::int64_t>(c) * kChunk;
    const std::int64_t end = std::min(plan.replicates, begin + kChunk);
    auto& acc = partial[c];
    for (std::int64_t r = begin; r < end; ++r) {
      auto rng = make_stream(plan.master_seed, static_cast<std::uint64_t>(r));
      const auto X = sample_direct(plan.p, plan.cfg.N, rng);
      const auto Y = sample_aggregated(margins, plan.cfg.Nprime, rng);
      const double direct = entropy_loss(estimate_direct(X, plan.cfg), plan.p);
      const double combined = entropy_loss(estimate_combined(X, Y, plan.cfg), plan.p);
      acc.direct.add(direct);
      acc.combined.add(combined);
      acc.delta.add(combined - direct);
    }
  });

  ChunkMoments total;
  for (const auto& part : partial) {
    total.direct.merge(part.direct);
    total.combined.merge(part.combined);
    total.delta.merge(part.delta);
  }

  SimulationResult result;
  result.replicates = plan.replicates;
  result.risk_direct_mean = total.direct.mean;
  result.risk_direct_se = total.direct.standard_error();
  result.risk_combined_mean = total.combined.mean;
  result.risk_combined_se = total.combined.standard_error();
  result.delta_mean = result.risk_combined_mean - result.risk_direct_mean;
  result.delta_se = total.delta.standard_error();
  return result;
}

std::vector<SimulationResult> sweep(const std::vector<SimulationPlan>& plans) {
  if (plans.empty()) throw Error(ErrorKind::InvalidPlan, "empty plan list");
  std::vector<SimulationResult> out;
  out.reserve(plans.size());
  for (const auto& plan : plans) out.push_back(simulate(plan));
  return out;
}

void write_csv_header(std::ostream& out) {
  out << "m,n,N,Nprime,replicates,seed,risk_direct_mean,risk_direct_se,"
         "risk_combined_mean,risk_combined_se,delta_mean,delta_se\n";
}

void write_csv_row(std::ostream& out, const SimulationPlan& plan, const SimulationResult& r) {
  const auto old_precision = out.precision(17);
  out << plan.cfg.m << ',' << plan.cfg.n << ',' << plan.cfg.N << ',' << plan.cfg.Nprime << ','
      << r.replicates << ',' << plan.master_seed << ',' << r.risk_direct_mean << ','
      << r.risk_direct_se << ',' << r.risk_combined_mean << ',' << r.risk_combined_se << ','
      << r.delta_mean << ',' << r.delta_se << '\n';
  out.precision(old_precision);
}

}  // namespace margbayes
