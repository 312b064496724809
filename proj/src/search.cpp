#include "margbayes/search.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "margbayes/exact_risk.hpp"
#include "margbayes/parallel.hpp"

namespace margbayes {

const char* to_string(SampleSource source) {
  switch (source) {
    case SampleSource::Uniform: return "uniform";
    case SampleSource::Grid: return "grid";
    case SampleSource::DirichletRandom: return "dirichlet-random";
    case SampleSource::VertexRay: return "vertex-ray";
    case SampleSource::Refined: return "refined";
  }
  return "unknown";
}

namespace {

struct Candidate {
  std::vector<double> margins;
  SampleSource source = SampleSource::Uniform;
  double value = -INFINITY;
};

double distance_to_uniform(const std::vector<double>& x) {
  const double u = 1.0 / static_cast<double>(x.size());
  double d = 0.0;
  for (double v : x) d += (v - u) * (v - u);
  return d;
}

bool better(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value > b.value;
  const double da = distance_to_uniform(a.margins);
  const double db = distance_to_uniform(b.margins);
  if (da != db) return da < db;
  return a.margins < b.margins;
}

class Objective {
 public:
  Objective(std::int64_t N, const ProblemConfig& cfg)
      : H_(N, cfg.ntilde()),
        lead_(std::log1p(1.0 / (static_cast<double>(N) + cfg.half_cells()))) {}

  // Returns -inf outside the open simplex so moves off the boundary are rejected.
  double operator()(const std::vector<double>& x) const {
    double penalty = 0.0;
    for (double v : x) {
      if (!(v >= kPositivityFloor)) return -INFINITY;
      penalty += H_.including_one(v);
    }
    return lead_ - penalty;
  }

 private:
  HFunction H_;
  double lead_;
};

void lattice_points(std::size_t rows, std::int64_t resolution,
                    std::vector<std::vector<double>>& out) {
  // Compositions of `resolution` into `rows` positive parts.
  std::vector<std::int64_t> parts(rows, 1);
  auto emit = [&] {
    std::vector<double> x(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      x[i] = static_cast<double>(parts[i]) / static_cast<double>(resolution);
    }
    out.push_back(std::move(x));
  };
  if (rows == 1) {
    parts[0] = resolution;
    emit();
    return;
  }
  auto recurse = [&](auto& self, std::size_t i, std::int64_t left) -> void {
    if (i + 1 == rows) {
      parts[i] = left;
      emit();
      return;
    }
    const auto remaining_rows = static_cast<std::int64_t>(rows - i - 1);
    for (std::int64_t k = 1; k <= left - remaining_rows; ++k) {
      parts[i] = k;
      self(self, i + 1, left - k);
    }
  };
  recurse(recurse, 0, resolution);
}

std::vector<double> flat_dirichlet(std::size_t rows, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> x(rows);
  double total = 0.0;
  for (auto& v : x) {
    v = expo(rng);
    total += v;
  }
  for (auto& v : x) v /= total;
  return x;
}

Candidate refine(Candidate start, const Objective& objective, const SearchOptions& options) {
  const std::size_t rows = start.margins.size();
  for (std::int64_t sweep = 0; sweep < options.refine_sweeps; ++sweep) {
    bool improved = false;
    for (std::size_t from = 0; from < rows; ++from) {
      for (std::size_t to = 0; to < rows; ++to) {
        if (from == to) continue;
        auto trial = start.margins;
        trial[from] -= options.refine_step;
        trial[to] += options.refine_step;
        const double value = objective(trial);
        if (value > start.value) {
          start.margins = std::move(trial);
          start.value = value;
          start.source = SampleSource::Refined;
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
  return start;
}

}  // namespace

SearchResult maximize_delta(std::int64_t N, const ProblemConfig& cfg,
                            const SearchOptions& options, Rng& rng) {
  if (options.budget < 1) throw Error(ErrorKind::InvalidInput, "search budget must be >= 1");
  if (cfg.n < 1) throw Error(ErrorKind::InvalidInput, "search needs n >= 1");
  const Objective objective(N, cfg);
  const std::size_t rows = cfg.rows();

  std::vector<Candidate> pool;
  auto add = [&](std::vector<double> x, SampleSource source) {
    pool.push_back({std::move(x), source, 0.0});
  };
  add(std::vector<double>(rows, 1.0 / static_cast<double>(rows)), SampleSource::Uniform);

  if (cfg.m <= 2 && options.lattice_resolution >= static_cast<std::int64_t>(rows)) {
    std::vector<std::vector<double>> lattice;
    lattice_points(rows, options.lattice_resolution, lattice);
    for (auto& x : lattice) add(std::move(x), SampleSource::Grid);
  }

  // Rays from the uniform point towards each vertex.
  for (std::size_t v = 0; v < rows && rows > 1; ++v) {
    for (double s : {0.25, 0.5, 0.75, 0.95}) {
      std::vector<double> x(rows, (1.0 - s) / static_cast<double>(rows));
      x[v] += s;
      add(std::move(x), SampleSource::VertexRay);
    }
  }

  const std::uint64_t master = rng();
  const std::size_t first_random = pool.size();
  pool.resize(first_random + static_cast<std::size_t>(options.budget));
  parallel_for(static_cast<std::size_t>(options.budget), options.workers, [&](std::size_t k) {
    auto stream = make_stream(master, k);
    pool[first_random + k] = {flat_dirichlet(rows, stream), SampleSource::DirichletRandom, 0.0};
  });

  parallel_for(pool.size(), options.workers,
               [&](std::size_t k) { pool[k].value = objective(pool[k].margins); });

  Candidate best = pool.front();
  for (const auto& c : pool) {
    if (better(c, best)) best = c;
  }
  Candidate refined = refine(best, objective, options);
  if (better(refined, best)) best = std::move(refined);

  SearchResult result{{RowMargins(best.margins), best.source}, best.value,
                      static_cast<std::int64_t>(pool.size())};
  return result;
}

std::optional<std::int64_t> dominance_threshold(std::int64_t m, std::int64_t n, std::int64_t N,
                                                std::int64_t Nprime_max) {
  if (n < 3) throw Error(ErrorKind::HypothesisUnmet, "hypothesis n >= 3 unmet");
  const double ntilde = 0.5 * static_cast<double>(n + 1);
  double sum = 0.0;
  for (std::int64_t v = 1; v <= Nprime_max; ++v) {
    sum += delta_star(N + v - 1, m, ntilde);
    if (sum < 0.0) return v;
  }
  return std::nullopt;
}

DominanceCertificate certify_dominance(const ProblemConfig& cfg) {
  cfg.validate();
  DominanceCertificate cert;
  cert.config = cfg;
  const auto sums = delta_star_partial_sums(cfg.N, cfg.m, cfg.ntilde(), cfg.Nprime);
  cert.sup_bound = sums.empty() ? 0.0 : sums.back();
  if (cfg.n < 3) {
    cert.reason = "hypothesis n >= 3 unmet";
    return cert;
  }
  for (std::size_t k = 0; k < sums.size(); ++k) {
    if (sums[k] < 0.0) {
      cert.threshold_Nprime = static_cast<std::int64_t>(k + 1);
      break;
    }
  }
  cert.certified = cert.sup_bound < 0.0;
  cert.reason = cert.certified ? "worst-case risk difference is negative"
                               : "worst-case risk difference is not negative";
  return cert;
}

}  // namespace margbayes
