#pragma once

// Worst-case search for the N' = 1 risk difference over row margins, and
// certification that the combined estimator dominates.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "margbayes/core_model.hpp"

namespace margbayes {

enum class SampleSource { Uniform, Grid, DirichletRandom, VertexRay, Refined };

const char* to_string(SampleSource source);

struct SimplexSample {
  RowMargins margins;
  SampleSource source;
};

struct SearchOptions {
  /// Flat-Dirichlet draws.
  std::int64_t budget = 10000;
  /// Lattice spacing 1/resolution; the lattice is only enumerated for m <= 2.
  std::int64_t lattice_resolution = 50;
  double refine_step = 1e-3;
  std::int64_t refine_sweeps = 200;
  unsigned workers = 1;
};

struct SearchResult {
  SimplexSample best;
  double value = 0.0;
  std::int64_t evaluations = 0;
};

/// Maximise delta_single(., N) over row margins, starting from the uniform
/// point, a lattice, flat-Dirichlet draws and points on the rays from the
/// uniform point towards each vertex, then refining the best candidate by
/// pairwise mass transfers. Ties prefer the point closer to uniform, then
/// lexicographically smaller margins. Deterministic for a given rng state.
SearchResult maximize_delta(std::int64_t N, const ProblemConfig& cfg,
                            const SearchOptions& options, Rng& rng);

struct DominanceCertificate {
  ProblemConfig config;
  /// delta at the uniform margins, summed over v = 1..N'.
  double sup_bound = 0.0;
  bool certified = false;
  std::optional<std::int64_t> threshold_Nprime;
  std::string reason;
};

/// Certifies dominance at cfg when n >= 3 and the worst-case bound is negative.
/// threshold_Nprime is the smallest N' <= cfg.Nprime that certifies, if any.
DominanceCertificate certify_dominance(const ProblemConfig& cfg);

/// Smallest N' in [1, Nprime_max] whose worst-case bound is negative.
/// Throws HypothesisUnmet for n < 3.
std::optional<std::int64_t> dominance_threshold(std::int64_t m, std::int64_t n, std::int64_t N,
                                                std::int64_t Nprime_max);

}  // namespace margbayes
