#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pcoreset/distance.hpp"
#include "pcoreset/rng.hpp"
#include "pcoreset/types.hpp"

namespace pcoreset {

struct SeedingConfig {
  Index t = 0;
  double delta = 1.0;  // failure probability of the approximation bound
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Work counters; rows_touched grows by a fixed multiple of n per round.
struct SeedingStats {
  Index rounds = 0;
  std::int64_t rows_touched = 0;
  Index uniform_fallbacks = 0;
};

/// Sequential D²-style sampler. Keeps f(p, Y) for every point up to date as
/// seeds join Y; f(p, ∅) = 1. When every remaining point has zero mass the
/// next seed is drawn uniformly from the points not yet chosen.
///
/// With `track_lines` the sampler also maintains f₀(p, lines(Y)) and the
/// index of the nearest line (ties to the earliest seed).
class AdaptiveSampler {
 public:
  AdaptiveSampler(const WeightedPointSet& points, Distance f, std::uint64_t rng_seed,
                  bool track_lines = false);

  Index draw();
  void add(Index row);
  Index draw_and_add() {
    const Index i = draw();
    add(i);
    return i;
  }

  const std::vector<Index>& chosen() const { return chosen_; }
  std::span<const double> distances() const { return distance_; }
  /// Σ w(p)·f₀(p, lines(Y)); Σ w(p) while Y is empty.
  double line_cost() const;
  std::span<const Index> line_assignment() const { return line_arg_; }
  std::span<const double> line_distances() const { return line_dist_; }
  const SeedingStats& stats() const { return stats_; }

 private:
  const WeightedPointSet& points_;
  Distance f_;
  bool track_lines_;
  Rng rng_;
  std::vector<double> distance_;
  std::vector<double> line_dist_;
  std::vector<Index> line_arg_;
  std::vector<double> prefix_;
  std::vector<char> is_chosen_;
  std::vector<Index> chosen_;
  SeedingStats stats_;
};

/// Returns X followed by t adaptively sampled rows.
std::vector<Index> k_line_means(const WeightedPointSet& points, std::span<const Index> initial,
                                Index t, Distance f, std::uint64_t rng_seed,
                                SeedingStats* stats = nullptr);

/// k_line_means under the line metric f_ℓ.
std::vector<Index> k_line_means_pp(const WeightedPointSet& points,
                                   std::span<const Index> initial, Index t,
                                   std::uint64_t rng_seed, SeedingStats* stats = nullptr);

std::vector<Line> lines_from_seeds(std::span<const Vector> seeds);
std::vector<Line> lines_from_seeds(const WeightedPointSet& points, std::span<const Index> seeds);

/// (1024/δ²)(1 + ln k): with probability at least 1-δ the f₀ cost of the
/// lines through k seeds is within this factor of the optimal k lines.
double line_seeding_bound(double delta, Index k);

}  // namespace pcoreset
