#pragma once

#include <cstdint>
#include <vector>

#include "pcoreset/cnw.hpp"
#include "pcoreset/cost.hpp"
#include "pcoreset/types.hpp"

namespace pcoreset {

/// How a collapsed cell is written out. `Weighted` stores the seed cᵢ with
/// weight u (the cell's total weight). `LiteralScaled` stores the point u·cᵢ
/// with weight 1, reproducing the scaling of the original reference code.
enum class CollapseOutput { Weighted, LiteralScaled };

struct CollapseResult {
  std::vector<Index> seeds;     // rows of P, in the order they were drawn
  Coreset weighted_coreset;     // one representative per nonempty cell
  std::vector<Index> cell_of;   // cell_of[p] = position of p's seed in `seeds`
  std::vector<Index> kept_cells;  // seed positions that survived (nonempty cells)
  std::vector<double> cost_trace;  // f₀ cost to the seed lines after each iteration
  Index iterations = 0;
  double final_cost = 0.0;
  double threshold = 0.0;
};

/// Grows seeds one at a time with the line metric until the f₀ cost of P to
/// the lines through the seeds drops below `a`, then collapses every point
/// onto the seed of its nearest line. The loop stops after n seeds at most.
CollapseResult k_j_subspace_coreset(const WeightedPointSet& points, double a,
                                    std::uint64_t rng_seed,
                                    CollapseOutput output = CollapseOutput::Weighted);

/// Σᵢ wᵢ·f₀(qᵢ, S).
double weighted_cost_of_coreset(const Coreset& coreset, const SubspaceSet& set);

/// Accuracy parameters of a collapse coreset: with a pilot solution that is
/// an α-approximation and threshold ε·cost(pilot), the relative cost error
/// is at most ε' = (1/ψ + 2ψ)·ε·α + 2ψ.
struct CoresetQualityParams {
  double epsilon = 0.1;
  double alpha = 1.0;
  double psi = 0.5;
  Index m_star = 0;  // observed iteration count

  double epsilon_prime() const;
  void validate() const;
};

struct FixedSizeResult {
  Coreset coreset;
  CollapseResult collapse;
  bool reduced_by_cnw = false;
  Index target_size = 0;
};

/// ⌈4k/ε²⌉.
Index fixed_size_bound(Index k, double epsilon);

/// Collapse with threshold (ε/2)·opt_estimate, then reduce the weighted
/// representatives with CNW(k, ε/2) when they exceed ⌈4k/ε²⌉ rows.
/// For ε/2 above kMaxCnwEpsilon the barrier steps use kMaxCnwEpsilon while
/// the iteration count stays ⌈4k/ε²⌉.
FixedSizeResult fixed_size_coreset_detailed(const WeightedPointSet& points, Index k, Index j,
                                            double epsilon, double opt_estimate,
                                            std::uint64_t rng_seed);

Coreset fixed_size_coreset(const WeightedPointSet& points, Index k, Index j, double epsilon,
                           double opt_estimate, std::uint64_t rng_seed);

}  // namespace pcoreset
