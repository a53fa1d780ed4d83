#pragma once

#include <span>
#include <vector>

#include "pcoreset/distance.hpp"
#include "pcoreset/types.hpp"

namespace pcoreset {

/// Σ w(p)·f₀(p, X) for a set of subspaces.
double cost(const WeightedPointSet& points, const SubspaceSet& set);

/// Σ w(p)·f₀(p, L) over lines through the origin; an empty set costs Σ w(p)
/// (f(p, ∅) = 1).
double cost(const WeightedPointSet& points, std::span<const Line> lines);

/// Σ w(p)·min_x f(p, x) over explicit centers; an empty set costs Σ w(p).
double cost(const WeightedPointSet& points, std::span<const Vector> centers, Distance f);

/// Assignment of every point to its nearest member plus the induced cells.
/// Ties go to the lowest member index.
struct Partition {
  std::vector<Index> assignment;
  std::vector<std::vector<Index>> cells;
};

Partition partition_over(const WeightedPointSet& points, std::span<const Line> lines);
Partition partition_over(const WeightedPointSet& points, std::span<const Vector> centers,
                         Distance f);

struct DiscreteOptimum {
  double value = 0.0;
  std::vector<Index> chosen;  // row indices, increasing
};

/// Exact min over k-subsets X of the input rows of Σ w(p)·f(p, X).
/// Enumeration is limited to n <= 25 and k <= 3.
DiscreteOptimum brute_force_opt(const WeightedPointSet& points, Index k, Distance f);

inline constexpr Index kBruteForceMaxPoints = 25;
inline constexpr Index kBruteForceMaxK = 3;

/// Optimal cost of one j-dimensional subspace: squared singular values of the
/// √w-scaled matrix beyond the top j.
double opt_single_subspace(const WeightedPointSet& points, Index j);

/// Span of the top-j right singular vectors of the √w-scaled matrix.
Subspace best_subspace(const WeightedPointSet& points, Index j);

}  // namespace pcoreset
