#pragma once

// Row-parallel inner loops. Every kernel exists twice with identical
// signatures: `serial` is the reference, `omp` splits rows across OpenMP
// threads. Both produce bit-identical output for any thread count; sums are
// reduced over fixed row blocks (Tolerances::reduction_block) in block order.

#include <span>

#include "pcoreset/distance.hpp"
#include "pcoreset/types.hpp"

namespace pcoreset::kernels {

/// Running minimum over members of a distance to every row. Rows whose
/// distance to `member` is strictly smaller than the current minimum are
/// reassigned, so ties keep the earlier member.
struct MinState {
  std::span<double> min_distance;
  std::span<Index> argmin;  // may be empty
};

namespace serial {

/// Σᵢ weights[i]·values[i] with compensated, block-ordered accumulation.
double weighted_sum(std::span<const double> weights, std::span<const double> values);

/// Folds distance f(p, y) for every row p into `state`.
void refresh_min(const WeightedPointSet& points, const Vector& y, Distance f, Index member,
                 MinState state);

/// Fused update for one new line through the origin with unit direction u:
/// f_ℓ minima go to `line_metric` (may be empty), point-to-line minima and
/// their argmin go to `to_line`.
void refresh_line(const WeightedPointSet& points, const Vector& u, Index member,
                  std::span<double> line_metric, MinState to_line);

/// Minimum f₀ distance of every row to the members of `set`.
void subspace_min(const WeightedPointSet& points, const SubspaceSet& set, MinState state);

/// Row quadratic forms of the barrier method: for B = A·M,
///   quad[i]   = bᵢ·aᵢ       (diagonal of A M Aᵀ)
///   square[i] = bᵢ G bᵢᵀ    (diagonal of (A M Aᵀ)²), G = AᵀA
/// `gram_diagonal` is used when G is diagonal, otherwise `bg` = B·G.
void barrier_quadratics(const DenseRows& a, const DenseRows& b, const Vector* gram_diagonal,
                        const DenseRows* bg, std::span<double> quad, std::span<double> square);

}  // namespace serial

namespace omp {

double weighted_sum(std::span<const double> weights, std::span<const double> values);
void refresh_min(const WeightedPointSet& points, const Vector& y, Distance f, Index member,
                 MinState state);
void refresh_line(const WeightedPointSet& points, const Vector& u, Index member,
                  std::span<double> line_metric, MinState to_line);
void subspace_min(const WeightedPointSet& points, const SubspaceSet& set, MinState state);
void barrier_quadratics(const DenseRows& a, const DenseRows& b, const Vector* gram_diagonal,
                        const DenseRows* bg, std::span<double> quad, std::span<double> square);

int max_threads();
void set_threads(int n);

}  // namespace omp

}  // namespace pcoreset::kernels
