#pragma once

// Per-row operations shared by the serial and OpenMP kernels so both paths
// execute the same floating-point sequence for every row.

#include <algorithm>
#include <cmath>

#include "pcoreset/kernels.hpp"
#include "pcoreset/summation.hpp"

namespace pcoreset::kernels::rows {

template <class V>
inline double dot(const DenseRows& m, Index i, const V& v) {
  return m.row(i).dot(v.transpose());
}

template <class V>
inline double dot(const SparseRows& m, Index i, const V& v) {
  double acc = 0.0;
  for (SparseRows::InnerIterator it(m, i); it; ++it) acc += it.value() * v[it.col()];
  return acc;
}

inline double squared_distance(const DenseRows& m, Index i, const Vector& y, double, double) {
  return (m.row(i) - y.transpose()).squaredNorm();
}

inline double squared_distance(const SparseRows& m, Index i, const Vector& y, double row_sq,
                               double y_sq) {
  return std::max(row_sq + y_sq - 2.0 * dot(m, i, y), 0.0);
}

/// 2 - 2|p̂·û| for a unit u, clamped against roundoff.
inline double line_metric(double dot_with_unit, double row_sq) {
  return std::max(2.0 - 2.0 * std::abs(dot_with_unit) / std::sqrt(row_sq), 0.0);
}

inline double to_line(double dot_with_unit, double row_sq) {
  return std::max(row_sq - dot_with_unit * dot_with_unit, 0.0);
}

inline void fold(MinState& s, Index i, double d, Index member) {
  if (d < s.min_distance[static_cast<std::size_t>(i)]) {
    s.min_distance[static_cast<std::size_t>(i)] = d;
    if (!s.argmin.empty()) s.argmin[static_cast<std::size_t>(i)] = member;
  }
}

/// Prepared form of a distance target: unit direction for the line metrics.
struct Target {
  Distance f;
  Vector y;
  double y_sq = 0.0;
};

inline Target prepare(const Vector& y, Distance f) {
  Target t{f, y, y.squaredNorm()};
  if (f != Distance::SquaredEuclidean) {
    if (!(t.y_sq > 0.0)) throw std::invalid_argument("line distance to a zero point");
    t.y = y / std::sqrt(t.y_sq);
  }
  return t;
}

template <class M>
inline double target_distance(const M& m, Index i, const Target& t, double row_sq) {
  switch (t.f) {
    case Distance::SquaredEuclidean: return squared_distance(m, i, t.y, row_sq, t.y_sq);
    case Distance::LineMetric: return line_metric(dot(m, i, t.y), row_sq);
    case Distance::PointToLine: return to_line(dot(m, i, t.y), row_sq);
  }
  return 0.0;
}

template <class M>
inline double subspace_distance(const M& m, Index i, const Matrix& basis, double row_sq) {
  double captured = 0.0;
  for (Index c = 0; c < basis.cols(); ++c) {
    const double d = dot(m, i, basis.col(c));
    captured += d * d;
  }
  return std::max(row_sq - captured, 0.0);
}

inline double block_weighted_sum(std::span<const double> w, std::span<const double> v,
                                 std::size_t begin, std::size_t end) {
  CompensatedSum acc;
  for (std::size_t i = begin; i < end; ++i) acc.add(w[i] * v[i]);
  return acc.value();
}

inline void validate_min_state(const WeightedPointSet& points, const MinState& s) {
  if (static_cast<Index>(s.min_distance.size()) != points.size() ||
      (!s.argmin.empty() && static_cast<Index>(s.argmin.size()) != points.size())) {
    throw std::invalid_argument("kernel: state size does not match point count");
  }
}

}  // namespace pcoreset::kernels::rows
