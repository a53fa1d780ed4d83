#include "pcoreset/cost.hpp"

#include <algorithm>
#include <limits>

#include <Eigen/SVD>

#include "pcoreset/kernels.hpp"
#include "pcoreset/summation.hpp"

namespace pcoreset {

namespace {

std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

double weighted_total(const WeightedPointSet& points, const std::vector<double>& d) {
  return kernels::omp::weighted_sum(as_span(points.weights()), d);
}

Partition cells_from(std::vector<Index> assignment, std::size_t members) {
  Partition p;
  p.cells.resize(members);
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    p.cells[static_cast<std::size_t>(assignment[i])].push_back(static_cast<Index>(i));
  }
  p.assignment = std::move(assignment);
  return p;
}

struct MinBuffers {
  std::vector<double> dist;
  std::vector<Index> arg;
  explicit MinBuffers(Index n)
      : dist(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity()),
        arg(static_cast<std::size_t>(n), 0) {}
  kernels::MinState state() { return {dist, arg}; }
};

MinBuffers line_minima(const WeightedPointSet& points, std::span<const Line> lines) {
  MinBuffers buf(points.size());
  for (std::size_t m = 0; m < lines.size(); ++m) {
    if (lines[m].dim() != points.dim()) throw std::invalid_argument("cost: dimension mismatch");
    kernels::omp::refresh_line(points, lines[m].direction(), static_cast<Index>(m), {},
                               buf.state());
  }
  return buf;
}

MinBuffers center_minima(const WeightedPointSet& points, std::span<const Vector> centers,
                         Distance f) {
  MinBuffers buf(points.size());
  for (std::size_t m = 0; m < centers.size(); ++m) {
    kernels::omp::refresh_min(points, centers[m], f, static_cast<Index>(m), buf.state());
  }
  return buf;
}

}  // namespace

double cost(const WeightedPointSet& points, const SubspaceSet& set) {
  MinBuffers buf(points.size());
  kernels::omp::subspace_min(points, set, buf.state());
  return weighted_total(points, buf.dist);
}

double cost(const WeightedPointSet& points, std::span<const Line> lines) {
  if (lines.empty()) return points.total_weight();
  return weighted_total(points, line_minima(points, lines).dist);
}

double cost(const WeightedPointSet& points, std::span<const Vector> centers, Distance f) {
  if (centers.empty()) return points.total_weight();
  return weighted_total(points, center_minima(points, centers, f).dist);
}

Partition partition_over(const WeightedPointSet& points, std::span<const Line> lines) {
  if (lines.empty()) throw std::invalid_argument("partition_over: empty member set");
  return cells_from(line_minima(points, lines).arg, lines.size());
}

Partition partition_over(const WeightedPointSet& points, std::span<const Vector> centers,
                         Distance f) {
  if (centers.empty()) throw std::invalid_argument("partition_over: empty member set");
  return cells_from(center_minima(points, centers, f).arg, centers.size());
}

DiscreteOptimum brute_force_opt(const WeightedPointSet& points, Index k, Distance f) {
  const Index n = points.size();
  if (k < 1 || k > n) throw std::invalid_argument("brute_force_opt: k out of range");
  if (n > kBruteForceMaxPoints || k > kBruteForceMaxK) {
    throw std::invalid_argument("brute_force_opt: instance too large for enumeration");
  }
  // table(p, q) = f(p, row q)
  const DenseRows rows = points.to_dense();
  Matrix table(n, n);
  for (Index p = 0; p < n; ++p)
    for (Index q = 0; q < n; ++q) table(p, q) = distance(f, rows.row(p), rows.row(q));

  std::vector<bool> mask(static_cast<std::size_t>(n), false);
  std::fill(mask.begin(), mask.begin() + k, true);
  DiscreteOptimum best;
  best.value = std::numeric_limits<double>::infinity();
  std::vector<Index> chosen;
  do {
    chosen.clear();
    for (Index i = 0; i < n; ++i)
      if (mask[static_cast<std::size_t>(i)]) chosen.push_back(i);
    CompensatedSum total;
    for (Index p = 0; p < n; ++p) {
      double d = std::numeric_limits<double>::infinity();
      for (Index c : chosen) d = std::min(d, table(p, c));
      total.add(points.weight(p) * d);
    }
    if (total.value() < best.value) {
      best.value = total.value();
      best.chosen = chosen;
    }
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

double opt_single_subspace(const WeightedPointSet& points, Index j) {
  if (j < 1 || j > points.dim()) throw std::invalid_argument("opt_single_subspace: j out of range");
  const Matrix a = points.materialize();
  Eigen::BDCSVD<Matrix> svd(a);
  const Vector& s = svd.singularValues();
  CompensatedSum tail;
  for (Index i = j; i < s.size(); ++i) tail.add(s[i] * s[i]);
  return tail.value();
}

Subspace best_subspace(const WeightedPointSet& points, Index j) {
  if (j < 1 || j > points.dim()) throw std::invalid_argument("best_subspace: j out of range");
  const Matrix a = points.materialize();
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinV);
  Matrix v = svd.matrixV();
  if (v.cols() < j) {
    // fewer rows than j: complete with the orthogonal complement of span(V)
    Eigen::HouseholderQR<Matrix> qr(v);
    const Matrix q = qr.householderQ() * Matrix::Identity(points.dim(), j);
    return Subspace(q);
  }
  return Subspace(v.leftCols(j));
}

}  // namespace pcoreset
