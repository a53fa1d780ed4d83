#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kernels_rows.hpp"

namespace pcoreset::kernels::omp {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(std::max(n, 1));
#else
  (void)n;
#endif
}

double weighted_sum(std::span<const double> weights, std::span<const double> values) {
  if (weights.size() != values.size()) throw std::invalid_argument("weighted_sum: size mismatch");
  const auto block = static_cast<std::size_t>(tolerances().reduction_block);
  const auto blocks = static_cast<std::ptrdiff_t>((values.size() + block - 1) / block);
  std::vector<double> partial(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * block;
    const std::size_t end = std::min(values.size(), begin + block);
    partial[static_cast<std::size_t>(b)] = rows::block_weighted_sum(weights, values, begin, end);
  }
  CompensatedSum total;
  for (double p : partial) total.add(p);
  return total.value();
}

void refresh_min(const WeightedPointSet& points, const Vector& y, Distance f, Index member,
                 MinState state) {
  rows::validate_min_state(points, state);
  if (y.size() != points.dim()) throw std::invalid_argument("refresh_min: dimension mismatch");
  const rows::Target target = rows::prepare(y, f);
  const Vector& sq = points.squared_norms();
  points.visit([&](const auto& m) {
    const Index n = m.rows();
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) {
      rows::fold(state, i, rows::target_distance(m, i, target, sq[i]), member);
    }
  });
}

void refresh_line(const WeightedPointSet& points, const Vector& u, Index member,
                  std::span<double> line_metric, MinState to_line) {
  rows::validate_min_state(points, to_line);
  const Vector& sq = points.squared_norms();
  points.visit([&](const auto& m) {
    const Index n = m.rows();
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) {
      const double dot = rows::dot(m, i, u);
      if (!line_metric.empty()) {
        auto& slot = line_metric[static_cast<std::size_t>(i)];
        slot = std::min(slot, rows::line_metric(dot, sq[i]));
      }
      rows::fold(to_line, i, rows::to_line(dot, sq[i]), member);
    }
  });
}

void subspace_min(const WeightedPointSet& points, const SubspaceSet& set, MinState state) {
  rows::validate_min_state(points, state);
  if (set.dim() != points.dim()) throw std::invalid_argument("subspace_min: dimension mismatch");
  const Vector& sq = points.squared_norms();
  points.visit([&](const auto& m) {
    const Index n = m.rows();
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) {
      for (Index s = 0; s < set.k(); ++s) {
        const double d = rows::subspace_distance(m, i, set.members()[static_cast<std::size_t>(s)].basis(), sq[i]);
        rows::fold(state, i, d, s);
      }
    }
  });
}

void barrier_quadratics(const DenseRows& a, const DenseRows& b, const Vector* gram_diagonal,
                        const DenseRows* bg, std::span<double> quad, std::span<double> square) {
  const Index n = a.rows();
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    quad[static_cast<std::size_t>(i)] = b.row(i).dot(a.row(i));
    square[static_cast<std::size_t>(i)] =
        gram_diagonal ? (b.row(i).array().square() * gram_diagonal->transpose().array()).sum()
                      : bg->row(i).dot(b.row(i));
  }
}

}  // namespace pcoreset::kernels::omp
