#include "kernels_rows.hpp"

namespace pcoreset::kernels::serial {

double weighted_sum(std::span<const double> weights, std::span<const double> values) {
  if (weights.size() != values.size()) throw std::invalid_argument("weighted_sum: size mismatch");
  const auto block = static_cast<std::size_t>(tolerances().reduction_block);
  CompensatedSum total;
  for (std::size_t begin = 0; begin < values.size(); begin += block) {
    const std::size_t end = std::min(values.size(), begin + block);
    total.add(rows::block_weighted_sum(weights, values, begin, end));
  }
  return total.value();
}

void refresh_min(const WeightedPointSet& points, const Vector& y, Distance f, Index member,
                 MinState state) {
  rows::validate_min_state(points, state);
  if (y.size() != points.dim()) throw std::invalid_argument("refresh_min: dimension mismatch");
  const rows::Target target = rows::prepare(y, f);
  const Vector& sq = points.squared_norms();
  points.visit([&](const auto& m) {
    for (Index i = 0; i < m.rows(); ++i) {
      rows::fold(state, i, rows::target_distance(m, i, target, sq[i]), member);
    }
  });
}

void refresh_line(const WeightedPointSet& points, const Vector& u, Index member,
                  std::span<double> line_metric, MinState to_line) {
  rows::validate_min_state(points, to_line);
  const Vector& sq = points.squared_norms();
  points.visit([&](const auto& m) {
    for (Index i = 0; i < m.rows(); ++i) {
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
    for (Index i = 0; i < m.rows(); ++i) {
      for (Index s = 0; s < set.k(); ++s) {
        const double d = rows::subspace_distance(m, i, set.members()[static_cast<std::size_t>(s)].basis(), sq[i]);
        rows::fold(state, i, d, s);
      }
    }
  });
}

void barrier_quadratics(const DenseRows& a, const DenseRows& b, const Vector* gram_diagonal,
                        const DenseRows* bg, std::span<double> quad, std::span<double> square) {
  for (Index i = 0; i < a.rows(); ++i) {
    quad[static_cast<std::size_t>(i)] = b.row(i).dot(a.row(i));
    square[static_cast<std::size_t>(i)] =
        gram_diagonal ? (b.row(i).array().square() * gram_diagonal->transpose().array()).sum()
                      : bg->row(i).dot(b.row(i));
  }
}

}  // namespace pcoreset::kernels::serial
