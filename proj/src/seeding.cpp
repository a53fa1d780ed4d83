#include "pcoreset/seeding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pcoreset/kernels.hpp"

namespace pcoreset {

void SeedingConfig::validate() const {
  if (t < 0) throw std::invalid_argument("SeedingConfig: t must be >= 0");
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("SeedingConfig: delta must be in (0, 1]");
}

AdaptiveSampler::AdaptiveSampler(const WeightedPointSet& points, Distance f,
                                 std::uint64_t rng_seed, bool track_lines)
    : points_(points),
      f_(f),
      track_lines_(track_lines),
      rng_(rng_seed),
      distance_(static_cast<std::size_t>(points.size()), 1.0),
      prefix_(static_cast<std::size_t>(points.size())),
      is_chosen_(static_cast<std::size_t>(points.size()), 0) {
  if ((f != Distance::SquaredEuclidean || track_lines) && points.count_zero_rows() > 0) {
    throw std::invalid_argument("AdaptiveSampler: " + std::to_string(points.count_zero_rows()) +
                                " zero rows; line distances are undefined at the origin");
  }
  if (track_lines) {
    line_dist_.assign(static_cast<std::size_t>(points.size()),
                      std::numeric_limits<double>::infinity());
    line_arg_.assign(static_cast<std::size_t>(points.size()), 0);
  }
}

Index AdaptiveSampler::draw() {
  const Index n = points_.size();
  if (static_cast<Index>(chosen_.size()) >= n) {
    throw std::invalid_argument("AdaptiveSampler: every point is already a seed");
  }
  const Vector& w = points_.weights();
  double running = 0.0;
  for (Index i = 0; i < n; ++i) {
    running += w[i] * distance_[static_cast<std::size_t>(i)];
    prefix_[static_cast<std::size_t>(i)] = running;
  }
  stats_.rows_touched += n;
  ++stats_.rounds;
  if (running > 0.0 && std::isfinite(running)) {
    const double u = rng_.uniform01() * running;
    auto it = std::upper_bound(prefix_.begin(), prefix_.end(), u);
    if (it == prefix_.end()) {
      // u rounded up to the total: take the last row carrying mass
      Index i = n - 1;
      while (i > 0 && prefix_[static_cast<std::size_t>(i)] == prefix_[static_cast<std::size_t>(i - 1)]) --i;
      return i;
    }
    return static_cast<Index>(it - prefix_.begin());
  }
  ++stats_.uniform_fallbacks;
  const auto remaining = static_cast<std::uint64_t>(n - static_cast<Index>(chosen_.size()));
  std::uint64_t pick = rng_.index(remaining);
  for (Index i = 0; i < n; ++i) {
    if (is_chosen_[static_cast<std::size_t>(i)]) continue;
    if (pick-- == 0) return i;
  }
  throw std::logic_error("AdaptiveSampler: uniform fallback ran past the end");
}

void AdaptiveSampler::add(Index row) {
  if (row < 0 || row >= points_.size()) throw std::out_of_range("AdaptiveSampler::add: bad row");
  const Vector y = points_.row(row);
  const auto member = static_cast<Index>(chosen_.size());
  if (chosen_.empty()) std::fill(distance_.begin(), distance_.end(), std::numeric_limits<double>::infinity());
  if (f_ == Distance::LineMetric && track_lines_) {
    const Vector u = y / std::sqrt(points_.squared_norms()[row]);
    kernels::omp::refresh_line(points_, u, member, distance_, {line_dist_, line_arg_});
  } else {
    kernels::omp::refresh_min(points_, y, f_, member, {distance_, {}});
    if (track_lines_) {
      const Vector u = y / std::sqrt(points_.squared_norms()[row]);
      kernels::omp::refresh_line(points_, u, member, {}, {line_dist_, line_arg_});
    }
  }
  stats_.rows_touched += points_.size();
  distance_[static_cast<std::size_t>(row)] = 0.0;
  is_chosen_[static_cast<std::size_t>(row)] = 1;
  chosen_.push_back(row);
}

double AdaptiveSampler::line_cost() const {
  if (!track_lines_) throw std::logic_error("AdaptiveSampler: line tracking disabled");
  if (chosen_.empty()) return points_.total_weight();
  const Vector& w = points_.weights();
  return kernels::omp::weighted_sum({w.data(), static_cast<std::size_t>(w.size())}, line_dist_);
}

std::vector<Index> k_line_means(const WeightedPointSet& points, std::span<const Index> initial,
                                Index t, Distance f, std::uint64_t rng_seed, SeedingStats* stats) {
  const auto x = static_cast<Index>(initial.size());
  if (t < 0 || t > points.size() - x) {
    throw std::invalid_argument("k_line_means: t must lie in [0, n - |X|]");
  }
  AdaptiveSampler sampler(points, f, rng_seed);
  for (Index i : initial) sampler.add(i);
  for (Index round = 0; round < t; ++round) sampler.draw_and_add();
  if (stats) *stats = sampler.stats();
  return sampler.chosen();
}

std::vector<Index> k_line_means_pp(const WeightedPointSet& points,
                                   std::span<const Index> initial, Index t,
                                   std::uint64_t rng_seed, SeedingStats* stats) {
  return k_line_means(points, initial, t, Distance::LineMetric, rng_seed, stats);
}

std::vector<Line> lines_from_seeds(std::span<const Vector> seeds) {
  std::vector<Line> lines;
  lines.reserve(seeds.size());
  for (const auto& s : seeds) lines.push_back(Line::through(s));
  return lines;
}

std::vector<Line> lines_from_seeds(const WeightedPointSet& points, std::span<const Index> seeds) {
  std::vector<Line> lines;
  lines.reserve(seeds.size());
  for (Index i : seeds) lines.push_back(Line::through(points.row(i)));
  return lines;
}

double line_seeding_bound(double delta, Index k) {
  return 1024.0 / (delta * delta) * (1.0 + std::log(static_cast<double>(k)));
}

}  // namespace pcoreset
