#include "pcoreset/coreset.hpp"

#include <cmath>

#include "pcoreset/seeding.hpp"
#include "pcoreset/summation.hpp"

namespace pcoreset {

CollapseResult k_j_subspace_coreset(const WeightedPointSet& points, double a,
                                    std::uint64_t rng_seed, CollapseOutput output) {
  if (!(a > 0.0)) throw std::invalid_argument("k_j_subspace_coreset: threshold must be positive");
  if (points.empty()) throw std::invalid_argument("k_j_subspace_coreset: empty input");

  AdaptiveSampler sampler(points, Distance::LineMetric, rng_seed, /*track_lines=*/true);
  CollapseResult result;
  result.threshold = a;
  sampler.draw_and_add();
  double current = sampler.line_cost();
  result.cost_trace.push_back(current);
  while (a <= current && static_cast<Index>(sampler.chosen().size()) < points.size()) {
    sampler.draw_and_add();
    current = sampler.line_cost();
    result.cost_trace.push_back(current);
  }
  result.seeds = sampler.chosen();
  result.iterations = static_cast<Index>(result.seeds.size());
  result.final_cost = current;

  const auto assignment = sampler.line_assignment();
  result.cell_of.assign(assignment.begin(), assignment.end());
  std::vector<CompensatedSum> mass(result.seeds.size());
  for (Index p = 0; p < points.size(); ++p) {
    mass[static_cast<std::size_t>(assignment[static_cast<std::size_t>(p)])].add(points.weight(p));
  }
  for (std::size_t c = 0; c < mass.size(); ++c) {
    if (mass[c].value() > 0.0) result.kept_cells.push_back(static_cast<Index>(c));
  }

  const auto m = static_cast<Index>(result.kept_cells.size());
  Coreset& out = result.weighted_coreset;
  out.representatives.resize(m, points.dim());
  out.scale_weights.resize(m);
  for (Index r = 0; r < m; ++r) {
    const auto cell = static_cast<std::size_t>(result.kept_cells[static_cast<std::size_t>(r)]);
    const double u = mass[cell].value();
    const Vector seed = points.row(result.seeds[cell]);
    if (output == CollapseOutput::Weighted) {
      out.representatives.row(r) = seed.transpose();
      out.scale_weights[r] = u;
    } else {
      out.representatives.row(r) = u * seed.transpose();
      out.scale_weights[r] = 1.0;
    }
  }
  out.source = CoresetSource::LineCollapse;
  out.params = {0, 1, a, rng_seed};
  return result;
}

double weighted_cost_of_coreset(const Coreset& coreset, const SubspaceSet& set) {
  if (coreset.size() == 0) return 0.0;
  return cost(coreset.as_point_set(), set);
}

double CoresetQualityParams::epsilon_prime() const {
  return (1.0 / psi + 2.0 * psi) * epsilon * alpha + 2.0 * psi;
}

void CoresetQualityParams::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("CoresetQualityParams: epsilon must be > 0");
  if (!(alpha >= 1.0)) throw std::invalid_argument("CoresetQualityParams: alpha must be >= 1");
  if (!(psi > 0.0 && psi < 1.0)) throw std::invalid_argument("CoresetQualityParams: psi must lie in (0, 1)");
}

Index fixed_size_bound(Index k, double epsilon) {
  return cnw_size(4 * k, epsilon);
}

FixedSizeResult fixed_size_coreset_detailed(const WeightedPointSet& points, Index k, Index j,
                                            double epsilon, double opt_estimate,
                                            std::uint64_t rng_seed) {
  if (k < 1) throw std::invalid_argument("fixed_size_coreset: k must be >= 1");
  if (j < 1 || j > points.dim()) throw std::invalid_argument("fixed_size_coreset: j out of range");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("fixed_size_coreset: epsilon must lie in (0, 1]");
  }
  if (!(opt_estimate > 0.0) || !std::isfinite(opt_estimate)) {
    throw std::invalid_argument("fixed_size_coreset: opt_estimate must be positive");
  }
  FixedSizeResult result;
  result.target_size = fixed_size_bound(k, epsilon);
  result.collapse = k_j_subspace_coreset(points, 0.5 * epsilon * opt_estimate, rng_seed);
  const Coreset& collapsed = result.collapse.weighted_coreset;
  if (collapsed.size() <= result.target_size) {
    result.coreset = collapsed;
  } else {
    CnwConfig config;
    config.k = k;
    config.epsilon = std::min(0.5 * epsilon, kMaxCnwEpsilon);
    config.iterations = result.target_size;
    result.coreset = cnw(collapsed.as_point_set(), config);
    result.reduced_by_cnw = true;
  }
  result.coreset.source = CoresetSource::Composed;
  result.coreset.params = {k, j, epsilon, rng_seed};
  return result;
}

Coreset fixed_size_coreset(const WeightedPointSet& points, Index k, Index j, double epsilon,
                           double opt_estimate, std::uint64_t rng_seed) {
  return fixed_size_coreset_detailed(points, k, j, epsilon, opt_estimate, rng_seed).coreset;
}

}  // namespace pcoreset
