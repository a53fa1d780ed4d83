#pragma once

#include "pcoreset/types.hpp"

namespace pcoreset {

/// Pairwise distance used by seeding, partitioning and brute-force optima.
///  - SquaredEuclidean: f₀(p, q) = ‖p - q‖²
///  - LineMetric:       f_ℓ(p, q) = min{‖p̂ - q̂‖², ‖p̂ + q̂‖²}
///  - PointToLine:      f₀(p, span(q)) = ‖p‖² - (p·q̂)²
enum class Distance { SquaredEuclidean, LineMetric, PointToLine };

std::string to_string(Distance f);

double f0(const Eigen::Ref<const Vector>& p, const Eigen::Ref<const Vector>& q);

/// Throws std::invalid_argument when either input is zero.
double f_ell(const Eigen::Ref<const Vector>& p, const Eigen::Ref<const Vector>& q);

double dist_point_to_line(const Eigen::Ref<const Vector>& p, const Line& line);

double dist_point_to_subspace(const Eigen::Ref<const Vector>& p, const Subspace& s);

double dist_point_to_set(const Eigen::Ref<const Vector>& p, const SubspaceSet& set);

double distance(Distance f, const Eigen::Ref<const Vector>& p, const Eigen::Ref<const Vector>& q);

}  // namespace pcoreset
