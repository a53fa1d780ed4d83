#include "pcoreset/distance.hpp"

#include <algorithm>
#include <cmath>

namespace pcoreset {

namespace {

void require_same_dim(Index a, Index b) {
  if (a != b) {
    throw std::invalid_argument("dimension mismatch: " + std::to_string(a) + " vs " +
                                std::to_string(b));
  }
}

}  // namespace

std::string to_string(Distance f) {
  switch (f) {
    case Distance::SquaredEuclidean: return "f0";
    case Distance::LineMetric: return "f_ell";
    case Distance::PointToLine: return "f0_line";
  }
  return "unknown";
}

double f0(const Eigen::Ref<const Vector>& p, const Eigen::Ref<const Vector>& q) {
  require_same_dim(p.size(), q.size());
  return (p - q).squaredNorm();
}

double f_ell(const Eigen::Ref<const Vector>& p, const Eigen::Ref<const Vector>& q) {
  require_same_dim(p.size(), q.size());
  const double np = p.norm();
  const double nq = q.norm();
  if (!(np > 0.0) || !(nq > 0.0)) throw std::invalid_argument("f_ell: zero-norm input");
  const Vector ph = p / np;
  const Vector qh = q / nq;
  return std::min((ph - qh).squaredNorm(), (ph + qh).squaredNorm());
}

double dist_point_to_line(const Eigen::Ref<const Vector>& p, const Line& line) {
  require_same_dim(p.size(), line.dim());
  const double dot = p.dot(line.direction());
  return std::max(p.squaredNorm() - dot * dot, 0.0);
}

double dist_point_to_subspace(const Eigen::Ref<const Vector>& p, const Subspace& s) {
  require_same_dim(p.size(), s.dim());
  const double captured = (s.basis().transpose() * p).squaredNorm();
  return std::max(p.squaredNorm() - captured, 0.0);
}

double dist_point_to_set(const Eigen::Ref<const Vector>& p, const SubspaceSet& set) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : set.members()) best = std::min(best, dist_point_to_subspace(p, s));
  return best;
}

double distance(Distance f, const Eigen::Ref<const Vector>& p, const Eigen::Ref<const Vector>& q) {
  switch (f) {
    case Distance::SquaredEuclidean: return f0(p, q);
    case Distance::LineMetric: return f_ell(p, q);
    case Distance::PointToLine: return dist_point_to_line(p, Line::through(q));
  }
  throw std::invalid_argument("distance: unknown kind");
}

}  // namespace pcoreset
