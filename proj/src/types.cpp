#include "pcoreset/types.hpp"

#include <cmath>

#include "pcoreset/summation.hpp"

namespace pcoreset {

const Tolerances& tolerances() {
  static const Tolerances instance{};
  return instance;
}

namespace {

double sparse_row_dot(const SparseRows& m, Index i, const Eigen::Ref<const Vector>& v) {
  double acc = 0.0;
  for (SparseRows::InnerIterator it(m, i); it; ++it) acc += it.value() * v[it.col()];
  return acc;
}

}  // namespace

WeightedPointSet::WeightedPointSet(DenseRows points, Vector weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  validate_and_cache();
}

WeightedPointSet::WeightedPointSet(SparseRows points, Vector weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  std::get<SparseRows>(points_).makeCompressed();
  validate_and_cache();
}

WeightedPointSet WeightedPointSet::unit(DenseRows points) {
  Vector w = Vector::Ones(points.rows());
  return {std::move(points), std::move(w)};
}

WeightedPointSet WeightedPointSet::unit(SparseRows points) {
  Vector w = Vector::Ones(points.rows());
  return {std::move(points), std::move(w)};
}

void WeightedPointSet::validate_and_cache() {
  const Index rows = visit([](const auto& m) { return m.rows(); });
  if (rows != weights_.size()) {
    throw std::invalid_argument("WeightedPointSet: " + std::to_string(rows) + " rows but " +
                                std::to_string(weights_.size()) + " weights");
  }
  bool any_positive = false;
  for (Index i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument("WeightedPointSet: weight " + std::to_string(i) +
                                  " is negative or not finite");
    }
    any_positive = any_positive || w > 0.0;
  }
  if (rows > 0 && !any_positive) {
    throw std::invalid_argument("WeightedPointSet: all weights are zero");
  }
  squared_norms_.resize(rows);
  visit([&](const auto& m) {
    using M = std::decay_t<decltype(m)>;
    if constexpr (std::is_same_v<M, DenseRows>) {
      if (!m.allFinite()) throw std::invalid_argument("WeightedPointSet: non-finite coordinate");
      squared_norms_ = m.rowwise().squaredNorm();
    } else {
      for (Index i = 0; i < m.rows(); ++i) {
        double acc = 0.0;
        for (SparseRows::InnerIterator it(m, i); it; ++it) {
          if (!std::isfinite(it.value())) {
            throw std::invalid_argument("WeightedPointSet: non-finite coordinate");
          }
          acc += it.value() * it.value();
        }
        squared_norms_[i] = acc;
      }
    }
  });
}

Index WeightedPointSet::dim() const {
  return visit([](const auto& m) { return m.cols(); });
}

StorageKind WeightedPointSet::storage() const {
  return std::holds_alternative<DenseRows>(points_) ? StorageKind::Dense
                                                    : StorageKind::SparseRows;
}

double WeightedPointSet::total_weight() const {
  return compensated_sum(std::span<const double>(weights_.data(), weights_.size()));
}

const DenseRows& WeightedPointSet::dense() const {
  if (const auto* m = std::get_if<DenseRows>(&points_)) return *m;
  throw std::logic_error("WeightedPointSet: dense() on sparse storage");
}

const SparseRows& WeightedPointSet::sparse() const {
  if (const auto* m = std::get_if<SparseRows>(&points_)) return *m;
  throw std::logic_error("WeightedPointSet: sparse() on dense storage");
}

double WeightedPointSet::row_dot(Index i, const Eigen::Ref<const Vector>& v) const {
  if (const auto* m = std::get_if<DenseRows>(&points_)) return m->row(i).dot(v.transpose());
  return sparse_row_dot(std::get<SparseRows>(points_), i, v);
}

Vector WeightedPointSet::row(Index i) const {
  if (const auto* m = std::get_if<DenseRows>(&points_)) return m->row(i).transpose();
  const auto& s = std::get<SparseRows>(points_);
  Vector out = Vector::Zero(s.cols());
  for (SparseRows::InnerIterator it(s, i); it; ++it) out[it.col()] = it.value();
  return out;
}

DenseRows WeightedPointSet::to_dense() const {
  if (const auto* m = std::get_if<DenseRows>(&points_)) return *m;
  return DenseRows(std::get<SparseRows>(points_));
}

DenseRows WeightedPointSet::materialize() const {
  DenseRows out = to_dense();
  for (Index i = 0; i < out.rows(); ++i) out.row(i) *= std::sqrt(weights_[i]);
  return out;
}

WeightedPointSet WeightedPointSet::subset(std::span<const Index> rows) const {
  Vector w(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) w[static_cast<Index>(r)] = weights_[rows[r]];
  if (const auto* m = std::get_if<DenseRows>(&points_)) {
    DenseRows out(static_cast<Index>(rows.size()), m->cols());
    for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = m->row(rows[r]);
    return {std::move(out), std::move(w)};
  }
  const auto& s = std::get<SparseRows>(points_);
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (SparseRows::InnerIterator it(s, rows[r]); it; ++it) {
      trip.emplace_back(static_cast<Index>(r), it.col(), it.value());
    }
  }
  SparseRows out(static_cast<Index>(rows.size()), s.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return {std::move(out), std::move(w)};
}

WeightedPointSet WeightedPointSet::slice(Index begin, Index count) const {
  std::vector<Index> rows(static_cast<std::size_t>(count));
  for (Index r = 0; r < count; ++r) rows[static_cast<std::size_t>(r)] = begin + r;
  return subset(rows);
}

WeightedPointSet WeightedPointSet::with_weights(Vector weights) const {
  return visit([&](const auto& m) { return WeightedPointSet(m, std::move(weights)); });
}

Index WeightedPointSet::count_zero_rows() const {
  return (squared_norms_.array() == 0.0).count();
}

WeightedPointSet concat(const WeightedPointSet& top, const WeightedPointSet& bottom) {
  if (top.empty()) return bottom;
  if (bottom.empty()) return top;
  if (top.dim() != bottom.dim()) throw std::invalid_argument("concat: dimension mismatch");
  Vector w(top.size() + bottom.size());
  w << top.weights(), bottom.weights();
  if (top.is_sparse() && bottom.is_sparse()) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(top.sparse().nonZeros() + bottom.sparse().nonZeros()));
    for (Index i = 0; i < top.size(); ++i)
      for (SparseRows::InnerIterator it(top.sparse(), i); it; ++it)
        trip.emplace_back(i, it.col(), it.value());
    for (Index i = 0; i < bottom.size(); ++i)
      for (SparseRows::InnerIterator it(bottom.sparse(), i); it; ++it)
        trip.emplace_back(top.size() + i, it.col(), it.value());
    SparseRows out(top.size() + bottom.size(), top.dim());
    out.setFromTriplets(trip.begin(), trip.end());
    return {std::move(out), std::move(w)};
  }
  DenseRows out(top.size() + bottom.size(), top.dim());
  out.topRows(top.size()) = top.to_dense();
  out.bottomRows(bottom.size()) = bottom.to_dense();
  return {std::move(out), std::move(w)};
}

ZeroRowFilter drop_zero_rows(const WeightedPointSet& points) {
  ZeroRowFilter result;
  for (Index i = 0; i < points.size(); ++i) {
    if (points.squared_norms()[i] > 0.0) result.kept.push_back(i);
  }
  result.dropped = points.size() - static_cast<Index>(result.kept.size());
  if (result.kept.empty()) {
    result.points = WeightedPointSet(DenseRows(0, points.dim()), Vector(0));
  } else if (result.dropped == 0) {
    result.points = points;
  } else {
    result.points = points.subset(result.kept);
  }
  return result;
}

Line::Line(Vector direction) : direction_(std::move(direction)) {
  if (std::abs(direction_.norm() - 1.0) > tolerances().unit_norm) {
    throw std::invalid_argument("Line: direction is not a unit vector");
  }
}

Line Line::through(const Eigen::Ref<const Vector>& p) {
  const double norm = p.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("Line: zero point has no direction");
  return Line(p / norm);
}

Subspace::Subspace(Matrix basis) : basis_(std::move(basis)) {
  if (basis_.cols() < 1 || basis_.cols() > basis_.rows()) {
    throw std::invalid_argument("Subspace: need 1 <= j <= d");
  }
  const Matrix gram = basis_.transpose() * basis_;
  const double err = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (err > tolerances().orthonormality) {
    throw std::invalid_argument("Subspace: basis is not orthonormal");
  }
}

Subspace Subspace::from_line(const Line& line) {
  return Subspace(Matrix(line.direction()));
}

Subspace Subspace::spanned_by(const Matrix& spanning) {
  Eigen::HouseholderQR<Matrix> qr(spanning);
  Matrix q = qr.householderQ() * Matrix::Identity(spanning.rows(), spanning.cols());
  return Subspace(std::move(q));
}

SubspaceSet::SubspaceSet(std::vector<Subspace> members) : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("SubspaceSet: need k >= 1");
  for (const auto& s : members_) {
    if (s.rank() != members_.front().rank() || s.dim() != members_.front().dim()) {
      throw std::invalid_argument("SubspaceSet: members differ in j or d");
    }
  }
}

SubspaceSet SubspaceSet::from_lines(std::span<const Line> lines) {
  std::vector<Subspace> members;
  members.reserve(lines.size());
  for (const auto& l : lines) members.push_back(Subspace::from_line(l));
  return SubspaceSet(std::move(members));
}

std::string to_string(CoresetSource source) {
  switch (source) {
    case CoresetSource::LineCollapse: return "line_collapse";
    case CoresetSource::CNW: return "cnw";
    case CoresetSource::Uniform: return "uniform";
    case CoresetSource::Composed: return "composed";
    case CoresetSource::Identity: return "identity";
  }
  return "unknown";
}

DenseRows Coreset::materialize() const {
  DenseRows out = representatives;
  for (Index i = 0; i < out.rows(); ++i) out.row(i) *= std::sqrt(scale_weights[i]);
  return out;
}

WeightedPointSet Coreset::as_point_set() const {
  return {representatives, scale_weights};
}

Coreset Coreset::from_point_set(const WeightedPointSet& points, CoresetSource source,
                                CoresetParams params) {
  Coreset c;
  c.representatives = points.to_dense();
  c.scale_weights = points.weights();
  c.source = source;
  c.params = params;
  return c;
}

RhoMetricParams RhoMetricParams::from_exponent(double r, double psi) {
  if (!(r > 0.0)) throw std::invalid_argument("RhoMetricParams: r must be positive");
  RhoMetricParams p;
  p.r = r;
  p.rho = std::max(std::pow(2.0, r - 1.0), 1.0);
  if (r > 1.0) {
    if (!(psi > 0.0 && psi < r - 1.0)) {
      throw std::invalid_argument("RhoMetricParams: psi must lie in (0, r-1)");
    }
    p.psi = psi;
    p.phi = std::pow((r - 1.0) / psi, r - 1.0);
  } else {
    p.psi = 0.0;
    p.phi = 1.0;
  }
  return p;
}

double RhoMetricParams::point_coefficient() const { return phi + psi * rho; }

double RhoMetricParams::min_coefficient() const { return psi * rho; }

}  // namespace pcoreset
