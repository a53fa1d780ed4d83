#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace pcoreset {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using DenseRows = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Numeric tolerances shared by every module.
struct Tolerances {
  double unit_norm = 1e-12;       // |‖u‖ - 1| for a Line direction
  double orthonormality = 1e-10;  // per entry of BᵀB - I for a Subspace basis
  double relative_rank = 1e-12;   // singular values below this times σ₁ count as zero
  Index reduction_block = 1024;   // rows per block of a deterministic reduction
};

const Tolerances& tolerances();

enum class StorageKind { Dense, SparseRows };

/// n points in d dimensions with nonnegative weights. Immutable after
/// construction; squared row norms are cached.
class WeightedPointSet {
 public:
  WeightedPointSet() = default;
  WeightedPointSet(DenseRows points, Vector weights);
  WeightedPointSet(SparseRows points, Vector weights);

  static WeightedPointSet unit(DenseRows points);
  static WeightedPointSet unit(SparseRows points);

  Index size() const { return weights_.size(); }
  Index dim() const;
  bool empty() const { return size() == 0; }
  StorageKind storage() const;
  bool is_sparse() const { return storage() == StorageKind::SparseRows; }

  const Vector& weights() const { return weights_; }
  double weight(Index i) const { return weights_[i]; }
  double total_weight() const;
  const Vector& squared_norms() const { return squared_norms_; }

  const DenseRows& dense() const;
  const SparseRows& sparse() const;

  double row_dot(Index i, const Eigen::Ref<const Vector>& v) const;
  Vector row(Index i) const;
  DenseRows to_dense() const;
  /// Rows scaled by √w, so the result's Gram matrix is Σ w(p)·pᵀp.
  DenseRows materialize() const;

  WeightedPointSet subset(std::span<const Index> rows) const;
  WeightedPointSet slice(Index begin, Index count) const;
  WeightedPointSet with_weights(Vector weights) const;
  Index count_zero_rows() const;

  template <class Fn>
  decltype(auto) visit(Fn&& fn) const {
    return std::visit(std::forward<Fn>(fn), points_);
  }

 private:
  void validate_and_cache();

  std::variant<DenseRows, SparseRows> points_;
  Vector weights_;
  Vector squared_norms_;
};

/// Vertical concatenation; the result is sparse only when both inputs are.
WeightedPointSet concat(const WeightedPointSet& top, const WeightedPointSet& bottom);

struct ZeroRowFilter {
  WeightedPointSet points;
  Index dropped = 0;
  std::vector<Index> kept;  // original row index of every surviving row
};

ZeroRowFilter drop_zero_rows(const WeightedPointSet& points);

/// 1-dimensional subspace through the origin, stored as a unit direction.
/// u and -u denote the same line.
class Line {
 public:
  explicit Line(Vector direction);
  /// Line through the origin and p. Throws for p = 0.
  static Line through(const Eigen::Ref<const Vector>& p);

  const Vector& direction() const { return direction_; }
  Index dim() const { return direction_.size(); }

 private:
  Vector direction_;
};

/// j-dimensional subspace through the origin with an orthonormal d×j basis.
class Subspace {
 public:
  explicit Subspace(Matrix basis);
  static Subspace from_line(const Line& line);
  /// Orthonormalizes the columns of `spanning` (must have full column rank).
  static Subspace spanned_by(const Matrix& spanning);

  const Matrix& basis() const { return basis_; }
  Index dim() const { return basis_.rows(); }
  Index rank() const { return basis_.cols(); }

 private:
  Matrix basis_;
};

/// k subspaces of a common dimension j; distance to the set is the minimum
/// over members.
class SubspaceSet {
 public:
  explicit SubspaceSet(std::vector<Subspace> members);
  static SubspaceSet from_lines(std::span<const Line> lines);

  const std::vector<Subspace>& members() const { return members_; }
  Index k() const { return static_cast<Index>(members_.size()); }
  Index j() const { return members_.front().rank(); }
  Index dim() const { return members_.front().dim(); }

 private:
  std::vector<Subspace> members_;
};

enum class CoresetSource { LineCollapse, CNW, Uniform, Composed, Identity };

std::string to_string(CoresetSource source);

struct CoresetParams {
  Index k = 0;
  Index j = 0;
  double epsilon = 0.0;  // ε for CNW/Composed, threshold a for LineCollapse
  std::uint64_t seed = 0;
};

/// Weighted representatives. Quadratic costs are Σᵢ wᵢ·f₀(qᵢ, ·); the
/// matrix view scales row i by √wᵢ.
struct Coreset {
  DenseRows representatives;
  Vector scale_weights;
  CoresetSource source = CoresetSource::Identity;
  CoresetParams params;

  Index size() const { return scale_weights.size(); }
  DenseRows materialize() const;
  WeightedPointSet as_point_set() const;
  static Coreset from_point_set(const WeightedPointSet& points, CoresetSource source,
                                CoresetParams params = {});
};

/// Constants of a (ρ, φ, ψ)-metric obtained from a log-log Lipschitz
/// exponent r. For r > 1, ψ must lie in (0, r-1).
struct RhoMetricParams {
  double r = 2.0;
  double rho = 2.0;
  double psi = 0.5;
  double phi = 2.0;

  static RhoMetricParams from_exponent(double r, double psi);
  /// Constant multiplying f(p, C) in the cost-difference bound:
  /// φ + ψ·2^{r-1}.
  double point_coefficient() const;
  /// Constant multiplying min{f(p,Q), f(c,Q)}: ψ·2^{r-1}.
  double min_coefficient() const;
};

}  // namespace pcoreset
