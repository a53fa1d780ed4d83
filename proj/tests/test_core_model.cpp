#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "pcoreset/cost.hpp"
#include "pcoreset/distance.hpp"
#include "pcoreset/types.hpp"
#include "test_util.hpp"

namespace pcoreset {
namespace {

using testing::gaussian;
using testing::gaussian_vector;
using testing::random_line;
using testing::random_points;
using testing::random_subspace;

Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }
Vector v3(double a, double b, double c) { return (Vector(3) << a, b, c).finished(); }

// Reference implementations written straight from the definitions.
double naive_f_ell(const Vector& p, const Vector& q) {
  const Vector ph = p / p.norm(), qh = q / q.norm();
  return std::min((ph - qh).squaredNorm(), (ph + qh).squaredNorm());
}

double naive_to_line(const Vector& p, const Vector& u) {
  return (p - p.dot(u) * u).squaredNorm();
}

TEST(F0, Examples) {
  EXPECT_EQ(f0(v2(1, 2), v2(1, 2)), 0.0);
  EXPECT_EQ(f0(v2(3, 4), v2(0, 0)), 25.0);
  EXPECT_EQ(f0(v2(1, 0), v2(0, 1)), 2.0);
}

TEST(F0, DimensionMismatchThrows) {
  EXPECT_THROW(f0(v2(1, 2), v3(1, 2, 3)), std::invalid_argument);
}

TEST(FEll, Examples) {
  EXPECT_NEAR(f_ell(v2(5, 0), v2(-3, 0)), 0.0, 1e-15);
  EXPECT_NEAR(f_ell(v2(1, 0), v2(0, 1)), 2.0, 1e-15);
  EXPECT_NEAR(f_ell(v2(3, 4), v2(1, 0)), 0.8, 1e-15);
}

TEST(FEll, ZeroInputThrows) {
  EXPECT_THROW(f_ell(v2(0, 0), v2(1, 0)), std::invalid_argument);
  EXPECT_THROW(f_ell(v2(1, 0), v2(0, 0)), std::invalid_argument);
}

TEST(FEll, EqualsTwoMinusTwoAbsCos) {
  std::mt19937_64 gen(11);
  for (int t = 0; t < 1000; ++t) {
    const Vector p = gaussian_vector(gen, 5), q = gaussian_vector(gen, 5);
    const double c = p.dot(q) / (p.norm() * q.norm());
    EXPECT_NEAR(f_ell(p, q), 2.0 - 2.0 * std::abs(c), 1e-12);
    EXPECT_NEAR(f_ell(p, q), f_ell(q, p), 1e-15);
  }
}

TEST(FEll, ScaleInvariance) {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> scale(-50.0, 50.0);
  for (int t = 0; t < 2000; ++t) {
    const Vector p = gaussian_vector(gen, 4), q = gaussian_vector(gen, 4);
    double a = scale(gen), b = scale(gen);
    if (std::abs(a) < 1e-3 || std::abs(b) < 1e-3) continue;
    EXPECT_NEAR(f_ell(a * p, b * q), f_ell(p, q), 1e-12);
  }
}

TEST(PointToLine, Examples) {
  const Line e1(v2(1, 0));
  EXPECT_NEAR(dist_point_to_line(v2(3, 4), e1), 16.0, 1e-12);
  EXPECT_NEAR(dist_point_to_line(v2(-7, 0), e1), 0.0, 1e-12);
  EXPECT_NEAR(dist_point_to_line(v2(0, 0), e1), 0.0, 0.0);
  // sandwich instance: 16 <= 25 * 0.8 = 20 <= 32
  const double lhs = dist_point_to_line(v2(3, 4), e1);
  const double mid = v2(3, 4).squaredNorm() * f_ell(v2(3, 4), v2(1, 0));
  EXPECT_NEAR(mid, 20.0, 1e-12);
  EXPECT_LE(lhs, mid);
  EXPECT_LE(mid, 2.0 * lhs);
}

TEST(PointToLine, SignOfDirectionIsIrrelevant) {
  std::mt19937_64 gen(13);
  for (int t = 0; t < 200; ++t) {
    const Line l = random_line(gen, 6);
    const Line neg(-l.direction());
    const Vector p = gaussian_vector(gen, 6);
    EXPECT_DOUBLE_EQ(dist_point_to_line(p, l), dist_point_to_line(p, neg));
    EXPECT_NEAR(dist_point_to_line(p, l), naive_to_line(p, l.direction()), 1e-10);
  }
}

TEST(Line, RejectsNonUnitDirection) {
  EXPECT_THROW(Line(v2(1.0, 1e-3)), std::invalid_argument);
  EXPECT_THROW(Line::through(v2(0, 0)), std::invalid_argument);
}

TEST(PointToSubspace, Examples) {
  Matrix b = Matrix::Zero(3, 2);
  b(0, 0) = 1;
  b(1, 1) = 1;
  const Subspace s(b);
  EXPECT_NEAR(dist_point_to_subspace(v3(1, 1, 1), s), 1.0, 1e-15);
  EXPECT_NEAR(dist_point_to_subspace(v3(2, -5, 0), s), 0.0, 1e-15);
  EXPECT_NEAR(dist_point_to_subspace(v3(0, 0, 3), s), 9.0, 1e-15);
}

TEST(Subspace, RejectsNonOrthonormalBasis) {
  Matrix b = Matrix::Identity(3, 2);
  b(0, 1) = 1e-6;
  EXPECT_THROW(Subspace{b}, std::invalid_argument);
}

TEST(PointToSubspace, NeverNegative) {
  std::mt19937_64 gen(14);
  for (int t = 0; t < 500; ++t) {
    const Subspace s = random_subspace(gen, 4, 3);
    const Vector p = s.basis() * gaussian_vector(gen, 3);
    EXPECT_GE(dist_point_to_subspace(p, s), 0.0);
  }
}

TEST(WeightedPointSet, Validation) {
  DenseRows m = DenseRows::Ones(3, 2);
  EXPECT_THROW(WeightedPointSet(m, Vector::Constant(3, -1.0)), std::invalid_argument);
  EXPECT_THROW(WeightedPointSet(m, Vector::Zero(3)), std::invalid_argument);
  EXPECT_THROW(WeightedPointSet(m, Vector::Ones(2)), std::invalid_argument);
  DenseRows bad = m;
  bad(1, 1) = std::nan("");
  EXPECT_THROW(WeightedPointSet::unit(bad), std::invalid_argument);
  Vector w = Vector::Ones(3);
  w[0] = 0.0;
  EXPECT_NO_THROW(WeightedPointSet(m, w));
}

TEST(WeightedPointSet, DropZeroRows) {
  DenseRows m(4, 2);
  m << 0, 0, 1, 2, 0, 0, 3, 0;
  const ZeroRowFilter f = drop_zero_rows(WeightedPointSet::unit(m));
  EXPECT_EQ(f.dropped, 2);
  ASSERT_EQ(f.points.size(), 2);
  EXPECT_EQ(f.kept, (std::vector<Index>{1, 3}));
  EXPECT_EQ(f.points.row(1), v2(3, 0));
}

TEST(WeightedPointSet, SparseAndDenseAgree) {
  std::mt19937_64 gen(15);
  DenseRows m = gaussian(gen, 20, 6);
  for (Index i = 0; i < 20; ++i) m(i, i % 6) = 0.0;
  const WeightedPointSet dense = WeightedPointSet::unit(m);
  const WeightedPointSet sparse = WeightedPointSet::unit(SparseRows(m.sparseView()));
  EXPECT_TRUE(sparse.is_sparse());
  EXPECT_EQ(dense.to_dense(), sparse.to_dense());
  const Line l = random_line(gen, 6);
  std::vector<Line> lines{l};
  EXPECT_NEAR(cost(dense, lines), cost(sparse, lines), 1e-12);
}

TEST(Cost, EmptySetCostsTotalWeight) {
  std::mt19937_64 gen(16);
  const WeightedPointSet p = random_points(gen, 7, 3);
  EXPECT_DOUBLE_EQ(cost(p, std::span<const Line>{}), 7.0);
  EXPECT_DOUBLE_EQ(cost(p, std::span<const Vector>{}, Distance::LineMetric), 7.0);
}

TEST(Cost, LinesThroughEveryPointCostZero) {
  std::mt19937_64 gen(17);
  const WeightedPointSet p = random_points(gen, 9, 4, true);
  std::vector<Line> lines;
  for (Index i = 0; i < p.size(); ++i) lines.push_back(Line::through(p.row(i)));
  EXPECT_NEAR(cost(p, lines), 0.0, 1e-12);
}

TEST(Cost, MatchesNaiveDoubleLoop) {
  std::mt19937_64 gen(18);
  for (int t = 0; t < 20; ++t) {
    const WeightedPointSet p = random_points(gen, 30, 5, true);
    std::vector<Line> lines;
    for (int l = 0; l < 3; ++l) lines.push_back(random_line(gen, 5));
    double expect = 0.0;
    for (Index i = 0; i < p.size(); ++i) {
      double best = INFINITY;
      for (const auto& l : lines) best = std::min(best, naive_to_line(p.row(i), l.direction()));
      expect += p.weight(i) * best;
    }
    EXPECT_NEAR(cost(p, lines), expect, 1e-10 * expect);

    std::vector<Subspace> subs{random_subspace(gen, 5, 2), random_subspace(gen, 5, 2)};
    const SubspaceSet set(subs);
    double expect_s = 0.0;
    for (Index i = 0; i < p.size(); ++i) {
      double best = INFINITY;
      for (const auto& s : subs) {
        const Vector r = p.row(i) - s.basis() * (s.basis().transpose() * p.row(i));
        best = std::min(best, r.squaredNorm());
      }
      expect_s += p.weight(i) * best;
    }
    EXPECT_NEAR(cost(p, set), expect_s, 1e-10 * expect_s);

    std::vector<Vector> centers{gaussian_vector(gen, 5), gaussian_vector(gen, 5)};
    double expect_c = 0.0;
    for (Index i = 0; i < p.size(); ++i) {
      expect_c += p.weight(i) * std::min(naive_f_ell(p.row(i), centers[0]), naive_f_ell(p.row(i), centers[1]));
    }
    EXPECT_NEAR(cost(p, centers, Distance::LineMetric), expect_c, 1e-10 * expect_c);
  }
}

TEST(Partition, SingleCell) {
  DenseRows m(3, 2);
  m << 1, 0.1, 2, -0.1, -3, 0.2;
  std::vector<Line> lines{Line(v2(1, 0)), Line(v2(0, 1))};
  const Partition part = partition_over(WeightedPointSet::unit(m), lines);
  EXPECT_EQ(part.cells[0].size(), 3u);
  EXPECT_TRUE(part.cells[1].empty());
}

TEST(Partition, OrthogonalClustersSplit) {
  DenseRows m(4, 2);
  m << 1, 0, -2, 0, 0, 3, 0, -1;
  std::vector<Line> lines{Line(v2(1, 0)), Line(v2(0, 1))};
  const Partition part = partition_over(WeightedPointSet::unit(m), lines);
  EXPECT_EQ(part.cells[0], (std::vector<Index>{0, 1}));
  EXPECT_EQ(part.cells[1], (std::vector<Index>{2, 3}));
}

TEST(Partition, TiesGoToLowestIndex) {
  DenseRows m(1, 2);
  m << 1, 1;
  const Vector a = v2(1, 0), b = v2(0, 1);
  std::vector<Line> lines{Line(b), Line(a)};
  EXPECT_EQ(partition_over(WeightedPointSet::unit(m), lines).assignment[0], 0);
}

TEST(Partition, EmptyMemberSetThrows) {
  std::mt19937_64 gen(19);
  EXPECT_THROW(partition_over(random_points(gen, 3, 2), std::span<const Line>{}), std::invalid_argument);
}

TEST(Partition, LineArgminEquivalence) {
  std::mt19937_64 gen(20);
  for (int t = 0; t < 50; ++t) {
    const WeightedPointSet p = random_points(gen, 40, 4);
    std::vector<Vector> centers;
    std::vector<Line> lines;
    for (int c = 0; c < 4; ++c) {
      centers.push_back(gaussian_vector(gen, 4));
      lines.push_back(Line::through(centers.back()));
    }
    const Partition by_line = partition_over(p, lines);
    const Partition by_metric = partition_over(p, centers, Distance::LineMetric);
    EXPECT_EQ(by_line.assignment, by_metric.assignment);
  }
}

// Second, independent enumeration: nested loops over index tuples.
double nested_opt(const WeightedPointSet& p, Index k, Distance f) {
  const Index n = p.size();
  double best = INFINITY;
  auto eval = [&](std::vector<Index> chosen) {
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
      double m = INFINITY;
      for (Index c : chosen) m = std::min(m, distance(f, p.row(i), p.row(c)));
      total += p.weight(i) * m;
    }
    best = std::min(best, total);
  };
  for (Index a = 0; a < n; ++a) {
    if (k == 1) {
      eval({a});
      continue;
    }
    for (Index b = a + 1; b < n; ++b) {
      if (k == 2) {
        eval({a, b});
        continue;
      }
      for (Index c = b + 1; c < n; ++c) eval({a, b, c});
    }
  }
  return best;
}

TEST(BruteForce, KEqualsNIsZero) {
  std::mt19937_64 gen(21);
  const WeightedPointSet p = random_points(gen, 3, 3);
  EXPECT_NEAR(brute_force_opt(p, 3, Distance::SquaredEuclidean).value, 0.0, 1e-15);
  EXPECT_NEAR(brute_force_opt(p, 3, Distance::LineMetric).value, 0.0, 1e-15);
}

TEST(BruteForce, OneMedianIsTheMedoid) {
  std::mt19937_64 gen(22);
  const WeightedPointSet p = random_points(gen, 12, 2);
  Index medoid = -1;
  double best = INFINITY;
  for (Index c = 0; c < p.size(); ++c) {
    double s = 0.0;
    for (Index i = 0; i < p.size(); ++i) s += (p.row(i) - p.row(c)).squaredNorm();
    if (s < best) {
      best = s;
      medoid = c;
    }
  }
  const DiscreteOptimum opt = brute_force_opt(p, 1, Distance::SquaredEuclidean);
  EXPECT_EQ(opt.chosen, std::vector<Index>{medoid});
  EXPECT_NEAR(opt.value, best, 1e-10 * best);
}

TEST(BruteForce, MatchesIndependentEnumeration) {
  std::mt19937_64 gen(23);
  for (int t = 0; t < 10; ++t) {
    const WeightedPointSet p = random_points(gen, 10, 3, true);
    for (Distance f : {Distance::SquaredEuclidean, Distance::LineMetric, Distance::PointToLine}) {
      for (Index k : {1, 2, 3}) {
        const double a = brute_force_opt(p, k, f).value;
        const double b = nested_opt(p, k, f);
        EXPECT_NEAR(a, b, 1e-10 * std::max(1.0, b));
      }
    }
  }
}

TEST(BruteForce, GuardsLargeInstances) {
  std::mt19937_64 gen(24);
  EXPECT_THROW(brute_force_opt(random_points(gen, 26, 2), 2, Distance::SquaredEuclidean), std::invalid_argument);
  EXPECT_THROW(brute_force_opt(random_points(gen, 10, 2), 4, Distance::SquaredEuclidean), std::invalid_argument);
}

TEST(OptSingleSubspace, Examples) {
  DenseRows d = DenseRows::Zero(3, 3);
  d(0, 0) = 3;
  d(1, 1) = 2;
  d(2, 2) = 1;
  EXPECT_NEAR(opt_single_subspace(WeightedPointSet::unit(d), 2), 1.0, 1e-12);
  std::mt19937_64 gen(25);
  const DenseRows low = gaussian(gen, 20, 2) * gaussian(gen, 2, 6);
  EXPECT_NEAR(opt_single_subspace(WeightedPointSet::unit(low), 2), 0.0, 1e-9);
  EXPECT_THROW(opt_single_subspace(WeightedPointSet::unit(d), 4), std::invalid_argument);
  EXPECT_THROW(opt_single_subspace(WeightedPointSet::unit(d), 0), std::invalid_argument);
}

TEST(OptSingleSubspace, AgreesWithDistanceSumAtBestSubspace) {
  std::mt19937_64 gen(26);
  for (int t = 0; t < 10; ++t) {
    const WeightedPointSet p = random_points(gen, 40, 6, true);
    const Subspace s = best_subspace(p, 3);
    double sum = 0.0;
    for (Index i = 0; i < p.size(); ++i) sum += p.weight(i) * dist_point_to_subspace(p.row(i), s);
    EXPECT_NEAR(opt_single_subspace(p, 3), sum, 1e-8);
    // no random subspace does better
    for (int r = 0; r < 20; ++r) {
      EXPECT_LE(opt_single_subspace(p, 3), cost(p, SubspaceSet({random_subspace(gen, 6, 3)})) + 1e-9);
    }
  }
}

// Properties

TEST(Properties, Sandwich) {
  std::mt19937_64 gen(27);
  std::uniform_int_distribution<int> dim(2, 20), members(1, 5);
  for (int t = 0; t < 10000; ++t) {
    const Index d = dim(gen);
    const Vector p = gaussian_vector(gen, d);
    double to_set = INFINITY, metric = INFINITY;
    for (int m = members(gen); m > 0; --m) {
      const Line l = random_line(gen, d);
      to_set = std::min(to_set, dist_point_to_line(p, l));
      metric = std::min(metric, f_ell(p, l.direction()));
    }
    const double mid = p.squaredNorm() * metric;
    EXPECT_LE(to_set, mid * (1 + 1e-9) + 1e-300);
    EXPECT_LE(mid, 2.0 * to_set * (1 + 1e-9) + 1e-300);
  }
}

TEST(Properties, CostSandwich) {
  std::mt19937_64 gen(28);
  for (int t = 0; t < 50; ++t) {
    const WeightedPointSet p = random_points(gen, 25, 5, true);
    std::vector<Line> lines;
    std::vector<Vector> dirs;
    for (int l = 0; l < 3; ++l) {
      lines.push_back(random_line(gen, 5));
      dirs.push_back(lines.back().direction());
    }
    const double c0 = cost(p, lines);
    double cl = 0.0;
    for (Index i = 0; i < p.size(); ++i) {
      double m = INFINITY;
      for (const auto& u : dirs) m = std::min(m, f_ell(p.row(i), u));
      cl += p.weight(i) * p.squared_norms()[i] * m;
    }
    EXPECT_LE(c0, cl * (1 + 1e-9));
    EXPECT_LE(cl, 2.0 * c0 * (1 + 1e-9));
  }
}

TEST(Properties, EightDistance) {
  std::mt19937_64 gen(29);
  std::uniform_int_distribution<int> dim(2, 10);
  int violations = 0;
  for (int t = 0; t < 100000; ++t) {
    const Index d = dim(gen);
    const Vector q = gaussian_vector(gen, d), p = gaussian_vector(gen, d), pp = gaussian_vector(gen, d);
    if (f_ell(q, pp) > 8.0 * (f_ell(q, p) + f_ell(p, pp))) ++violations;
  }
  EXPECT_EQ(violations, 0);
}

TEST(Properties, SquaredEuclideanIsTwoDistance) {
  std::mt19937_64 gen(30);
  for (int t = 0; t < 20000; ++t) {
    const Vector a = gaussian_vector(gen, 4), b = gaussian_vector(gen, 4), c = gaussian_vector(gen, 4);
    EXPECT_LE(f0(a, c), 2.0 * (f0(a, b) + f0(b, c)) * (1 + 1e-12));
  }
}

TEST(Properties, CostDifferenceBound) {
  std::mt19937_64 gen(31);
  for (double psi : {0.1, 0.5}) {
    const RhoMetricParams rp = RhoMetricParams::from_exponent(2.0, psi);
    EXPECT_NEAR(rp.point_coefficient(), 1.0 / psi + 2.0 * psi, 1e-15);
    EXPECT_NEAR(rp.min_coefficient(), 2.0 * psi, 1e-15);
    for (int t = 0; t < 5000; ++t) {
      const Vector p = gaussian_vector(gen, 5), c = p + 0.5 * gaussian_vector(gen, 5);
      const SubspaceSet q({random_subspace(gen, 5, 2), random_subspace(gen, 5, 2)});
      const double fp = dist_point_to_set(p, q), fc = dist_point_to_set(c, q);
      const double bound = rp.point_coefficient() * f0(p, c) + rp.min_coefficient() * std::min(fp, fc);
      EXPECT_LE(std::abs(fp - fc), bound * (1 + 1e-12) + 1e-12);
    }
  }
}

TEST(RhoMetricParams, DerivedFields) {
  const RhoMetricParams a = RhoMetricParams::from_exponent(2.0, 0.5);
  EXPECT_DOUBLE_EQ(a.rho, 2.0);
  EXPECT_DOUBLE_EQ(a.phi, 2.0);
  const RhoMetricParams b = RhoMetricParams::from_exponent(3.0, 0.5);
  EXPECT_DOUBLE_EQ(b.rho, 4.0);
  EXPECT_DOUBLE_EQ(b.phi, 16.0);
  const RhoMetricParams c = RhoMetricParams::from_exponent(0.5, 0.1);
  EXPECT_DOUBLE_EQ(c.rho, 1.0);
  EXPECT_THROW(RhoMetricParams::from_exponent(2.0, 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace pcoreset
