#include "pcoreset/cnw.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "pcoreset/kernels.hpp"

namespace pcoreset {

Index cnw_size(Index k, double epsilon) {
  const double exact = static_cast<double>(k) / (epsilon * epsilon);
  return static_cast<Index>(std::ceil(exact * (1.0 - 1e-9)));
}

Index CnwConfig::iteration_count() const {
  return iterations > 0 ? iterations : cnw_size(k, epsilon);
}

void CnwConfig::validate() const {
  if (k < 1) throw std::invalid_argument("cnw: k must be >= 1");
  if (!(epsilon > 0.0 && epsilon <= kMaxCnwEpsilon)) {
    throw std::invalid_argument("cnw: epsilon must lie in (0, " + std::to_string(kMaxCnwEpsilon) +
                                "]");
  }
  if (iterations < 0) throw std::invalid_argument("cnw: negative iteration count");
}

BarrierSystem BarrierSystem::from_rows(DenseRows a) {
  BarrierSystem s;
  s.gram = a.transpose() * a;
  s.gram = 0.5 * (s.gram + s.gram.transpose());
  s.a = std::move(a);
  const double scale = s.gram.diagonal().cwiseAbs().maxCoeff();
  Matrix off = s.gram;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    s.diagonal_gram = true;
    s.gram_diagonal = s.gram.diagonal();
    s.gram = s.gram_diagonal.asDiagonal();
  }
  return s;
}

BarrierSystem build_barrier_system(const DenseRows& materialized, Index k, BarrierLayout layout) {
  const Matrix p = materialized;
  Eigen::BDCSVD<Matrix> svd(p, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  if (sigma.size() == 0 || !(sigma[0] > 0.0)) throw std::invalid_argument("cnw: input matrix is zero");
  Index rank = 0;
  while (rank < sigma.size() && sigma[rank] > sigma[0] * tolerances().relative_rank) ++rank;

  double tail_sq = 0.0;
  for (Index i = k; i < rank; ++i) tail_sq += sigma[i] * sigma[i];
  const bool deficient = rank <= k;
  const Index z = std::min<Index>(2 * k, rank);
  const Matrix& u = svd.matrixU();

  DenseRows a;
  if (deficient) {
    a = u.leftCols(rank);
  } else {
    const double scale = std::sqrt(static_cast<double>(k) / tail_sq);
    if (layout == BarrierLayout::Compressed) {
      a.resize(p.rows(), rank);
      a.leftCols(z) = u.leftCols(z);
      a.rightCols(rank - z) =
          scale * u.middleCols(z, rank - z) * sigma.segment(z, rank - z).asDiagonal();
    } else {
      const Matrix zb = svd.matrixV().leftCols(z);
      a.resize(p.rows(), p.cols() + z);
      a.leftCols(p.cols()) = scale * (p - p * zb * zb.transpose());
      a.rightCols(z) = u.leftCols(z);
    }
  }
  BarrierSystem s = BarrierSystem::from_rows(std::move(a));
  s.rank_deficient = deficient;
  return s;
}

BarrierState initial_barrier_state(const BarrierSystem& system, const CnwConfig& config) {
  const Index d = system.a.cols();
  const auto k = static_cast<double>(config.k);
  BarrierState s;
  s.upper_shift = k * Matrix::Identity(d, d);
  s.lower_shift = -k * Matrix::Identity(d, d);
  s.accumulated = Matrix::Zero(d, d);
  s.weights = Vector::Zero(system.a.rows());
  return s;
}

namespace {

/// tr((M G)²) for symmetric M and G.
double trace_of_square(const Matrix& m, const BarrierSystem& system) {
  if (system.diagonal_gram) {
    const auto& g = system.gram_diagonal;
    return (m.array().square() * (g * g.transpose()).array()).sum();
  }
  const Matrix mg = m * system.gram;
  return mg.cwiseProduct(mg.transpose()).sum();
}

struct BarrierSide {
  Vector quad;
  Vector square;
  double trace = 0.0;
};

BarrierSide score_side(const Matrix& shifted, const BarrierSystem& system, Index iteration,
                       const char* name) {
  Eigen::LLT<Matrix> llt(shifted);
  if (llt.info() != Eigen::Success) {
    throw BarrierError(iteration, std::string(name) + " barrier matrix is not positive definite");
  }
  Matrix m = llt.solve(Matrix::Identity(shifted.rows(), shifted.cols()));
  m = 0.5 * (m + m.transpose());
  const DenseRows b = system.a * m;
  BarrierSide side;
  side.quad.resize(system.a.rows());
  side.square.resize(system.a.rows());
  std::span<double> quad(side.quad.data(), static_cast<std::size_t>(side.quad.size()));
  std::span<double> square(side.square.data(), static_cast<std::size_t>(side.square.size()));
  if (system.diagonal_gram) {
    kernels::omp::barrier_quadratics(system.a, b, &system.gram_diagonal, nullptr, quad, square);
  } else {
    const DenseRows bg = b * system.gram;
    kernels::omp::barrier_quadratics(system.a, b, nullptr, &bg, quad, square);
  }
  side.trace = trace_of_square(m, system);
  return side;
}

}  // namespace

BarrierState barrier_step(BarrierState state, const BarrierSystem& system,
                          const CnwConfig& config, BarrierScores* scores) {
  const double du = config.delta_u();
  const double dl = config.lower_delta();
  const Index iteration = state.iteration + 1;
  state.upper_shift += du * system.gram;
  state.lower_shift += dl * system.gram;

  const BarrierSide lower = score_side(state.accumulated - state.lower_shift, system, iteration, "lower");
  const BarrierSide upper = score_side(state.upper_shift - state.accumulated, system, iteration, "upper");

  const Index n = system.a.rows();
  Vector l_score(n), u_score(n);
  Index best = -1;
  double best_gap = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    l_score[i] = lower.square[i] / (dl * lower.trace) - lower.quad[i];
    u_score[i] = upper.square[i] / (du * upper.trace) + upper.quad[i];
    // rows with a = 0 carry no information and would get an infinite step
    if (!(upper.quad[i] > 0.0)) continue;
    const double gap = l_score[i] - u_score[i];
    if (gap > best_gap) {
      best_gap = gap;
      best = i;
    }
  }
  if (best < 0 || !(u_score[best] > 0.0) || !std::isfinite(u_score[best])) {
    throw BarrierError(iteration, "no row has a positive upper score");
  }
  const double increment = 1.0 / u_score[best];
  state.weights[best] += increment;
  const Eigen::RowVectorXd a = system.a.row(best);
  state.accumulated.noalias() += increment * (a.transpose() * a);
  state.iteration = iteration;
  if (scores) {
    scores->lower = std::move(l_score);
    scores->upper = std::move(u_score);
    scores->chosen = best;
    scores->increment = increment;
  }
  return state;
}

CnwResult cnw_detailed(const WeightedPointSet& points, const CnwConfig& config,
                       BarrierLayout layout) {
  config.validate();
  if (points.empty()) throw std::invalid_argument("cnw: empty input");
  if (config.k > points.dim()) throw std::invalid_argument("cnw: k exceeds the dimension");

  const BarrierSystem system = build_barrier_system(points.materialize(), config.k, layout);
  BarrierState state = initial_barrier_state(system, config);
  const Index iterations = config.iteration_count();
  for (Index it = 0; it < iterations; ++it) state = barrier_step(std::move(state), system, config);

  CnwResult result;
  result.iterations = iterations;
  result.rank_deficient = system.rank_deficient;
  result.normalizer = static_cast<double>(iterations) * 0.5 * (config.delta_u() + config.lower_delta());
  result.raw_weights = state.weights;
  for (Index i = 0; i < points.size(); ++i) {
    if (state.weights[i] != 0.0) result.selected.push_back(i);
  }
  const auto m = static_cast<Index>(result.selected.size());
  Coreset& c = result.coreset;
  c.representatives.resize(m, points.dim());
  c.scale_weights.resize(m);
  for (Index r = 0; r < m; ++r) {
    const Index i = result.selected[static_cast<std::size_t>(r)];
    c.representatives.row(r) = points.row(i).transpose();
    c.scale_weights[r] = points.weight(i) * state.weights[i] / result.normalizer;
  }
  c.source = CoresetSource::CNW;
  c.params = {config.k, 0, config.epsilon, 0};
  return result;
}

Coreset cnw(const WeightedPointSet& points, const CnwConfig& config) {
  return cnw_detailed(points, config).coreset;
}

}  // namespace pcoreset
