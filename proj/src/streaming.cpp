#include "pcoreset/streaming.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include <Eigen/QR>

#include "pcoreset/cnw.hpp"
#include "pcoreset/coreset.hpp"
#include "pcoreset/cost.hpp"
#include "pcoreset/io.hpp"
#include "pcoreset/rng.hpp"

namespace pcoreset {

std::vector<WeightedPointSet> chunk(const WeightedPointSet& points, Index m) {
  if (m < 2) throw std::invalid_argument("chunk: size must be >= 2");
  if (points.empty()) throw std::invalid_argument("chunk: empty input");
  std::vector<WeightedPointSet> out;
  out.reserve(static_cast<std::size_t>((points.size() + m - 1) / m));
  for (Index begin = 0; begin < points.size(); begin += m) {
    out.push_back(points.slice(begin, std::min(m, points.size() - begin)));
  }
  return out;
}

Index default_jl_dim(Index m, Index k, JlDimRule rule) {
  if (k < 1) throw std::invalid_argument("default_jl_dim: k must be positive");
  if (rule == JlDimRule::SixK) return 6 * k;
  if (m < 2) throw std::invalid_argument("default_jl_dim: m must be >= 2");
  return k * static_cast<Index>(std::ceil(std::log(static_cast<double>(m))));
}

Matrix jl_matrix(Index d, const JlConfig& config) {
  const Index t = config.target_dim;
  if (t < 1 || t > d) {
    throw std::invalid_argument("jl: target dimension " + std::to_string(t) + " outside [1, " +
                                std::to_string(d) + "]");
  }
  if (config.identity) {
    if (t != d) throw std::invalid_argument("jl: the identity map needs target_dim = d");
    return Matrix::Identity(d, d);
  }
  Rng rng(Rng::derive(config.seed, {0x6a6c}));
  Matrix r(d, t);
  if (config.distribution == JlDistribution::Rademacher) {
    const double s = 1.0 / std::sqrt(static_cast<double>(t));
    for (Index c = 0; c < t; ++c)
      for (Index i = 0; i < d; ++i) r(i, c) = s * rng.sign();
    return r;
  }
  for (Index c = 0; c < t; ++c)
    for (Index i = 0; i < d; ++i) r(i, c) = rng.normal();
  if (!config.orthogonalize) return r / std::sqrt(static_cast<double>(t));
  Eigen::HouseholderQR<Matrix> qr(r);
  Matrix q = qr.householderQ() * Matrix::Identity(d, t);
  // fix column signs so Q does not depend on Householder conventions
  const Matrix rr = qr.matrixQR().topRows(t).triangularView<Eigen::Upper>();
  for (Index c = 0; c < t; ++c)
    if (rr(c, c) < 0.0) q.col(c) = -q.col(c);
  return std::sqrt(static_cast<double>(d) / static_cast<double>(t)) * q;
}

WeightedPointSet jl_project(const WeightedPointSet& points, const Matrix& projection) {
  if (projection.rows() != points.dim()) throw std::invalid_argument("jl: dimension mismatch");
  DenseRows out = points.visit([&](const auto& m) -> DenseRows { return m * projection; });
  return {std::move(out), points.weights()};
}

WeightedPointSet jl_project(const WeightedPointSet& points, const JlConfig& config) {
  return jl_project(points, jl_matrix(points.dim(), config));
}

std::string to_string(Reducer reducer) {
  switch (reducer) {
    case Reducer::Uniform: return "uniform";
    case Reducer::CNW: return "cnw";
    case Reducer::Composed: return "composed";
    case Reducer::Identity: return "identity";
  }
  return "?";
}

Reducer parse_reducer(const std::string& text) {
  if (text == "uniform") return Reducer::Uniform;
  if (text == "cnw") return Reducer::CNW;
  if (text == "composed") return Reducer::Composed;
  if (text == "identity") return Reducer::Identity;
  throw std::invalid_argument("unknown reducer '" + text + "'");
}

void TreeConfig::validate() const {
  if (chunk_size < 2) throw std::invalid_argument("tree: chunk size must be >= 2");
  if (k < 1) throw std::invalid_argument("tree: k must be >= 1");
  if (j < 0) throw std::invalid_argument("tree: j must be >= 0");
  if (reducer == Reducer::Composed && 4 * k > chunk_size) {
    throw std::invalid_argument("tree: the composed reducer needs chunk size >= 4k");
  }
  if (reducer == Reducer::CNW && 4 * k > chunk_size) {
    throw std::invalid_argument("tree: the cnw reducer needs chunk size >= 4k");
  }
}

Index floor_count(Index chunks) {
  if (chunks < 1) throw std::invalid_argument("floor_count: no chunks");
  Index floors = 1;
  for (Index width = 1; width < chunks; width *= 2) ++floors;
  return floors;
}

std::uint64_t node_seed(std::uint64_t seed, Index floor, Index index) {
  return Rng::derive(seed, {static_cast<std::uint64_t>(floor), static_cast<std::uint64_t>(index)});
}

Coreset reduce_node(const WeightedPointSet& merged, const TreeConfig& config, std::uint64_t seed) {
  const Index m = config.chunk_size;
  if (config.reducer == Reducer::Identity || merged.size() <= m) {
    return Coreset::from_point_set(merged, CoresetSource::Identity);
  }
  switch (config.reducer) {
    case Reducer::Uniform:
      return uniform_coreset(merged, m, seed);
    case Reducer::CNW: {
      CnwConfig cfg;
      cfg.k = config.k;
      cfg.epsilon = std::min(std::sqrt(static_cast<double>(config.k) / static_cast<double>(m)), kMaxCnwEpsilon);
      cfg.iterations = m;
      return cnw(merged, cfg);
    }
    case Reducer::Composed: {
      const Index j = config.j > 0 ? config.j : config.k;
      const double eps = std::sqrt(4.0 * static_cast<double>(config.k) / static_cast<double>(m));
      const double opt = opt_single_subspace(merged, j);
      Coreset c;
      if (opt > 0.0) {
        c = fixed_size_coreset(merged, config.k, j, eps, opt, seed);
      } else {
        CnwConfig cfg;
        cfg.k = config.k;
        cfg.epsilon = std::min(0.5 * eps, kMaxCnwEpsilon);
        cfg.iterations = m;
        c = cnw(merged, cfg);
        c.source = CoresetSource::Composed;
      }
      // keep the node's total weight; a global rescale leaves every
      // subspace ranking and the top-k singular vectors unchanged
      const double mass = merged.total_weight();
      const double out = c.as_point_set().total_weight();
      c.scale_weights *= mass / out;
      return c;
    }
    case Reducer::Identity:
      break;
  }
  throw std::logic_error("reduce_node: unknown reducer");
}

Coreset concat_coresets(const std::vector<Coreset>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_coresets: nothing to concatenate");
  Index rows = 0;
  for (const auto& p : parts) rows += p.size();
  Coreset out;
  out.representatives.resize(rows, parts.front().representatives.cols());
  out.scale_weights.resize(rows);
  Index at = 0;
  for (const auto& p : parts) {
    out.representatives.middleRows(at, p.size()) = p.representatives;
    out.scale_weights.segment(at, p.size()) = p.scale_weights;
    at += p.size();
  }
  out.source = parts.front().source;
  out.params = parts.front().params;
  return out;
}

SvdErrorValue floor_error(const std::vector<Coreset>& leaves, const SvdReference& reference,
                          ErrorForm form) {
  return svd_error(reference, concat_coresets(leaves), form);
}

namespace {

void checkpoint(const TreeConfig& config, Index floor, const std::vector<Coreset>& nodes) {
  if (config.checkpoint_dir.empty()) return;
  const auto dir = config.checkpoint_dir / ("floor-" + std::to_string(floor));
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    write_weighted_csv(dir / ("node-" + std::to_string(i) + ".csv"), nodes[i]);
  }
}

}  // namespace

TreeResult merge_reduce(const std::vector<WeightedPointSet>& chunks, const TreeConfig& config,
                        const WeightedPointSet* original) {
  config.validate();
  if (chunks.empty()) throw std::invalid_argument("merge_reduce: no chunks");
  using Clock = std::chrono::steady_clock;

  TreeResult result;
  result.chunks = static_cast<Index>(chunks.size());
  std::vector<Coreset> level;
  level.reserve(chunks.size());
  for (const auto& c : chunks) level.push_back(Coreset::from_point_set(c, CoresetSource::Identity));

  std::optional<SvdReference> reference;
  if (config.floor_errors) {
    if (original) {
      reference = make_reference(*original, config.k);
    } else {
      reference = make_reference(concat_coresets(level).as_point_set(), config.k);
    }
  }
  auto report = [&](Index floor, double seconds) {
    FloorReport r;
    r.floor = floor;
    r.nodes = static_cast<Index>(level.size());
    for (const auto& c : level) r.rows += c.size();
    r.seconds = seconds;
    if (reference) {
      const SvdErrorValue e = floor_error(level, *reference, config.error_form);
      r.error = e.value;
      r.exact_rank = e.exact_rank;
    }
    result.floors.push_back(r);
    checkpoint(config, floor, level);
  };
  report(0, 0.0);

  for (Index floor = 1; level.size() > 1; ++floor) {
    const auto start = Clock::now();
    const auto pairs = static_cast<std::int64_t>(level.size() / 2);
    std::vector<Coreset> next(static_cast<std::size_t>(pairs) + level.size() % 2);
    std::vector<std::string> failures(next.size());

#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t p = 0; p < pairs; ++p) {
      const auto i = static_cast<std::size_t>(p);
      try {
        const WeightedPointSet merged =
            concat(level[2 * i].as_point_set(), level[2 * i + 1].as_point_set());
        next[i] = reduce_node(merged, config, node_seed(config.seed, floor, static_cast<Index>(p)));
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
    for (std::size_t i = 0; i < failures.size(); ++i) {
      if (!failures[i].empty()) throw TreeError(floor, static_cast<Index>(i), failures[i]);
    }
    if (level.size() % 2) next.back() = std::move(level.back());
    level = std::move(next);
    report(floor, std::chrono::duration<double>(Clock::now() - start).count());
  }
  result.top = level.front();
  return result;
}

TreeResult build_tree(const WeightedPointSet& points, const TreeConfig& config) {
  config.validate();
  std::vector<WeightedPointSet> chunks = chunk(points, config.chunk_size);
  if (!config.jl) return merge_reduce(chunks, config);
  const Matrix r = jl_matrix(points.dim(), *config.jl);
  for (auto& c : chunks) c = jl_project(c, r);
  const WeightedPointSet projected = jl_project(points, r);
  return merge_reduce(chunks, config, &projected);
}

}  // namespace pcoreset
