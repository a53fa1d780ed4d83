#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcoreset/bench.hpp"
#include "pcoreset/types.hpp"

namespace pcoreset {

/// Consecutive, order-preserving chunks of at most m rows.
std::vector<WeightedPointSet> chunk(const WeightedPointSet& points, Index m);

enum class JlDistribution { Gaussian, Rademacher };

enum class JlDimRule {
  LogCeil,   // k·⌈ln m⌉
  SixK,      // 6k
};

struct JlConfig {
  Index target_dim = 0;
  JlDistribution distribution = JlDistribution::Gaussian;
  /// Orthonormalize the columns of the Gaussian draw and scale by √(d/d′).
  bool orthogonalize = true;
  /// Use the identity map (requires target_dim = d).
  bool identity = false;
  std::uint64_t seed = 0;
};

Index default_jl_dim(Index m, Index k, JlDimRule rule = JlDimRule::LogCeil);

/// d × d′ projection matrix; the same (d, config) always gives the same matrix.
Matrix jl_matrix(Index d, const JlConfig& config);

/// Rows multiplied by the projection matrix; weights are kept.
WeightedPointSet jl_project(const WeightedPointSet& points, const JlConfig& config);
WeightedPointSet jl_project(const WeightedPointSet& points, const Matrix& projection);

enum class Reducer { Uniform, CNW, Composed, Identity };

std::string to_string(Reducer reducer);
Reducer parse_reducer(const std::string& text);

struct TreeConfig {
  Index chunk_size = 2;
  Reducer reducer = Reducer::Composed;
  Index k = 5;
  Index j = 0;  // subspace dimension for Composed; 0 means k
  std::uint64_t seed = 0;
  std::optional<JlConfig> jl;
  std::filesystem::path checkpoint_dir;  // empty = no checkpoints
  ErrorForm error_form = ErrorForm::Residual;
  bool floor_errors = true;

  void validate() const;
};

/// ⌈log₂(chunks)⌉ + 1.
Index floor_count(Index chunks);

struct FloorReport {
  Index floor = 0;
  Index nodes = 0;
  Index rows = 0;  // rows of the concatenated floor
  double error = 0.0;
  bool exact_rank = false;
  double seconds = 0.0;  // time to build this floor from the one below
};

struct TreeResult {
  Coreset top;
  std::vector<FloorReport> floors;
  Index chunks = 0;
};

class TreeError : public std::runtime_error {
 public:
  TreeError(Index floor, Index node, const std::string& what)
      : std::runtime_error("node (floor " + std::to_string(floor) + ", index " +
                           std::to_string(node) + "): " + what),
        floor_(floor),
        node_(node) {}
  Index floor() const { return floor_; }
  Index node() const { return node_; }

 private:
  Index floor_;
  Index node_;
};

/// Seed of the node at (floor, index).
std::uint64_t node_seed(std::uint64_t seed, Index floor, Index index);

/// Reduces one merged node to at most chunk_size rows. Nodes already within
/// the budget are passed through unchanged.
Coreset reduce_node(const WeightedPointSet& merged, const TreeConfig& config,
                    std::uint64_t seed);

/// Binary merge-reduce tree. Floor 0 holds the chunks; every higher floor
/// pairs neighbours, concatenates them and reduces the union; an unpaired
/// last node is carried up unchanged. Floor errors compare the concatenated
/// floor against `original`, or against the concatenated chunks when it is
/// null.
TreeResult merge_reduce(const std::vector<WeightedPointSet>& chunks, const TreeConfig& config,
                        const WeightedPointSet* original = nullptr);

/// Chunks `points`, projects every chunk when config.jl is set and runs the tree.
TreeResult build_tree(const WeightedPointSet& points, const TreeConfig& config);

/// Error of a concatenated floor against the data.
SvdErrorValue floor_error(const std::vector<Coreset>& leaves, const SvdReference& reference,
                          ErrorForm form = ErrorForm::Residual);

Coreset concat_coresets(const std::vector<Coreset>& parts);

}  // namespace pcoreset
