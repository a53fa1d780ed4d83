#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pcoreset/io.hpp"
#include "pcoreset/types.hpp"

namespace pcoreset {

/// m rows drawn uniformly without replacement, each with weight Σw/m.
Coreset uniform_coreset(const WeightedPointSet& points, Index m, std::uint64_t rng_seed);

/// Which low-rank error is reported.
///  - Residual: |‖A − A V_A V_Aᵀ‖² − ‖A − A V_C V_Cᵀ‖²| / ‖A − A V_A V_Aᵀ‖²  (default)
///  - Captured: |‖A V_A‖² − ‖A V_C‖²| / ‖A V_A‖²
///  - Unsquared: (‖A − A V_C V_Cᵀ‖² − ‖A − A V_A V_Aᵀ‖²) / ‖A − A V_A V_Aᵀ‖,
///    the form printed for the tree experiments
enum class ErrorForm { Residual, Captured, Unsquared };

std::string to_string(ErrorForm form);
ErrorForm parse_error_form(const std::string& text);

struct SvdErrorValue {
  double value = 0.0;
  bool exact_rank = false;  // zero denominator: value is NaN
};

/// Top-k right singular vectors of A and the quantities every coreset of A
/// is compared against. Build once per (dataset, k).
struct SvdReference {
  Index k = 0;
  Matrix v;               // d × k
  double residual = 0.0;  // ‖A − A V Vᵀ‖²_F
  double captured = 0.0;  // ‖A V‖²_F
  DenseRows a;            // √w-materialized A
};

SvdReference make_reference(const WeightedPointSet& points, Index k);

/// Top-k right singular vectors of a √w-materialized matrix, padded with
/// an orthonormal completion when it has fewer than k rows.
Matrix top_right_singular(const DenseRows& materialized, Index k);

SvdErrorValue svd_error(const SvdReference& reference, const Coreset& coreset,
                        ErrorForm form = ErrorForm::Residual);
SvdErrorValue svd_error(const WeightedPointSet& points, const Coreset& coreset, Index k,
                        ErrorForm form = ErrorForm::Residual);

enum class SynthKind { Lines, Subspaces, Isotropic };

std::string to_string(SynthKind kind);
SynthKind parse_synth_kind(const std::string& text);

/// Generative model:
///  - Lines: k directions uᵢ uniform on the sphere; each row picks a line
///    uniformly and is t·uᵢ + noise·g with t ~ N(0, 1), g ~ N(0, I_d).
///  - Subspaces: k random j-dimensional orthonormal bases Bᵢ; each row is
///    Bᵢ·h + noise·g with h ~ N(0, I_j).
///  - Isotropic: rows are g ~ N(0, I_d); noise is ignored.
/// With `unit_rows` every row is rescaled to unit norm afterwards (directional
/// data such as normalized term-frequency vectors). Rows that come out
/// exactly zero are dropped.
struct SynthParams {
  SynthKind kind = SynthKind::Subspaces;
  Index n = 1000;
  Index d = 128;
  Index k = 5;
  Index j = 1;
  double noise = 0.1;
  bool unit_rows = false;
  std::uint64_t seed = 0;
};

Dataset synth(const SynthParams& params);

enum class Algorithm { Uniform, CNW, Composed };

std::string to_string(Algorithm algo);
Algorithm parse_algorithm(const std::string& text);

/// Builds a coreset of `size` rows with the named algorithm.
///  - uniform:  uniform_coreset(P, size)
///  - cnw:      barrier selection with ε = √(k/size), size iterations
///  - composed: fixed-size coreset with ε = √(4k/size) and opt_estimate the
///              best single k-subspace cost, computed inside the timed region
Coreset build_coreset(Algorithm algo, const WeightedPointSet& points, Index k, Index size,
                      std::uint64_t rng_seed);

struct DatasetSpec {
  std::string name;
  std::optional<SynthParams> synth;  // set for generated data
  std::string path;                  // set for file data
  std::string format;
  bool header = false;
};

struct BenchConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<Algorithm> algorithms{Algorithm::Uniform, Algorithm::CNW, Algorithm::Composed};
  std::vector<Index> ks{5};
  std::vector<Index> sizes{100};
  Index seeds = 1;
  std::uint64_t master_seed = 0;
  Index repetitions = 3;
  int threads = 0;  // 0 = OpenMP default
  ErrorForm error_form = ErrorForm::Residual;
  std::string out;  // output directory, empty = no files

  void validate() const;
};

/// Flat key = value document; '#' starts a comment. Keys:
///   dataset.<name> = synth kind=<lines|subspaces|isotropic> n= d= k= j= noise= unit= seed=
///   dataset.<name> = file path=<path> [format=csv|idx|triplets] [header=true]
///   algorithms = uniform,cnw,composed   k = 5,10   sizes = 100,200
///   seeds = 10   seed = <u64>   repetitions = 3   threads = 0
///   error_form = residual|captured|unsquared   out = <dir>
/// Relative file paths resolve against the config file's directory.
BenchConfig parse_bench_config(std::istream& in, const std::filesystem::path& base = {});
BenchConfig load_bench_config(const std::filesystem::path& path);

struct BenchRecord {
  std::string algorithm;
  std::string dataset;
  Index n = 0;
  Index d = 0;
  Index k = 0;
  Index coreset_size = 0;  // requested
  Index rows = 0;          // returned
  std::uint64_t seed = 0;  // per-cell stream
  double error = 0.0;
  std::string status = "ok";
  double build_time = 0.0;  // seconds, median over repetitions
  double eval_time = 0.0;
};

std::vector<BenchRecord> run_benchmark(const BenchConfig& config);

/// records.csv carries every deterministic column; timings.csv adds the
/// wall-clock columns.
void write_records_csv(std::ostream& out, const std::vector<BenchRecord>& records);
void write_timings_csv(std::ostream& out, const std::vector<BenchRecord>& records);

/// One file per (dataset, k, metric) panel with columns algorithm,size,value
/// (median over seeds) plus a plot.py that renders them.
void write_plot_data(const std::filesystem::path& dir, const std::vector<BenchRecord>& records);

/// Writes records.csv, timings.csv and the plot data under config.out.
void write_bench_outputs(const BenchConfig& config, const std::vector<BenchRecord>& records);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& text);

double median(std::vector<double> values);

}  // namespace pcoreset
