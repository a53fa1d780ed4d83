// pcoreset command line: bench, coreset, tree, synth, eval.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pcoreset/bench.hpp"
#include "pcoreset/cnw.hpp"
#include "pcoreset/coreset.hpp"
#include "pcoreset/cost.hpp"
#include "pcoreset/io.hpp"
#include "pcoreset/kernels.hpp"
#include "pcoreset/streaming.hpp"

using namespace pcoreset;

namespace {

struct InputOptions {
  std::string path;
  std::string format;
  bool header = false;
};

void add_input(CLI::App* app, InputOptions& in) {
  app->add_option("input", in.path, "Input matrix (csv, idx or triplets)")->required()->check(CLI::ExistingFile);
  app->add_option("--input-format", in.format, "Input format; inferred from the extension when omitted")
      ->check(CLI::IsMember({"csv", "idx", "triplets"}));
  app->add_flag("--header", in.header, "Skip one header line of a CSV input");
}

Dataset load(const InputOptions& in) {
  Dataset ds = load_dataset(in.path, in.format, in.header);
  if (ds.dropped_zero_rows > 0) {
    std::cerr << "dropped " << ds.dropped_zero_rows << " all-zero rows from " << in.path << "\n";
  }
  return ds;
}

void write_output(const Coreset& c, const std::string& out) {
  if (out.empty() || out == "-") {
    write_weighted_csv(std::cout, c);
  } else {
    write_weighted_csv(out, c);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coresets for projective clustering and low-rank approximation"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

  // bench
  auto* bench = app.add_subcommand("bench", "Run a benchmark grid from a config file");
  std::string bench_config;
  std::optional<std::uint64_t> bench_seed;
  std::string bench_out;
  std::string bench_format = "csv";
  bench->add_option("--config", bench_config, "Config file")->required()->check(CLI::ExistingFile);
  bench->add_option("--seed", bench_seed, "Override the master seed");
  bench->add_option("--out", bench_out, "Override the output directory");
  bench->add_option("--format", bench_format, "Report format")->check(CLI::IsMember({"csv"}));

  // coreset
  auto* coreset = app.add_subcommand("coreset", "Build one coreset and export it");
  InputOptions coreset_in;
  add_input(coreset, coreset_in);
  std::string algo = "composed";
  Index k = 5, j = 0, size = 0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  std::string coreset_out;
  coreset->add_option("--algo", algo, "Construction")->check(CLI::IsMember({"uniform", "cnw", "composed"}));
  coreset->add_option("--k", k, "Subspace dimension of the error target")->check(CLI::PositiveNumber);
  coreset->add_option("--j", j, "Subspace dimension for composed (default k)")->check(CLI::NonNegativeNumber);
  auto* size_opt = coreset->add_option("--size", size, "Coreset rows")->check(CLI::PositiveNumber);
  auto* eps_opt = coreset->add_option("--epsilon", epsilon, "Accuracy; sets the size from the bound");
  size_opt->excludes(eps_opt);
  coreset->add_option("--seed", seed, "RNG seed");
  coreset->add_option("--out", coreset_out, "Weighted CSV output (default stdout)");
  coreset->add_option("--format", bench_format, "Output format")->check(CLI::IsMember({"csv"}));

  // tree
  auto* tree = app.add_subcommand("tree", "Merge-reduce tree over chunks of the input");
  InputOptions tree_in;
  add_input(tree, tree_in);
  TreeConfig tcfg;
  std::string reducer = "composed";
  std::string tree_out;
  Index jl_dim = 0;
  std::string jl_rule, jl_dist = "gaussian", error_form = "residual";
  bool jl_raw = false;
  tree->add_option("--size,--chunk", tcfg.chunk_size, "Chunk and node size m")->required()->check(CLI::Range(2, 1 << 30));
  tree->add_option("--algo,--reducer", reducer, "Reducer")
      ->check(CLI::IsMember({"uniform", "cnw", "composed", "identity"}));
  tree->add_option("--k", tcfg.k, "Rank of the error target")->check(CLI::PositiveNumber);
  tree->add_option("--j", tcfg.j, "Subspace dimension for composed (default k)");
  tree->add_option("--seed", tcfg.seed, "RNG seed");
  tree->add_option("--jl-dim", jl_dim, "Project chunks to this many dimensions");
  tree->add_option("--jl-rule", jl_rule, "Derive the projection dimension: logceil = k*ceil(ln m), sixk = 6k")
      ->check(CLI::IsMember({"logceil", "sixk"}));
  tree->add_option("--jl-dist", jl_dist, "Projection entries")->check(CLI::IsMember({"gaussian", "rademacher"}));
  tree->add_flag("--jl-raw", jl_raw, "Skip column orthonormalization of the Gaussian projection");
  tree->add_option("--error-form", error_form, "Floor error form")
      ->check(CLI::IsMember({"residual", "captured", "unsquared"}));
  tree->add_option("--out", tree_out, "Directory for floors.csv, top.csv and floor-<f>/node-<i>.csv");
  tree->add_option("--format", bench_format, "Output format")->check(CLI::IsMember({"csv"}));

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic matrix");
  SynthParams sp;
  std::string kind = "subspaces";
  std::string synth_out;
  std::string synth_format = "csv";
  synth_cmd->add_option("--kind", kind, "Generative model")->check(CLI::IsMember({"lines", "subspaces", "isotropic"}));
  synth_cmd->add_option("--n", sp.n, "Rows")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--d", sp.d, "Columns")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--k", sp.k, "Number of lines or subspaces")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--j", sp.j, "Subspace dimension")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--noise", sp.noise, "Per-coordinate noise standard deviation");
  synth_cmd->add_flag("--unit-rows", sp.unit_rows, "Rescale every row to unit norm");
  synth_cmd->add_option("--seed", sp.seed, "RNG seed");
  synth_cmd->add_option("--out", synth_out, "Output file")->required();
  synth_cmd->add_option("--format", synth_format, "Output format")->check(CLI::IsMember({"csv", "idx", "triplets"}));

  // eval
  auto* eval = app.add_subcommand("eval", "Low-rank error of an exported coreset");
  InputOptions eval_in;
  add_input(eval, eval_in);
  std::string eval_coreset;
  Index eval_k = 5;
  std::string eval_form = "residual";
  eval->add_option("--coreset", eval_coreset, "Weighted CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--k", eval_k, "Rank")->check(CLI::PositiveNumber);
  eval->add_option("--error-form", eval_form, "Error form")->check(CLI::IsMember({"residual", "captured", "unsquared"}));

  CLI11_PARSE(app, argc, argv);
  if (threads > 0) kernels::omp::set_threads(threads);

  try {
    if (*bench) {
      BenchConfig cfg = load_bench_config(bench_config);
      if (bench_seed) cfg.master_seed = *bench_seed;
      if (!bench_out.empty()) cfg.out = bench_out;
      if (threads > 0) cfg.threads = threads;
      const auto records = run_benchmark(cfg);
      if (cfg.out.empty()) {
        write_records_csv(std::cout, records);
      } else {
        write_bench_outputs(cfg, records);
        std::cerr << "wrote " << records.size() << " records to " << cfg.out << "\n";
      }
      return 0;
    }

    if (*coreset) {
      const Dataset ds = load(coreset_in);
      const Algorithm a = parse_algorithm(algo);
      Coreset c;
      if (*eps_opt) {
        if (a == Algorithm::Uniform) {
          c = uniform_coreset(ds.matrix, cnw_size(k, epsilon), seed);
        } else if (a == Algorithm::CNW) {
          CnwConfig cfg;
          cfg.k = k;
          cfg.epsilon = epsilon;
          c = cnw(ds.matrix, cfg);
        } else {
          const Index jj = j > 0 ? j : k;
          c = fixed_size_coreset(ds.matrix, k, jj, epsilon, opt_single_subspace(ds.matrix, jj), seed);
        }
      } else {
        if (size == 0) throw std::invalid_argument("coreset: give --size or --epsilon");
        c = build_coreset(a, ds.matrix, k, size, seed);
      }
      write_output(c, coreset_out);
      std::cerr << to_string(c.source) << ": " << c.size() << " rows from " << ds.matrix.size() << "\n";
      return 0;
    }

    if (*tree) {
      const Dataset ds = load(tree_in);
      tcfg.reducer = parse_reducer(reducer);
      tcfg.error_form = parse_error_form(error_form);
      if (!tree_out.empty()) tcfg.checkpoint_dir = tree_out;
      if (jl_dim > 0 || !jl_rule.empty()) {
        JlConfig jl;
        jl.target_dim = jl_dim > 0 ? jl_dim
                                   : default_jl_dim(tcfg.chunk_size, tcfg.k,
                                                    jl_rule == "sixk" ? JlDimRule::SixK : JlDimRule::LogCeil);
        jl.distribution = jl_dist == "rademacher" ? JlDistribution::Rademacher : JlDistribution::Gaussian;
        jl.orthogonalize = !jl_raw;
        jl.seed = tcfg.seed;
        tcfg.jl = jl;
      }
      const TreeResult result = build_tree(ds.matrix, tcfg);
      std::ostringstream floors;
      floors << "floor,nodes,rows,error,seconds\n";
      for (const auto& f : result.floors) {
        floors << f.floor << ',' << f.nodes << ',' << f.rows << ','
               << (f.exact_rank ? std::string("nan") : format_double(f.error)) << ','
               << format_double(f.seconds) << "\n";
      }
      std::cerr << result.chunks << " chunks, " << result.floors.size() << " floors\n";
      if (tree_out.empty()) {
        std::cout << floors.str();
      } else {
        std::ofstream(std::filesystem::path(tree_out) / "floors.csv") << floors.str();
        write_weighted_csv(std::filesystem::path(tree_out) / "top.csv", result.top);
      }
      return 0;
    }

    if (*synth_cmd) {
      sp.kind = parse_synth_kind(kind);
      const Dataset ds = synth(sp);
      if (synth_format == "csv") {
        write_dense_csv(synth_out, ds.matrix.to_dense());
      } else if (synth_format == "triplets") {
        write_triplets(synth_out, ds.matrix.to_dense().sparseView());
      } else {
        const DenseRows m = ds.matrix.to_dense();
        write_idx(synth_out, {static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols())}, 0x0E,
                  std::vector<double>(m.data(), m.data() + m.size()));
      }
      std::cerr << "wrote " << ds.matrix.size() << "x" << ds.matrix.dim() << " to " << synth_out << "\n";
      return 0;
    }

    if (*eval) {
      const Dataset ds = load(eval_in);
      const Coreset c = read_weighted_csv(eval_coreset);
      const SvdErrorValue e = svd_error(ds.matrix, c, eval_k, parse_error_form(eval_form));
      if (e.exact_rank) {
        std::cout << "exact_rank\n";
      } else {
        std::cout << format_double(e.value) << "\n";
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
