#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "pcoreset/bench.hpp"
#include "pcoreset/coreset.hpp"
#include "pcoreset/cost.hpp"
#include "pcoreset/io.hpp"
#include "test_util.hpp"

namespace pcoreset {
namespace {

using testing::gaussian;
using testing::random_points;
using testing::TempDir;

// Error metric coded from the Gram matrix instead of an SVD of A.
double gram_error(const WeightedPointSet& p, const Coreset& c, Index k) {
  const Matrix a = p.materialize();
  const Matrix g = a.transpose() * a;
  Eigen::SelfAdjointEigenSolver<Matrix> ga(g);
  const double total = g.trace();
  const double best = total - ga.eigenvalues().tail(k).sum();
  const Matrix cm = c.materialize();
  Eigen::SelfAdjointEigenSolver<Matrix> gc(cm.transpose() * cm);
  const Matrix vc = gc.eigenvectors().rightCols(k);
  const double other = total - (vc.transpose() * g * vc).trace();
  return std::abs(best - other) / best;
}

TEST(Uniform, EdgeSizes) {
  std::mt19937_64 gen(1);
  const WeightedPointSet p = random_points(gen, 12, 3);
  const Coreset all = uniform_coreset(p, 12, 5);
  EXPECT_EQ(all.representatives, p.to_dense());
  EXPECT_EQ(all.scale_weights, Vector::Ones(12));
  const Coreset one = uniform_coreset(p, 1, 5);
  ASSERT_EQ(one.size(), 1);
  EXPECT_EQ(one.scale_weights[0], 12.0);
  EXPECT_THROW(uniform_coreset(p, 0, 5), std::invalid_argument);
  EXPECT_THROW(uniform_coreset(p, 13, 5), std::invalid_argument);
}

TEST(Uniform, MassAndDistinctRows) {
  std::mt19937_64 gen(2);
  const WeightedPointSet p = random_points(gen, 200, 4, true);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Coreset c = uniform_coreset(p, 37, s);
    EXPECT_NEAR(c.scale_weights.sum(), p.total_weight(), 1e-12 * p.total_weight());
    std::set<std::vector<double>> rows;
    for (Index i = 0; i < c.size(); ++i) {
      const Eigen::RowVectorXd r = c.representatives.row(i);
      rows.insert(std::vector<double>(r.data(), r.data() + r.size()));
    }
    EXPECT_EQ(rows.size(), 37u);
  }
}

TEST(Uniform, InclusionFrequencyIsUniform) {
  const WeightedPointSet p = WeightedPointSet::unit(DenseRows::Identity(10, 10));
  std::vector<int> hits(10, 0);
  const int runs = 20000;
  for (int s = 0; s < runs; ++s) {
    const Coreset c = uniform_coreset(p, 3, static_cast<std::uint64_t>(s));
    for (Index i = 0; i < c.size(); ++i) {
      Index col = 0;
      c.representatives.row(i).maxCoeff(&col);
      ++hits[col];
    }
  }
  const double expect = runs * 0.3, sigma = std::sqrt(runs * 0.3 * 0.7);
  for (int h : hits) EXPECT_LE(std::abs(h - expect), 4 * sigma);
}

TEST(SvdError, ZeroAtIdentityAndSameSpan) {
  std::mt19937_64 gen(3);
  const WeightedPointSet p = random_points(gen, 50, 8, true);
  const Coreset same = Coreset::from_point_set(p, CoresetSource::Identity);
  for (ErrorForm f : {ErrorForm::Residual, ErrorForm::Captured, ErrorForm::Unsquared}) {
    EXPECT_NEAR(svd_error(p, same, 3, f).value, 0.0, 1e-12);
  }
  // rows of the top-3 subspace itself span the same space
  const Matrix v = best_subspace(p, 3).basis();
  Coreset span;
  span.representatives = DenseRows(v.transpose());
  span.scale_weights = Vector::LinSpaced(3, 3.0, 1.0);
  EXPECT_NEAR(svd_error(p, span, 3).value, 0.0, 1e-10);
}

TEST(SvdError, MatchesGramEvaluator) {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 10; ++t) {
    const WeightedPointSet p = random_points(gen, 100, 10);
    const Coreset half = uniform_coreset(p, 50, t);
    EXPECT_NEAR(svd_error(p, half, 3).value, gram_error(p, half, 3), 1e-10);
  }
}

TEST(SvdError, NonNegative) {
  std::mt19937_64 gen(5);
  for (int t = 0; t < 20; ++t) {
    const WeightedPointSet p = random_points(gen, 60, 6, true);
    const Coreset c = uniform_coreset(p, 10, t);
    EXPECT_GE(svd_error(p, c, 2).value, 0.0);
    EXPECT_GE(svd_error(p, c, 2, ErrorForm::Captured).value, 0.0);
    EXPECT_GE(svd_error(p, c, 2, ErrorForm::Unsquared).value, 0.0);
  }
}

TEST(SvdError, ExactRankSentinel) {
  std::mt19937_64 gen(6);
  const DenseRows m = gaussian(gen, 30, 2) * gaussian(gen, 2, 6);
  const WeightedPointSet p = WeightedPointSet::unit(m);
  const SvdErrorValue e = svd_error(p, uniform_coreset(p, 10, 1), 2);
  EXPECT_TRUE(e.exact_rank);
  EXPECT_TRUE(std::isnan(e.value));
  EXPECT_FALSE(svd_error(p, uniform_coreset(p, 10, 1), 1).exact_rank);
}

TEST(SvdError, FewCoresetRowsStillEvaluates) {
  std::mt19937_64 gen(7);
  const WeightedPointSet p = random_points(gen, 40, 6);
  const SvdErrorValue e = svd_error(p, uniform_coreset(p, 2, 3), 4);
  EXPECT_FALSE(e.exact_rank);
  EXPECT_TRUE(std::isfinite(e.value));
}

TEST(Synth, LinesWithoutNoiseCostZero) {
  SynthParams sp;
  sp.kind = SynthKind::Lines;
  sp.n = 300;
  sp.d = 12;
  sp.k = 4;
  sp.noise = 0.0;
  sp.seed = 3;
  const Dataset ds = synth(sp);
  // recover the generating lines: each row spans its own; 4 distinct directions overall
  std::vector<Line> lines;
  for (Index i = 0; i < ds.matrix.size() && lines.size() < 4; ++i) {
    const Line l = Line::through(ds.matrix.row(i));
    bool known = false;
    for (const auto& m : lines) known = known || dist_point_to_line(l.direction(), m) < 1e-12;
    if (!known) lines.push_back(l);
  }
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_NEAR(cost(ds.matrix, lines), 0.0, 1e-12 * ds.matrix.squared_norms().sum());
}

TEST(Synth, SubspacesWithoutNoiseCollapseExactly) {
  SynthParams sp;
  sp.kind = SynthKind::Subspaces;
  sp.n = 200;
  sp.d = 10;
  sp.k = 3;
  sp.j = 2;
  sp.noise = 0.0;
  sp.seed = 5;
  const Dataset ds = synth(sp);
  const double a = 1e-9 * ds.matrix.squared_norms().sum();
  const CollapseResult r = k_j_subspace_coreset(ds.matrix, a, 2);
  EXPECT_LE(r.final_cost, a);
}

TEST(Synth, DeterministicAndShaped) {
  SynthParams sp;
  sp.n = 50;
  sp.d = 7;
  sp.seed = 11;
  sp.unit_rows = true;
  const Dataset a = synth(sp), b = synth(sp);
  EXPECT_EQ(a.matrix.to_dense(), b.matrix.to_dense());
  EXPECT_EQ(a.matrix.size(), 50);
  EXPECT_EQ(a.matrix.dim(), 7);
  for (Index i = 0; i < 50; ++i) EXPECT_NEAR(a.matrix.squared_norms()[i], 1.0, 1e-12);
  sp.seed = 12;
  EXPECT_NE(synth(sp).matrix.to_dense(), a.matrix.to_dense());
}

TEST(Synth, IsotropicHasNoStructureToExploit) {
  SynthParams sp;
  sp.kind = SynthKind::Isotropic;
  sp.n = 5000;
  sp.d = 20;
  sp.seed = 7;
  const Dataset ds = synth(sp);
  std::vector<double> uni, comp;
  for (std::uint64_t s = 0; s < 5; ++s) {
    uni.push_back(svd_error(ds.matrix, build_coreset(Algorithm::Uniform, ds.matrix, 3, 400, s), 3).value);
    comp.push_back(svd_error(ds.matrix, build_coreset(Algorithm::Composed, ds.matrix, 3, 400, s), 3).value);
  }
  const double mu = median(uni), mc = median(comp);
  EXPECT_LE(mc, 2.0 * mu);
  EXPECT_LE(mu, 2.0 * mc);
}

TEST(BuildCoreset, SizesAndSources) {
  std::mt19937_64 gen(8);
  const WeightedPointSet p = random_points(gen, 300, 8);
  for (Algorithm a : {Algorithm::Uniform, Algorithm::CNW, Algorithm::Composed}) {
    const Coreset c = build_coreset(a, p, 2, 60, 1);
    EXPECT_LE(c.size(), 60) << to_string(a);
    EXPECT_GT(c.size(), 0);
  }
  EXPECT_THROW(build_coreset(Algorithm::Composed, p, 5, 10, 1), std::invalid_argument);
}

TEST(Names, RoundTrip) {
  for (Algorithm a : {Algorithm::Uniform, Algorithm::CNW, Algorithm::Composed}) {
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
  }
  for (ErrorForm f : {ErrorForm::Residual, ErrorForm::Captured, ErrorForm::Unsquared}) {
    EXPECT_EQ(parse_error_form(to_string(f)), f);
  }
  for (SynthKind k : {SynthKind::Lines, SynthKind::Subspaces, SynthKind::Isotropic}) {
    EXPECT_EQ(parse_synth_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_algorithm("bogus"), std::invalid_argument);
}

TEST(Median, Values) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_TRUE(std::isnan(median({})));
}

TEST(Csv, FieldQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
}

TEST(Config, Parses) {
  std::istringstream in(R"(# grid
dataset.syn = synth kind=lines n=200 d=16 k=3 noise=0.05 unit=true seed=4
dataset.file = file path=data/x.csv header=true
algorithms = uniform, composed
k = 2,3
sizes = 20, 40
seeds = 4
seed = 99
repetitions = 1
threads = 2
error_form = captured
out = results
)");
  const BenchConfig cfg = parse_bench_config(in, "/base");
  ASSERT_EQ(cfg.datasets.size(), 2u);
  EXPECT_EQ(cfg.datasets[0].name, "syn");
  ASSERT_TRUE(cfg.datasets[0].synth.has_value());
  EXPECT_EQ(cfg.datasets[0].synth->kind, SynthKind::Lines);
  EXPECT_EQ(cfg.datasets[0].synth->n, 200);
  EXPECT_TRUE(cfg.datasets[0].synth->unit_rows);
  EXPECT_EQ(cfg.datasets[1].path, "/base/data/x.csv");
  EXPECT_TRUE(cfg.datasets[1].header);
  EXPECT_EQ(cfg.algorithms, (std::vector<Algorithm>{Algorithm::Uniform, Algorithm::Composed}));
  EXPECT_EQ(cfg.ks, (std::vector<Index>{2, 3}));
  EXPECT_EQ(cfg.sizes, (std::vector<Index>{20, 40}));
  EXPECT_EQ(cfg.seeds, 4);
  EXPECT_EQ(cfg.master_seed, 99u);
  EXPECT_EQ(cfg.threads, 2);
  EXPECT_EQ(cfg.error_form, ErrorForm::Captured);
  EXPECT_EQ(cfg.out, "results");
}

TEST(Config, ErrorsCarryLineNumbers) {
  std::istringstream bad_key("seeds = 2\nflavour = mint\n");
  try {
    parse_bench_config(bad_key);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream bad_value("\n\nsizes = 10, ten\n");
  try {
    parse_bench_config(bad_value);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

BenchConfig small_config() {
  BenchConfig cfg;
  SynthParams sp;
  sp.n = 120;
  sp.d = 10;
  sp.k = 3;
  sp.j = 2;
  sp.noise = 0.05;
  sp.seed = 1;
  cfg.datasets.push_back({"toy", sp, "", "", false});
  cfg.ks = {2};
  cfg.sizes = {16, 32};
  cfg.seeds = 2;
  cfg.repetitions = 1;
  cfg.master_seed = 5;
  return cfg;
}

std::string records_text(const std::vector<BenchRecord>& r) {
  std::ostringstream out;
  write_records_csv(out, r);
  return out.str();
}

TEST(RunBenchmark, OneCellOneRecord) {
  BenchConfig cfg = small_config();
  cfg.algorithms = {Algorithm::Uniform};
  cfg.sizes = {16};
  cfg.seeds = 1;
  const auto records = run_benchmark(cfg);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].algorithm, "uniform");
  EXPECT_EQ(records[0].dataset, "toy");
  EXPECT_EQ(records[0].status, "ok");
  EXPECT_EQ(records[0].rows, 16);
  EXPECT_GE(records[0].error, 0.0);
  EXPECT_GE(records[0].build_time, 0.0);
}

TEST(RunBenchmark, RerunIsByteIdentical) {
  const BenchConfig cfg = small_config();
  const auto a = run_benchmark(cfg);
  const auto b = run_benchmark(cfg);
  EXPECT_EQ(a.size(), 3u * 2u * 2u);
  EXPECT_EQ(records_text(a), records_text(b));
  BenchConfig other = cfg;
  other.master_seed = 6;
  EXPECT_NE(records_text(run_benchmark(other)), records_text(a));
}

TEST(RunBenchmark, FailingCellBecomesSentinelRow) {
  BenchConfig cfg = small_config();
  cfg.algorithms = {Algorithm::Composed, Algorithm::Uniform};
  cfg.sizes = {4};  // below 4k for composed, fine for uniform
  cfg.seeds = 1;
  const auto records = run_benchmark(cfg);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].status.rfind("error:", 0), 0u);
  EXPECT_TRUE(std::isnan(records[0].error));
  EXPECT_EQ(records[1].status, "ok");
  const std::string text = records_text(records);
  EXPECT_NE(text.find(",nan,"), std::string::npos);
}

TEST(RunBenchmark, CsvSchemaAndOutputs) {
  BenchConfig cfg = small_config();
  TempDir dir("bench");
  cfg.out = dir.path().string();
  const auto records = run_benchmark(cfg);
  write_bench_outputs(cfg, records);
  std::ifstream in(dir / "records.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "algorithm,dataset,n,d,k,coreset_size,rows,seed,error,status\r");
  std::ifstream timings(dir / "timings.csv");
  std::getline(timings, header);
  EXPECT_NE(header.find("build_time"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "plots" / "toy_k2_error.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "plots" / "toy_k2_time.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "plots" / "plot.py"));
}

}  // namespace
}  // namespace pcoreset
