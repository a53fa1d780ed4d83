#include "pcoreset/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <tuple>

#include <Eigen/QR>
#include <Eigen/SVD>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pcoreset/cnw.hpp"
#include "pcoreset/coreset.hpp"
#include "pcoreset/cost.hpp"
#include "pcoreset/rng.hpp"
#include "pcoreset/summation.hpp"

namespace pcoreset {

Coreset uniform_coreset(const WeightedPointSet& points, Index m, std::uint64_t rng_seed) {
  const Index n = points.size();
  if (m < 1 || m > n) {
    throw std::invalid_argument("uniform_coreset: size " + std::to_string(m) + " outside [1, " +
                                std::to_string(n) + "]");
  }
  Rng rng(Rng::derive(rng_seed, {0x756e69}));
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  // partial Fisher-Yates: the first m slots end up a uniform m-subset
  for (Index i = 0; i < m; ++i) {
    const auto pick = i + static_cast<Index>(rng.index(static_cast<std::uint64_t>(n - i)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(pick)]);
  }
  order.resize(static_cast<std::size_t>(m));
  std::sort(order.begin(), order.end());

  Coreset c;
  c.representatives = points.subset(order).to_dense();
  c.scale_weights = Vector::Constant(m, points.total_weight() / static_cast<double>(m));
  c.source = CoresetSource::Uniform;
  c.params = {0, 0, 0.0, rng_seed};
  return c;
}

std::string to_string(ErrorForm form) {
  switch (form) {
    case ErrorForm::Residual: return "residual";
    case ErrorForm::Captured: return "captured";
    case ErrorForm::Unsquared: return "unsquared";
  }
  return "?";
}

ErrorForm parse_error_form(const std::string& text) {
  if (text == "residual") return ErrorForm::Residual;
  if (text == "captured") return ErrorForm::Captured;
  if (text == "unsquared") return ErrorForm::Unsquared;
  throw std::invalid_argument("unknown error form '" + text + "'");
}

Matrix top_right_singular(const DenseRows& materialized, Index k) {
  const Index d = materialized.cols();
  if (k < 1 || k > d) throw std::invalid_argument("svd_error: k out of range");
  const Matrix a = materialized;
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinV);
  const Matrix& v = svd.matrixV();
  if (v.cols() >= k) return v.leftCols(k);
  Eigen::HouseholderQR<Matrix> qr(v);
  return qr.householderQ() * Matrix::Identity(d, k);
}

namespace {

double residual_of(const DenseRows& a, const Matrix& v) {
  const Matrix proj = a * v;
  const Matrix r = a - proj * v.transpose();
  return r.squaredNorm();
}

}  // namespace

SvdReference make_reference(const WeightedPointSet& points, Index k) {
  SvdReference ref;
  ref.k = k;
  ref.a = points.materialize();
  ref.v = top_right_singular(ref.a, k);
  ref.residual = residual_of(ref.a, ref.v);
  ref.captured = (ref.a * ref.v).squaredNorm();
  return ref;
}

SvdErrorValue svd_error(const SvdReference& reference, const Coreset& coreset, ErrorForm form) {
  if (coreset.representatives.cols() != reference.a.cols()) {
    throw std::invalid_argument("svd_error: coreset dimension does not match the data");
  }
  const Matrix vc = top_right_singular(coreset.materialize(), reference.k);
  const double total = reference.a.squaredNorm();
  SvdErrorValue out;
  if (form == ErrorForm::Captured) {
    if (!(reference.captured > 0.0)) {
      out.exact_rank = true;
      out.value = std::numeric_limits<double>::quiet_NaN();
      return out;
    }
    out.value = std::abs(reference.captured - (reference.a * vc).squaredNorm()) / reference.captured;
    return out;
  }
  if (reference.residual <= 1e-24 * total) {
    out.exact_rank = true;
    out.value = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double rc = residual_of(reference.a, vc);
  if (form == ErrorForm::Residual) {
    out.value = std::abs(reference.residual - rc) / reference.residual;
  } else {
    out.value = (rc - reference.residual) / std::sqrt(reference.residual);
  }
  return out;
}

SvdErrorValue svd_error(const WeightedPointSet& points, const Coreset& coreset, Index k,
                        ErrorForm form) {
  return svd_error(make_reference(points, k), coreset, form);
}

std::string to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::Lines: return "lines";
    case SynthKind::Subspaces: return "subspaces";
    case SynthKind::Isotropic: return "isotropic";
  }
  return "?";
}

SynthKind parse_synth_kind(const std::string& text) {
  if (text == "lines") return SynthKind::Lines;
  if (text == "subspaces") return SynthKind::Subspaces;
  if (text == "isotropic") return SynthKind::Isotropic;
  throw std::invalid_argument("unknown synth kind '" + text + "'");
}

Dataset synth(const SynthParams& p) {
  if (p.n < 1 || p.d < 1) throw std::invalid_argument("synth: n and d must be positive");
  if (p.kind != SynthKind::Isotropic) {
    if (p.k < 1) throw std::invalid_argument("synth: k must be positive");
    if (p.kind == SynthKind::Subspaces && (p.j < 1 || p.j > p.d)) {
      throw std::invalid_argument("synth: j must lie in [1, d]");
    }
  }
  if (!(p.noise >= 0.0)) throw std::invalid_argument("synth: noise must be nonnegative");

  Rng rng(Rng::derive(p.seed, {0x73796e}));
  const Index j = p.kind == SynthKind::Lines ? 1 : p.j;
  std::vector<Matrix> bases;
  if (p.kind != SynthKind::Isotropic) {
    for (Index c = 0; c < p.k; ++c) {
      Matrix g(p.d, j);
      for (Index col = 0; col < j; ++col)
        for (Index r = 0; r < p.d; ++r) g(r, col) = rng.normal();
      bases.push_back(Subspace::spanned_by(g).basis());
    }
  }
  DenseRows m(p.n, p.d);
  Vector h(j);
  for (Index i = 0; i < p.n; ++i) {
    if (p.kind == SynthKind::Isotropic) {
      for (Index c = 0; c < p.d; ++c) m(i, c) = rng.normal();
      continue;
    }
    const auto which = static_cast<std::size_t>(rng.index(static_cast<std::uint64_t>(p.k)));
    for (Index c = 0; c < j; ++c) h[c] = rng.normal();
    m.row(i) = (bases[which] * h).transpose();
    for (Index c = 0; c < p.d; ++c) m(i, c) += p.noise * rng.normal();
  }
  if (p.unit_rows) {
    for (Index i = 0; i < p.n; ++i) {
      const double norm = m.row(i).norm();
      if (norm > 0.0) m.row(i) /= norm;
    }
  }
  Dataset ds;
  ZeroRowFilter f = drop_zero_rows(WeightedPointSet::unit(std::move(m)));
  ds.name = to_string(p.kind);
  ds.matrix = std::move(f.points);
  ds.format = "synth";
  ds.dropped_zero_rows = f.dropped;
  return ds;
}

std::string to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::Uniform: return "uniform";
    case Algorithm::CNW: return "cnw";
    case Algorithm::Composed: return "composed";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& text) {
  if (text == "uniform") return Algorithm::Uniform;
  if (text == "cnw") return Algorithm::CNW;
  if (text == "composed") return Algorithm::Composed;
  throw std::invalid_argument("unknown algorithm '" + text + "'");
}

Coreset build_coreset(Algorithm algo, const WeightedPointSet& points, Index k, Index size,
                      std::uint64_t rng_seed) {
  if (size < 1) throw std::invalid_argument("coreset size must be positive");
  switch (algo) {
    case Algorithm::Uniform: {
      Coreset c = uniform_coreset(points, size, rng_seed);
      c.params.k = k;
      return c;
    }
    case Algorithm::CNW: {
      CnwConfig cfg;
      cfg.k = k;
      cfg.epsilon = std::min(std::sqrt(static_cast<double>(k) / static_cast<double>(size)), kMaxCnwEpsilon);
      cfg.iterations = size;
      Coreset c = cnw(points, cfg);
      c.params.seed = rng_seed;
      return c;
    }
    case Algorithm::Composed: {
      const double eps = std::sqrt(4.0 * static_cast<double>(k) / static_cast<double>(size));
      if (eps > 1.0) {
        throw std::invalid_argument("composed: size " + std::to_string(size) + " is below 4k = " +
                                    std::to_string(4 * k));
      }
      const double opt = opt_single_subspace(points, k);
      if (opt > 0.0) return fixed_size_coreset(points, k, k, eps, opt, rng_seed);
      // the data already lies in a k-subspace: nothing to collapse
      CnwConfig cfg;
      cfg.k = k;
      cfg.epsilon = std::min(0.5 * eps, kMaxCnwEpsilon);
      cfg.iterations = size;
      Coreset c = cnw(points, cfg);
      c.source = CoresetSource::Composed;
      c.params = {k, k, eps, rng_seed};
      return c;
    }
  }
  throw std::logic_error("build_coreset: unknown algorithm");
}

void BenchConfig::validate() const {
  if (datasets.empty()) throw std::invalid_argument("bench config: no datasets");
  if (algorithms.empty()) throw std::invalid_argument("bench config: no algorithms");
  if (ks.empty() || sizes.empty()) throw std::invalid_argument("bench config: k and sizes must be nonempty");
  for (Index k : ks)
    if (k < 1) throw std::invalid_argument("bench config: k must be positive");
  for (Index s : sizes)
    if (s < 1) throw std::invalid_argument("bench config: sizes must be positive");
  if (seeds < 1) throw std::invalid_argument("bench config: seeds must be >= 1");
  if (repetitions < 1) throw std::invalid_argument("bench config: repetitions must be >= 1");
  if (threads < 0) throw std::invalid_argument("bench config: threads must be >= 0");
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t h = values.size() / 2;
  return values.size() % 2 ? values[h] : 0.5 * (values[h - 1] + values[h]);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Dataset materialize_dataset(const DatasetSpec& spec) {
  Dataset ds = spec.synth ? synth(*spec.synth) : load_dataset(spec.path, spec.format, spec.header);
  ds.name = spec.name;
  return ds;
}

struct Cell {
  std::size_t dataset;
  Index k;
  Index size;
  Index seed_index;
  Algorithm algo;
};

}  // namespace

std::vector<BenchRecord> run_benchmark(const BenchConfig& config) {
  config.validate();
  std::vector<Dataset> data;
  for (const auto& spec : config.datasets) data.push_back(materialize_dataset(spec));

  // references are shared by all cells of a (dataset, k)
  std::map<std::pair<std::size_t, Index>, SvdReference> refs;
  std::vector<std::string> ref_errors(data.size() * config.ks.size());
  for (std::size_t di = 0; di < data.size(); ++di) {
    for (std::size_t ki = 0; ki < config.ks.size(); ++ki) {
      try {
        refs.emplace(std::make_pair(di, config.ks[ki]), make_reference(data[di].matrix, config.ks[ki]));
      } catch (const std::exception& e) {
        ref_errors[di * config.ks.size() + ki] = e.what();
      }
    }
  }

  std::vector<Cell> cells;
  for (std::size_t di = 0; di < data.size(); ++di)
    for (Index k : config.ks)
      for (Index size : config.sizes)
        for (Index s = 0; s < config.seeds; ++s)
          for (Algorithm a : config.algorithms) cells.push_back({di, k, size, s, a});

  std::vector<BenchRecord> records(cells.size());
  const auto count = static_cast<std::int64_t>(cells.size());
#ifdef _OPENMP
  const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();
#endif

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t c = 0; c < count; ++c) {
    const Cell& cell = cells[static_cast<std::size_t>(c)];
    const Dataset& ds = data[cell.dataset];
    BenchRecord& rec = records[static_cast<std::size_t>(c)];
    rec.algorithm = to_string(cell.algo);
    rec.dataset = ds.name;
    rec.n = ds.matrix.size();
    rec.d = ds.matrix.dim();
    rec.k = cell.k;
    rec.coreset_size = cell.size;
    rec.seed = Rng::derive(config.master_seed,
                           {static_cast<std::uint64_t>(cell.dataset), static_cast<std::uint64_t>(cell.k),
                            static_cast<std::uint64_t>(cell.size),
                            static_cast<std::uint64_t>(cell.seed_index)});
    // CNW ignores the seed: its cell is built once and shared below
    if (cell.algo == Algorithm::CNW && cell.seed_index > 0) continue;
    const auto ref = refs.find({cell.dataset, cell.k});
    if (ref == refs.end()) {
      const std::size_t ki = static_cast<std::size_t>(
          std::find(config.ks.begin(), config.ks.end(), cell.k) - config.ks.begin());
      rec.status = "error: " + ref_errors[cell.dataset * config.ks.size() + ki];
      rec.error = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    try {
      std::vector<double> times;
      Coreset coreset;
      for (Index r = 0; r < config.repetitions; ++r) {
        const auto start = Clock::now();
        coreset = build_coreset(cell.algo, ds.matrix, cell.k, cell.size, rec.seed);
        times.push_back(seconds_since(start));
      }
      rec.build_time = median(std::move(times));
      rec.rows = coreset.size();
      const auto start = Clock::now();
      const SvdErrorValue err = svd_error(ref->second, coreset, config.error_form);
      rec.eval_time = seconds_since(start);
      rec.error = err.value;
      if (err.exact_rank) rec.status = "exact_rank";
    } catch (const std::exception& e) {
      rec.status = std::string("error: ") + e.what();
      rec.error = std::numeric_limits<double>::quiet_NaN();
    }
  }
  const auto stride = static_cast<std::size_t>(config.algorithms.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (cells[c].algo != Algorithm::CNW || cells[c].seed_index == 0) continue;
    const BenchRecord& first = records[c - static_cast<std::size_t>(cells[c].seed_index) * stride];
    BenchRecord& rec = records[c];
    rec.rows = first.rows;
    rec.error = first.error;
    rec.status = first.status;
    rec.build_time = first.build_time;
    rec.eval_time = first.eval_time;
  }
  return records;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char ch : text) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

namespace {

void write_key_columns(std::ostream& out, const BenchRecord& r) {
  out << csv_field(r.algorithm) << ',' << csv_field(r.dataset) << ',' << r.n << ',' << r.d << ','
      << r.k << ',' << r.coreset_size << ',' << r.rows << ',' << r.seed << ','
      << (std::isnan(r.error) ? std::string("nan") : format_double(r.error)) << ','
      << csv_field(r.status);
}

constexpr const char* kKeyHeader = "algorithm,dataset,n,d,k,coreset_size,rows,seed,error,status";

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << kKeyHeader << "\r\n";
  for (const auto& r : records) {
    write_key_columns(out, r);
    out << "\r\n";
  }
}

void write_timings_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << kKeyHeader << ",build_time,eval_time\r\n";
  for (const auto& r : records) {
    write_key_columns(out, r);
    out << ',' << format_double(r.build_time) << ',' << format_double(r.eval_time) << "\r\n";
  }
}

namespace {

constexpr const char* kPlotScript = R"(import csv
import pathlib
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).parent)
for panel in sorted(here.glob("*.csv")):
    series = {}
    with panel.open() as fh:
        reader = csv.DictReader(fh)
        metric = reader.fieldnames[-1]
        for row in reader:
            series.setdefault(row["algorithm"], []).append((int(row["size"]), float(row[metric])))
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for algo, pts in sorted(series.items()):
        pts.sort()
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=algo)
    ax.set_xlabel("coreset size")
    ax.set_ylabel(metric)
    ax.set_title(panel.stem)
    ax.legend()
    fig.tight_layout()
    fig.savefig(panel.with_suffix(".png"), dpi=120)
    plt.close(fig)
)";

}  // namespace

void write_plot_data(const std::filesystem::path& dir, const std::vector<BenchRecord>& records) {
  std::filesystem::create_directories(dir);
  using Key = std::tuple<std::string, Index, std::string, Index>;  // dataset, k, algorithm, size
  std::map<Key, std::vector<double>> errors, times;
  std::vector<std::pair<std::string, Index>> panels;
  for (const auto& r : records) {
    if (r.status != "ok") continue;
    const Key key{r.dataset, r.k, r.algorithm, r.coreset_size};
    errors[key].push_back(r.error);
    times[key].push_back(r.build_time);
    if (std::find(panels.begin(), panels.end(), std::make_pair(r.dataset, r.k)) == panels.end())
      panels.emplace_back(r.dataset, r.k);
  }
  for (const auto& [dataset, k] : panels) {
    for (const char* metric : {"error", "time"}) {
      const auto& source = std::string(metric) == "error" ? errors : times;
      const std::string name = dataset + "_k" + std::to_string(k) + "_" + metric + ".csv";
      std::ofstream out(dir / name);
      out << "algorithm,size," << metric << "\n";
      for (const auto& [key, values] : source) {
        if (std::get<0>(key) != dataset || std::get<1>(key) != k) continue;
        out << csv_field(std::get<2>(key)) << ',' << std::get<3>(key) << ','
            << format_double(median(values)) << "\n";
      }
    }
  }
  std::ofstream script(dir / "plot.py");
  script << kPlotScript;
}

void write_bench_outputs(const BenchConfig& config, const std::vector<BenchRecord>& records) {
  if (config.out.empty()) return;
  const std::filesystem::path dir(config.out);
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "records.csv", std::ios::binary);
    write_records_csv(out, records);
  }
  {
    std::ofstream out(dir / "timings.csv", std::ios::binary);
    write_timings_csv(out, records);
  }
  write_plot_data(dir / "plots", records);
}

}  // namespace pcoreset
