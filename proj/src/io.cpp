#include "pcoreset/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace pcoreset {

ParseError::ParseError(const std::string& file, std::size_t line, const std::string& what)
    : std::runtime_error(file + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
      line_(line) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_number(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

template <class Int>
bool parse_integer(std::string_view text, Int& out) {
  text = trim(text);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::ifstream open_input(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

Dataset finish(WeightedPointSet points, const std::filesystem::path& path, const char* format) {
  ZeroRowFilter filtered = drop_zero_rows(points);
  Dataset ds;
  ds.name = path.stem().string();
  ds.matrix = std::move(filtered.points);
  ds.path = path.string();
  ds.format = format;
  ds.dropped_zero_rows = filtered.dropped;
  return ds;
}

}  // namespace

Dataset load_dense_csv(const std::filesystem::path& path, bool header) {
  std::ifstream in = open_input(path);
  const std::string file = path.string();
  std::vector<double> values;
  Index cols = -1;
  Index rows = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (header && lineno == 1) continue;
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cols < 0) {
      cols = static_cast<Index>(cells.size());
    } else if (static_cast<Index>(cells.size()) != cols) {
      throw ParseError(file, lineno, "expected " + std::to_string(cols) + " columns, found " +
                                         std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      if (!parse_number(cells[c], v)) {
        throw ParseError(file, lineno, "non-numeric cell " + std::to_string(c + 1) + ": '" +
                                           std::string(trim(cells[c])) + "'");
      }
      values.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw ParseError(file, lineno, "no data rows");
  DenseRows m = Eigen::Map<DenseRows>(values.data(), rows, cols);
  return finish(WeightedPointSet::unit(std::move(m)), path, "csv");
}

Dataset load_idx(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, std::ios::in | std::ios::binary);
  const std::string file = path.string();
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() < 4) throw ParseError(file, 0, "truncated magic number");
  if (bytes[0] != 0 || bytes[1] != 0) throw ParseError(file, 0, "bad magic number");
  const unsigned type = bytes[2];
  const unsigned ndims = bytes[3];
  std::size_t width = 0;
  switch (type) {
    case 0x08: case 0x09: width = 1; break;
    case 0x0B: width = 2; break;
    case 0x0C: case 0x0D: width = 4; break;
    case 0x0E: width = 8; break;
    default: throw ParseError(file, 0, "unknown element type " + std::to_string(type));
  }
  if (ndims == 0) throw ParseError(file, 0, "zero dimensions");
  if (bytes.size() < 4 + 4 * static_cast<std::size_t>(ndims)) throw ParseError(file, 0, "truncated header");
  std::vector<std::uint64_t> dims(ndims);
  for (unsigned i = 0; i < ndims; ++i) {
    const unsigned char* p = &bytes[4 + 4 * i];
    dims[i] = (std::uint64_t{p[0]} << 24) | (std::uint64_t{p[1]} << 16) | (std::uint64_t{p[2]} << 8) | p[3];
  }
  std::uint64_t cols = 1;
  for (unsigned i = 1; i < ndims; ++i) cols *= dims[i];
  const std::uint64_t count = dims[0] * cols;
  const std::size_t offset = 4 + 4 * static_cast<std::size_t>(ndims);
  if (bytes.size() != offset + count * width) {
    throw ParseError(file, 0, "expected " + std::to_string(offset + count * width) +
                                  " bytes, found " + std::to_string(bytes.size()));
  }
  DenseRows m(static_cast<Index>(dims[0]), static_cast<Index>(cols));
  for (std::uint64_t e = 0; e < count; ++e) {
    const unsigned char* p = &bytes[offset + e * width];
    std::uint64_t raw = 0;
    for (std::size_t b = 0; b < width; ++b) raw = (raw << 8) | p[b];
    double v = 0.0;
    switch (type) {
      case 0x08: v = static_cast<double>(static_cast<std::uint8_t>(raw)); break;
      case 0x09: v = static_cast<double>(static_cast<std::int8_t>(raw)); break;
      case 0x0B: v = static_cast<double>(static_cast<std::int16_t>(raw)); break;
      case 0x0C: v = static_cast<double>(static_cast<std::int32_t>(raw)); break;
      case 0x0D: {
        const auto bits = static_cast<std::uint32_t>(raw);
        float f;
        std::memcpy(&f, &bits, 4);
        v = f;
        break;
      }
      case 0x0E: std::memcpy(&v, &raw, 8); break;
    }
    m(static_cast<Index>(e / cols), static_cast<Index>(e % cols)) = v;
  }
  return finish(WeightedPointSet::unit(std::move(m)), path, "idx");
}

Dataset load_triplets(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  const std::string file = path.string();
  std::string line;
  std::size_t lineno = 0;
  Index rows = -1, cols = -1, nnz = -1;
  std::vector<Eigen::Triplet<double>> trip;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#' || body.front() == '%') continue;
    const auto fields = split_ws(body);
    if (rows < 0) {
      if (fields.size() != 3 || !parse_integer(fields[0], rows) || !parse_integer(fields[1], cols) ||
          !parse_integer(fields[2], nnz) || rows < 0 || cols < 1 || nnz < 0) {
        throw ParseError(file, lineno, "malformed header, expected 'rows cols nnz'");
      }
      trip.reserve(static_cast<std::size_t>(nnz));
      continue;
    }
    Index i = 0, j = 0;
    double v = 0.0;
    if (fields.size() != 3 || !parse_integer(fields[0], i) || !parse_integer(fields[1], j) ||
        !parse_number(fields[2], v)) {
      throw ParseError(file, lineno, "malformed entry, expected 'i j v'");
    }
    if (i < 0 || i >= rows || j < 0 || j >= cols) {
      throw ParseError(file, lineno, "index (" + std::to_string(i) + ", " + std::to_string(j) +
                                         ") outside declared " + std::to_string(rows) + "x" +
                                         std::to_string(cols));
    }
    if (static_cast<Index>(trip.size()) >= nnz) throw ParseError(file, lineno, "more entries than declared nnz");
    trip.emplace_back(i, j, v);
  }
  if (rows < 0) throw ParseError(file, lineno, "missing header");
  if (static_cast<Index>(trip.size()) != nnz) {
    throw ParseError(file, lineno, "declared " + std::to_string(nnz) + " entries, found " +
                                       std::to_string(trip.size()));
  }
  SparseRows m(rows, cols);
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return finish(WeightedPointSet::unit(std::move(m)), path, "triplets");
}

std::string detect_format(const std::filesystem::path& path) {
  const std::string name = path.filename().string();
  const std::string ext = path.extension().string();
  if (ext == ".csv") return "csv";
  if (ext == ".idx" || name.find("ubyte") != std::string::npos) return "idx";
  if (ext == ".tri" || ext == ".triplets" || ext == ".txt") return "triplets";
  throw std::invalid_argument("cannot infer format of " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path, const std::string& format, bool header) {
  const std::string f = format.empty() ? detect_format(path) : format;
  if (f == "csv") return load_dense_csv(path, header);
  if (f == "idx") return load_idx(path);
  if (f == "triplets") return load_triplets(path);
  throw std::invalid_argument("unknown input format '" + f + "'");
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), ptr);
}

void write_dense_csv(const std::filesystem::path& path, const DenseRows& rows) {
  std::ofstream out = open_output(path);
  for (Index i = 0; i < rows.rows(); ++i) {
    for (Index j = 0; j < rows.cols(); ++j) {
      if (j) out << ',';
      out << format_double(rows(i, j));
    }
    out << '\n';
  }
}

void write_idx(const std::filesystem::path& path, const std::vector<std::uint32_t>& dims,
               std::uint8_t type, const std::vector<double>& values) {
  std::size_t count = 1;
  for (auto d : dims) count *= d;
  if (count != values.size()) throw std::invalid_argument("write_idx: value count does not match dims");
  std::ofstream out = open_output(path, std::ios::out | std::ios::binary);
  const unsigned char magic[4] = {0, 0, type, static_cast<unsigned char>(dims.size())};
  out.write(reinterpret_cast<const char*>(magic), 4);
  auto put_be = [&](std::uint64_t raw, std::size_t width) {
    for (std::size_t b = 0; b < width; ++b) {
      const auto byte = static_cast<char>((raw >> (8 * (width - 1 - b))) & 0xFF);
      out.put(byte);
    }
  };
  for (auto d : dims) put_be(d, 4);
  for (double v : values) {
    switch (type) {
      case 0x08: put_be(static_cast<std::uint8_t>(v), 1); break;
      case 0x0D: {
        const float f = static_cast<float>(v);
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        put_be(bits, 4);
        break;
      }
      case 0x0E: {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        put_be(bits, 8);
        break;
      }
      default: throw std::invalid_argument("write_idx: unsupported element type");
    }
  }
}

void write_triplets(const std::filesystem::path& path, const SparseRows& rows) {
  std::ofstream out = open_output(path);
  out << rows.rows() << ' ' << rows.cols() << ' ' << rows.nonZeros() << '\n';
  for (Index i = 0; i < rows.outerSize(); ++i)
    for (SparseRows::InnerIterator it(rows, i); it; ++it)
      out << i << ' ' << it.col() << ' ' << format_double(it.value()) << '\n';
}

void write_weighted_csv(std::ostream& out, const Coreset& coreset) {
  for (Index i = 0; i < coreset.size(); ++i) {
    for (Index j = 0; j < coreset.representatives.cols(); ++j) {
      out << format_double(coreset.representatives(i, j)) << ',';
    }
    out << format_double(coreset.scale_weights[i]) << '\n';
  }
}

void write_weighted_csv(const std::filesystem::path& path, const Coreset& coreset) {
  std::ofstream out = open_output(path);
  write_weighted_csv(out, coreset);
}

Coreset read_weighted_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  const std::string file = path.string();
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() < 2) throw ParseError(file, lineno, "need at least one coordinate and a weight");
    if (!rows.empty() && cells.size() != rows.front().size()) {
      throw ParseError(file, lineno, "inconsistent column count");
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!parse_number(cells[c], row[c])) throw ParseError(file, lineno, "non-numeric cell " + std::to_string(c + 1));
    }
    if (!(row.back() > 0.0)) throw ParseError(file, lineno, "weight must be positive");
    rows.push_back(std::move(row));
  }
  Coreset c;
  const auto m = static_cast<Index>(rows.size());
  const Index d = m ? static_cast<Index>(rows.front().size()) - 1 : 0;
  c.representatives.resize(m, d);
  c.scale_weights.resize(m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < d; ++j) c.representatives(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    c.scale_weights[i] = rows[static_cast<std::size_t>(i)].back();
  }
  return c;
}

}  // namespace pcoreset
