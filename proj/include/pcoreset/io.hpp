#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcoreset/types.hpp"

namespace pcoreset {

struct Dataset {
  std::string name;
  WeightedPointSet matrix;
  std::string path;
  std::string format;  // "csv", "idx", "triplets", "synth"
  Index dropped_zero_rows = 0;
};

/// Malformed input. `line()` is 1-based; 0 when the error has no line
/// (binary formats report the byte offset in the message instead).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Dense rows, comma separated, no header unless `header` is set. All-zero
/// rows are dropped and counted.
Dataset load_dense_csv(const std::filesystem::path& path, bool header = false);

/// IDX (MNIST layout): magic 0x0000TTNN with element type TT and NN
/// big-endian uint32 dimensions. The first dimension indexes rows; the rest
/// are flattened row-major. Raw values are kept (no pixel rescaling).
Dataset load_idx(const std::filesystem::path& path);

/// Text triplets: header `rows cols nnz`, then nnz lines `i j v`, 0-based.
/// Rows are stored sparse; duplicate entries are summed.
Dataset load_triplets(const std::filesystem::path& path);

/// Dispatches on `format` ("csv", "idx", "triplets") or on the file
/// extension when `format` is empty.
Dataset load_dataset(const std::filesystem::path& path, const std::string& format = "",
                     bool header = false);

std::string detect_format(const std::filesystem::path& path);

/// Shortest decimal text that round-trips the double exactly.
std::string format_double(double v);

void write_dense_csv(const std::filesystem::path& path, const DenseRows& rows);

/// IDX writer. `type` is the element code (0x08 ubyte, 0x0D float, 0x0E double).
void write_idx(const std::filesystem::path& path, const std::vector<std::uint32_t>& dims,
               std::uint8_t type, const std::vector<double>& values);

void write_triplets(const std::filesystem::path& path, const SparseRows& rows);

/// Weighted-matrix export: one CSV row per representative with the weight
/// as the trailing column.
void write_weighted_csv(const std::filesystem::path& path, const Coreset& coreset);
void write_weighted_csv(std::ostream& out, const Coreset& coreset);
Coreset read_weighted_csv(const std::filesystem::path& path);

}  // namespace pcoreset
