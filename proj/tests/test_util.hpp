#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "pcoreset/types.hpp"

namespace pcoreset::testing {

inline Matrix gaussian(std::mt19937_64& gen, Index rows, Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = n(gen);
  return m;
}

inline Vector gaussian_vector(std::mt19937_64& gen, Index d) {
  return gaussian(gen, d, 1).col(0);
}

inline WeightedPointSet random_points(std::mt19937_64& gen, Index n, Index d, bool random_weights = false) {
  DenseRows m = gaussian(gen, n, d);
  Vector w = Vector::Ones(n);
  if (random_weights) {
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (Index i = 0; i < n; ++i) w[i] = u(gen);
  }
  return {std::move(m), std::move(w)};
}

inline Subspace random_subspace(std::mt19937_64& gen, Index d, Index j) {
  return Subspace::spanned_by(gaussian(gen, d, j));
}

inline Line random_line(std::mt19937_64& gen, Index d) {
  return Line::through(gaussian_vector(gen, d));
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("pcoreset-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace pcoreset::testing
