#pragma once

#include <cstdint>
#include <random>

#include "blockpos/core_linalg.hpp"

namespace blockpos {

/// Seeded source of Gaussian test data. Same seed, same stream.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  /// Entries with independent standard normal real and imaginary parts.
  ComplexMatrix complex_gaussian(Index rows, Index cols);
  ComplexVector complex_vector(Index n) { return complex_gaussian(n, 1).col(0); }
  HermitianMatrix hermitian(Index n);
  /// U diag(s) V* with Haar-like unitaries and the given singular values.
  ComplexMatrix with_singular_values(Index rows, Index cols, const RealVector& s);
  ComplexMatrix unitary(Index n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace blockpos
