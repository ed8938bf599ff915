#pragma once

#include <random>

#include "ortholab/types.hpp"

namespace ortholab {

/// splitmix64 finalizer; used to derive independent per-task seeds.
constexpr Seed mix_seed(Seed x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for task `index` of a run started from `master`. Independent of how
/// tasks are distributed over workers.
constexpr Seed derive_seed(Seed master, std::uint64_t index) noexcept {
  return mix_seed(mix_seed(master) ^ mix_seed(index + 0x5bd1e995ULL));
}

using Rng = std::mt19937_64;

inline Matrix gaussian_matrix(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  // Fill column by column so the stream order is fixed.
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

inline Vector gaussian_vector(Rng& rng, Index n) { return gaussian_matrix(rng, n, 1).col(0); }

}  // namespace ortholab
