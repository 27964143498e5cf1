#pragma once

// Dense linear algebra over F_p for the small systems met in residue fields
// (subfield coordinates, Artin-Schreier equations).

#include <optional>
#include <vector>

#include "exsplit/modular.hpp"

namespace exsplit::fp_linalg {

/// rows x cols, row-major.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<u64> a;

  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}
  u64& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  u64 at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

/// One solution of A x = b with every free variable set to 0, or nullopt.
std::optional<std::vector<u64>> solve(Matrix A, std::vector<u64> b, u64 p);

/// Basis of the right kernel of A.
std::vector<std::vector<u64>> kernel(Matrix A, u64 p);

}  // namespace exsplit::fp_linalg
