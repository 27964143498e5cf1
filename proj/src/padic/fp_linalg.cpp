#include "exsplit/fp_linalg.hpp"

namespace exsplit::fp_linalg {

namespace {

// Row-reduce [A | b] in place; returns pivot column per pivot row.
std::vector<std::size_t> reduce(Matrix& A, std::vector<u64>* b, u64 p) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < A.cols && row < A.rows; ++col) {
    std::size_t sel = row;
    while (sel < A.rows && A.at(sel, col) == 0) ++sel;
    if (sel == A.rows) continue;
    if (sel != row) {
      for (std::size_t j = 0; j < A.cols; ++j) std::swap(A.at(sel, j), A.at(row, j));
      if (b) std::swap((*b)[sel], (*b)[row]);
    }
    const u64 inv = inv_mod(A.at(row, col), p);
    for (std::size_t j = 0; j < A.cols; ++j) A.at(row, j) = mul_mod(A.at(row, j), inv, p);
    if (b) (*b)[row] = mul_mod((*b)[row], inv, p);
    for (std::size_t i = 0; i < A.rows; ++i) {
      if (i == row || A.at(i, col) == 0) continue;
      const u64 f = A.at(i, col);
      for (std::size_t j = 0; j < A.cols; ++j) A.at(i, j) = sub_mod(A.at(i, j), mul_mod(f, A.at(row, j), p), p);
      if (b) (*b)[i] = sub_mod((*b)[i], mul_mod(f, (*b)[row], p), p);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::optional<std::vector<u64>> solve(Matrix A, std::vector<u64> b, u64 p) {
  auto pivots = reduce(A, &b, p);
  for (std::size_t i = pivots.size(); i < A.rows; ++i)
    if (b[i] != 0) return std::nullopt;
  std::vector<u64> x(A.cols, 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = b[r];
  return x;
}

std::vector<std::vector<u64>> kernel(Matrix A, u64 p) {
  auto pivots = reduce(A, nullptr, p);
  std::vector<bool> is_pivot(A.cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<u64>> basis;
  for (std::size_t free = 0; free < A.cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<u64> v(A.cols, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = sub_mod(0, A.at(r, free), p);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace exsplit::fp_linalg
