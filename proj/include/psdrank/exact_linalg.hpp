#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace psdrank {

/// Division-free determinant by expansion over column subsets (Laplace
/// recursion with memoisation). Works over any commutative ring; cost is
/// O(n 2^n) ring multiplications, so it is meant for n <= ~10.
template <typename Ring>
Ring determinant_expand(const std::vector<std::vector<Ring>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return Ring(1);
  // minors[S] = det of rows 0..|S|-1 restricted to the columns in S.
  std::vector<Ring> minors(std::size_t{1} << n);
  std::vector<bool> present(minors.size(), false);
  minors[0] = Ring(1);
  present[0] = true;
  for (std::uint32_t s = 1; s < minors.size(); ++s) {
    const int row = __builtin_popcount(s) - 1;
    Ring acc{};
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(s & (1u << j))) continue;
      const std::uint32_t rest = s & ~(1u << j);
      // Sign from the number of selected columns after j (expanding along the last row).
      const int after = __builtin_popcount(s >> (j + 1));
      if (!present[rest]) continue;
      Ring term = a[row][j] * minors[rest];
      if (after % 2 == 0) acc += term;
      else acc -= term;
      any = true;
    }
    if (any) {
      minors[s] = acc;
      present[s] = true;
    }
  }
  return minors.back();
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
/// Row-major storage; the matrix is consumed.
std::size_t bareiss_rank(std::vector<mpz_class> entries, std::size_t rows, std::size_t cols);

/// Rank of an integer matrix modulo a prime p < 2^32.
std::size_t modular_rank(const std::vector<mpz_class>& entries, std::size_t rows, std::size_t cols,
                         std::uint64_t prime);

/// Determinant of a square rational matrix by Gaussian elimination.
mpq_class rational_determinant(std::vector<std::vector<mpq_class>> a);

}  // namespace psdrank
