#include "psdrank/exact_linalg.hpp"

#include <utility>

namespace psdrank {

std::size_t bareiss_rank(std::vector<mpz_class> a, std::size_t rows, std::size_t cols) {
  auto at = [&](std::size_t i, std::size_t j) -> mpz_class& { return a[i * cols + j]; };
  mpz_class prev = 1;
  mpz_class tmp;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rows;
    for (std::size_t i = rank; i < rows; ++i) {
      if (at(i, col) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot == rows) continue;
    if (pivot != rank) {
      for (std::size_t j = col; j < cols; ++j) std::swap(at(pivot, j), at(rank, j));
    }
    const mpz_class& p = at(rank, col);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      const mpz_class f = at(i, col);
      for (std::size_t j = col + 1; j < cols; ++j) {
        // a_ij <- (p * a_ij - f * a_rj) / prev, exact by Sylvester's identity.
        mpz_mul(tmp.get_mpz_t(), p.get_mpz_t(), at(i, j).get_mpz_t());
        mpz_submul(tmp.get_mpz_t(), f.get_mpz_t(), at(rank, j).get_mpz_t());
        mpz_divexact(at(i, j).get_mpz_t(), tmp.get_mpz_t(), prev.get_mpz_t());
      }
      at(i, col) = 0;
    }
    prev = p;
    ++rank;
  }
  return rank;
}

std::size_t modular_rank(const std::vector<mpz_class>& entries, std::size_t rows, std::size_t cols,
                         std::uint64_t prime) {
  std::vector<std::uint64_t> a(entries.size());
  mpz_class r;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    mpz_fdiv_r_ui(r.get_mpz_t(), entries[i].get_mpz_t(), prime);
    a[i] = r.get_ui();
  }
  auto inverse = [prime](std::uint64_t x) {
    std::uint64_t result = 1, base = x % prime, e = prime - 2;
    while (e) {
      if (e & 1) result = result * base % prime;
      base = base * base % prime;
      e >>= 1;
    }
    return result;
  };
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rows;
    for (std::size_t i = rank; i < rows; ++i) {
      if (a[i * cols + col] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot == rows) continue;
    if (pivot != rank)
      for (std::size_t j = 0; j < cols; ++j) std::swap(a[pivot * cols + j], a[rank * cols + j]);
    const std::uint64_t inv = inverse(a[rank * cols + col]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      const std::uint64_t f = a[i * cols + col] * inv % prime;
      if (f == 0) continue;
      for (std::size_t j = col; j < cols; ++j) {
        a[i * cols + j] = (a[i * cols + j] + (prime - f) * a[rank * cols + j]) % prime;
      }
    }
    ++rank;
  }
  return rank;
}

mpq_class rational_determinant(std::vector<std::vector<mpq_class>> a) {
  const std::size_t n = a.size();
  mpq_class det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    for (std::size_t i = col; i < n; ++i) {
      if (a[i][col] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t i = col + 1; i < n; ++i) {
      if (a[i][col] == 0) continue;
      const mpq_class f = a[i][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[col][j];
    }
  }
  return det;
}

}  // namespace psdrank
