#pragma once

#include <random>

#include "psdrank/rational_matrix.hpp"

namespace psdrank::testing {

inline Rational frac(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

/// Random nonnegative integer matrix of rank <= r as a product of nonnegative factors.
inline RationalMatrix random_low_rank(std::mt19937_64& rng, std::size_t p, std::size_t q, std::size_t r,
                                      int max_entry = 9) {
  std::uniform_int_distribution<int> entry(0, max_entry);
  RationalMatrix f(p, r), g(r, q);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < r; ++j) f(i, j) = entry(rng);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < q; ++j) g(i, j) = entry(rng);
  return f * g;
}

inline RationalMatrix random_positive_rank(std::mt19937_64& rng, std::size_t p, std::size_t q, std::size_t r) {
  for (;;) {
    RationalMatrix m = random_low_rank(rng, p, q, r);
    bool positive = true;
    for (std::size_t i = 0; i < p && positive; ++i)
      for (std::size_t j = 0; j < q; ++j) positive = positive && m(i, j) > 0;
    if (positive && exact_rank(m) == r) return m;
  }
}

}  // namespace psdrank::testing
