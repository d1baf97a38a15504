#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace psdrank {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "3", "-2/7", "0.125", "1e-3" or "2.5E2" into an exact rational.
Rational parse_rational(const std::string& text);

/// Dense exact matrix, row-major. Equality is exact.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols);
  RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static RationalMatrix identity(std::size_t n);
  static RationalMatrix from_rows(const std::vector<std::vector<Rational>>& rows);
  /// Circulant with first row (a, b, c), i.e. [[a,b,c],[c,a,b],[b,c,a]].
  static RationalMatrix circulant3(const Rational& a, const Rational& b, const Rational& c);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j);
  const Rational& operator()(std::size_t i, std::size_t j) const;

  std::vector<Rational> row(std::size_t i) const;
  std::vector<Rational> col(std::size_t j) const;
  RationalMatrix transpose() const;
  RationalMatrix submatrix(const std::vector<std::size_t>& rows,
                           const std::vector<std::size_t>& cols) const;
  RationalMatrix scaled(const Rational& s) const;

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b);

  std::vector<double> to_doubles() const;
  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// A RationalMatrix whose entries are all >= 0 and which has no zero row.
class NonnegativeMatrix {
 public:
  /// Throws NegativeEntry or ZeroRow.
  explicit NonnegativeMatrix(RationalMatrix m);

  const RationalMatrix& matrix() const { return m_; }
  operator const RationalMatrix&() const { return m_; }
  std::size_t rows() const { return m_.rows(); }
  std::size_t cols() const { return m_.cols(); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  bool has_zero_entry() const;
  bool is_row_stochastic() const;

 private:
  RationalMatrix m_;
};

/// Removes all-zero rows; the explicit preprocessing step for inputs with zero rows.
RationalMatrix drop_zero_rows(const RationalMatrix& m);

struct RankFactorization {
  RationalMatrix a_factor;  // p x r, last column all ones
  RationalMatrix b_factor;  // r x q
  std::vector<std::size_t> column_pivots;  // columns of m copied into a_factor
  std::vector<std::size_t> row_pivots;     // rows used to solve for b_factor
};

struct RowNormalization {
  NonnegativeMatrix normalized;
  std::vector<Rational> scaling;  // original row sums
};

std::size_t exact_rank(const RationalMatrix& m);

/// Rank factorization M = A B with A = [independent columns of M | 1].
/// Pivots are chosen greedily in index order. Throws NoOnesInSpan.
RankFactorization rank_factorization(const RationalMatrix& m);

RowNormalization row_normalize(const NonnegativeMatrix& m);

/// Smallest k with rank(m) <= k(k+1)/2.
std::size_t psd_rank_lower_bound(const RationalMatrix& m);
std::size_t psd_rank_lower_bound_for_rank(std::size_t rank);

/// Solves the square system a x = b exactly; a must be invertible.
std::vector<Rational> solve_exact(const RationalMatrix& a, const std::vector<Rational>& b);
RationalMatrix inverse(const RationalMatrix& a);
Rational determinant(const RationalMatrix& a);

}  // namespace psdrank
