#include "psdrank/rational_matrix.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "psdrank/errors.hpp"
#include "psdrank/exact_linalg.hpp"

namespace psdrank {

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty rational literal");
  try {
    if (auto slash = text.find('/'); slash != std::string::npos) {
      Integer num(text.substr(0, slash), 10);
      Integer den(text.substr(slash + 1), 10);
      if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + raw + "'");
      Rational r(num, den);
      r.canonicalize();
      return r;
    }
    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') negative = text[pos++] == '-';
    std::string digits;
    long exponent = 0;
    bool seen_digit = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits.push_back(text[pos++]);
      seen_digit = true;
    }
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        digits.push_back(text[pos++]);
        --exponent;
        seen_digit = true;
      }
    }
    if (!seen_digit) throw Error(ErrorCode::ParseError, "not a number: '" + raw + "'");
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
      ++pos;
      std::size_t used = 0;
      exponent += std::stol(text.substr(pos), &used);
      pos += used;
    }
    if (pos != text.size()) throw Error(ErrorCode::ParseError, "trailing characters in '" + raw + "'");
    Integer num(digits, 10);
    if (negative) num = -num;
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    Rational r = exponent >= 0 ? Rational(num * scale) : Rational(num, scale);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::ParseError, "not a number: '" + raw + "'");
  } catch (const std::out_of_range&) {
    throw Error(ErrorCode::ParseError, "exponent out of range: '" + raw + "'");
  }
}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<std::vector<Rational>>& rows) {
  RationalMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

RationalMatrix RationalMatrix::circulant3(const Rational& a, const Rational& b, const Rational& c) {
  return RationalMatrix{{a, b, c}, {c, a, b}, {b, c, a}};
}

Rational& RationalMatrix::operator()(std::size_t i, std::size_t j) {
  if (i >= rows_ || j >= cols_) throw Error(ErrorCode::DimensionMismatch, "index out of range");
  return data_[i * cols_ + j];
}

const Rational& RationalMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw Error(ErrorCode::DimensionMismatch, "index out of range");
  return data_[i * cols_ + j];
}

std::vector<Rational> RationalMatrix::row(std::size_t i) const {
  return {data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_};
}

std::vector<Rational> RationalMatrix::col(std::size_t j) const {
  std::vector<Rational> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RationalMatrix RationalMatrix::submatrix(const std::vector<std::size_t>& rows,
                                         const std::vector<std::size_t>& cols) const {
  RationalMatrix s(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) s(i, j) = (*this)(rows[i], cols[j]);
  return s;
}

RationalMatrix RationalMatrix::scaled(const Rational& s) const {
  RationalMatrix r = *this;
  for (auto& x : r.data_) x *= s;
  return r;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "matrix product shapes");
  RationalMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::vector<double> RationalMatrix::to_doubles() const {
  std::vector<double> out(data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) out[i] = data_[i].get_d();
  return out;
}

std::string RationalMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

NonnegativeMatrix::NonnegativeMatrix(RationalMatrix m) : m_(std::move(m)) {
  for (std::size_t i = 0; i < m_.rows(); ++i) {
    bool nonzero = false;
    for (std::size_t j = 0; j < m_.cols(); ++j) {
      if (m_(i, j) < 0) {
        throw Error(ErrorCode::NegativeEntry,
                    "entry (" + std::to_string(i) + "," + std::to_string(j) + ") is negative");
      }
      nonzero = nonzero || m_(i, j) != 0;
    }
    if (!nonzero) throw Error(ErrorCode::ZeroRow, "row " + std::to_string(i) + " is zero");
  }
}

bool NonnegativeMatrix::has_zero_entry() const {
  for (std::size_t i = 0; i < m_.rows(); ++i)
    for (std::size_t j = 0; j < m_.cols(); ++j)
      if (m_(i, j) == 0) return true;
  return false;
}

bool NonnegativeMatrix::is_row_stochastic() const {
  for (std::size_t i = 0; i < m_.rows(); ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < m_.cols(); ++j) s += m_(i, j);
    if (s != 1) return false;
  }
  return true;
}

RationalMatrix drop_zero_rows(const RationalMatrix& m) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0) {
        keep.push_back(i);
        break;
      }
    }
  }
  std::vector<std::size_t> all(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) all[j] = j;
  return m.submatrix(keep, all);
}

std::size_t exact_rank(const RationalMatrix& m) {
  // Clear denominators row by row, then eliminate fraction-free.
  std::vector<Integer> ints(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Integer v = m(i, j).get_num() * (l / m(i, j).get_den());
      ints[i * m.cols() + j] = v;
    }
  }
  return bareiss_rank(std::move(ints), m.rows(), m.cols());
}

namespace {

RationalMatrix from_columns(const std::vector<std::vector<Rational>>& cols, std::size_t rows) {
  RationalMatrix a(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i) a(i, j) = cols[j][i];
  return a;
}

}  // namespace

RankFactorization rank_factorization(const RationalMatrix& m) {
  const std::size_t p = m.rows();
  const std::size_t r = exact_rank(m);
  const std::vector<Rational> ones(p, Rational(1));

  RationalMatrix augmented(p, m.cols() + 1);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) augmented(i, j) = m(i, j);
    augmented(i, m.cols()) = 1;
  }
  if (exact_rank(augmented) != r) {
    throw Error(ErrorCode::NoOnesInSpan, "the all-ones vector is not in the column span");
  }

  std::vector<std::vector<Rational>> columns{ones};
  RankFactorization f;
  // Greedy: keep a column if it is independent of the ones vector and the columns kept so far.
  for (std::size_t j = 0; j < m.cols() && columns.size() < r; ++j) {
    auto trial = columns;
    trial.push_back(m.col(j));
    if (exact_rank(from_columns(trial, p)) == trial.size()) {
      columns = std::move(trial);
      f.column_pivots.push_back(j);
    }
  }
  // Move the ones column last.
  std::rotate(columns.begin(), columns.begin() + 1, columns.end());
  f.a_factor = from_columns(columns, p);

  std::vector<std::vector<Rational>> chosen_rows;
  for (std::size_t i = 0; i < p && chosen_rows.size() < r; ++i) {
    auto trial = chosen_rows;
    trial.push_back(f.a_factor.row(i));
    if (exact_rank(RationalMatrix::from_rows(trial)) == trial.size()) {
      chosen_rows = std::move(trial);
      f.row_pivots.push_back(i);
    }
  }
  std::vector<std::size_t> all_cols(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) all_cols[j] = j;
  const RationalMatrix square = RationalMatrix::from_rows(chosen_rows);
  const RationalMatrix rhs = m.submatrix(f.row_pivots, all_cols);
  f.b_factor = inverse(square) * rhs;
  return f;
}

RowNormalization row_normalize(const NonnegativeMatrix& m) {
  RationalMatrix n = m.matrix();
  std::vector<Rational> sums(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) sums[i] += m(i, j);
    for (std::size_t j = 0; j < m.cols(); ++j) n(i, j) /= sums[i];
  }
  return RowNormalization{NonnegativeMatrix(std::move(n)), std::move(sums)};
}

std::size_t psd_rank_lower_bound_for_rank(std::size_t rank) {
  std::size_t k = 0;
  while (k * (k + 1) / 2 < rank) ++k;
  return k;
}

std::size_t psd_rank_lower_bound(const RationalMatrix& m) {
  return psd_rank_lower_bound_for_rank(exact_rank(m));
}

RationalMatrix inverse(const RationalMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::DimensionMismatch, "inverse of non-square matrix");
  RationalMatrix w = a;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    for (std::size_t i = col; i < n; ++i)
      if (w(i, col) != 0) {
        pivot = i;
        break;
      }
    if (pivot == n) throw Error(ErrorCode::DimensionMismatch, "singular matrix");
    if (pivot != col)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(w(pivot, j), w(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    const Rational d = w(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      w(col, j) /= d;
      inv(col, j) /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == col || w(i, col) == 0) continue;
      const Rational f = w(i, col);
      for (std::size_t j = 0; j < n; ++j) {
        w(i, j) -= f * w(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

std::vector<Rational> solve_exact(const RationalMatrix& a, const std::vector<Rational>& b) {
  const RationalMatrix inv = inverse(a);
  std::vector<Rational> x(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) x[i] += inv(i, j) * b[j];
  return x;
}

Rational determinant(const RationalMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::DimensionMismatch, "determinant shape");
  std::vector<std::vector<Rational>> rows(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) rows[i] = a.row(i);
  return rational_determinant(std::move(rows));
}

}  // namespace psdrank
