#pragma once

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace psdrank {

/// Multivariate polynomial with exact integer coefficients over a named,
/// ordered variable list. Zero coefficients are never stored.
///
/// A default-constructed polynomial is the zero polynomial with no variables;
/// it combines with a polynomial over any variable list.
class SparsePoly {
 public:
  static constexpr std::size_t kMaxVars = 12;
  using Exponents = std::array<std::uint8_t, kMaxVars>;

  struct ExponentHash {
    std::size_t operator()(const Exponents& e) const noexcept;
  };
  using TermMap = std::unordered_map<Exponents, mpz_class, ExponentHash>;
  using Term = std::pair<Exponents, mpz_class>;

  SparsePoly() = default;
  explicit SparsePoly(std::vector<std::string> variables);
  /// Constant polynomial with no variables yet.
  explicit SparsePoly(long constant);

  static SparsePoly constant(std::vector<std::string> variables, const mpz_class& c);
  static SparsePoly variable(std::vector<std::string> variables, std::size_t index);

  const std::vector<std::string>& variables() const { return vars_; }
  std::size_t num_variables() const { return vars_.size(); }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  /// Adds `c` to the coefficient of the monomial with exponents `e`.
  void add_term(const Exponents& e, const mpz_class& c);
  mpz_class coefficient(const Exponents& e) const;

  SparsePoly& operator+=(const SparsePoly& other);
  SparsePoly& operator-=(const SparsePoly& other);
  SparsePoly& operator*=(const mpz_class& c);
  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b);
  friend SparsePoly operator*(SparsePoly a, const mpz_class& c) { return a *= c; }
  SparsePoly operator-() const;
  friend bool operator==(const SparsePoly& a, const SparsePoly& b);

  int total_degree() const;
  bool is_homogeneous() const;
  /// Degree in the given variable block, or -1 if terms disagree.
  int homogeneous_degree_in(std::span<const std::size_t> block) const;

  /// Replaces variable i by images[i]; all images share one variable list.
  SparsePoly substitute(const std::vector<SparsePoly>& images) const;
  SparsePoly rename(std::vector<std::string> new_names) const;

  mpq_class evaluate(std::span<const mpq_class> point) const;
  mpz_class evaluate(std::span<const mpz_class> point) const;

  mpz_class content() const;
  /// Divides by the content and flips the sign so the grevlex-leading
  /// coefficient is positive.
  SparsePoly normalized() const;

  /// Terms in descending graded reverse lexicographic order.
  std::vector<Term> sorted_terms() const;

  /// True when `a` precedes `b` in descending grevlex order over n variables.
  static bool grevlex_greater(const Exponents& a, const Exponents& b, std::size_t n);

  std::string to_string() const;

 private:
  void adopt_variables(const SparsePoly& other);

  std::vector<std::string> vars_;
  TermMap terms_;
};

}  // namespace psdrank
