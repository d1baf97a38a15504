#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "psdrank/exact_linalg.hpp"
#include "psdrank/rational_matrix.hpp"
#include "psdrank/sparse_poly.hpp"
#include "psdrank/ternary_form.hpp"

namespace psdrank {

/// Variables of the three symbolic lines: d1 d2 d3 e1 e2 e3 f1 f2 f3.
std::vector<std::string> line_variable_names();
/// Entries of the 3x3 matrix N in row-major order: n11 n12 ... n33.
std::vector<std::string> matrix_variable_names();

namespace detail {

template <typename Ring>
std::array<std::array<TernaryForm<Ring>, 3>, 3> adjugate3(
    const std::array<std::array<TernaryForm<Ring>, 3>, 3>& x) {
  std::array<std::array<TernaryForm<Ring>, 3>, 3> y;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      // adj(X)_{ab} = (-1)^{a+b} * minor of X with row b and column a removed.
      int r0 = (b + 1) % 3, r1 = (b + 2) % 3, c0 = (a + 1) % 3, c1 = (a + 2) % 3;
      if (r0 > r1) std::swap(r0, r1);
      if (c0 > c1) std::swap(c0, c1);
      TernaryForm<Ring> minor = x[r0][c0] * x[r1][c1] - x[r0][c1] * x[r1][c0];
      y[a][b] = ((a + b) % 2 == 0) ? minor : TernaryForm<Ring>(minor.degree()) - minor;
    }
  }
  return y;
}

template <typename Ring>
TernaryForm<Ring> det3(const std::array<std::array<TernaryForm<Ring>, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace detail

/// The symmetric conic matrix X with zero diagonal (the three points are the
/// coordinate points) in the variables (x12, x13, x23), which play the role of
/// (x, y, z) in the resulting quadric. Returns l^T adj(X) l: the condition that
/// the line l is tangent to X.
template <typename Ring>
TernaryQuadric<Ring> tangency_quadric(const std::array<Ring, 3>& line) {
  using IntForm = TernaryForm<mpz_class>;
  const mpz_class zero = 0, one = 1;
  const IntForm u = IntForm::linear(one, zero, zero);
  const IntForm v = IntForm::linear(zero, one, zero);
  const IntForm w = IntForm::linear(zero, zero, one);
  const IntForm o(1);
  const std::array<std::array<IntForm, 3>, 3> x = {{{o, u, v}, {u, o, w}, {v, w, o}}};
  const auto y = detail::adjugate3(x);

  TernaryQuadric<Ring> q;
  for (std::size_t s = 0; s < 6; ++s) {
    Ring acc{};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const mpz_class c = y[a][b].coefficient(kQuadricMonomials[s]);
        if (c == 0) continue;
        acc += Ring(Ring(line[a] * line[b]) * c);
      }
    }
    q.coeffs[s] = acc;
  }
  return q;
}

template <typename Ring>
std::array<TernaryQuadric<Ring>, 3> tangency_quadrics(const std::array<Ring, 3>& d,
                                                      const std::array<Ring, 3>& e,
                                                      const std::array<Ring, 3>& f) {
  return {tangency_quadric(d), tangency_quadric(e), tangency_quadric(f)};
}

/// The 6x6 matrix whose rows are the coefficient vectors of q1, q2, q3 and of
/// the partial derivatives of their Jacobian determinant.
template <typename Ring>
std::vector<std::vector<Ring>> resultant_matrix(const TernaryQuadric<Ring>& q1,
                                                const TernaryQuadric<Ring>& q2,
                                                const TernaryQuadric<Ring>& q3) {
  const std::array<TernaryForm<Ring>, 3> forms = {q1.to_form(), q2.to_form(), q3.to_form()};
  std::array<std::array<TernaryForm<Ring>, 3>, 3> jac;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) jac[i][j] = forms[i].derivative(j);
  const TernaryForm<Ring> jdet = detail::det3(jac);

  std::vector<std::vector<Ring>> rows;
  for (const auto* q : {&q1, &q2, &q3}) rows.emplace_back(q->coeffs.begin(), q->coeffs.end());
  for (int v = 0; v < 3; ++v) {
    const auto dq = TernaryQuadric<Ring>::from_form(jdet.derivative(v));
    rows.emplace_back(dq.coeffs.begin(), dq.coeffs.end());
  }
  return rows;
}

/// Resultant of three ternary quadrics by the 6x6 determinant construction.
/// Equals 512 * Res (Res normalised by Res(x^2, y^2, z^2) = 1) up to sign;
/// the fixed factor does not affect the vanishing locus.
template <typename Ring>
Ring resultant_ternary_quadrics(const TernaryQuadric<Ring>& q1, const TernaryQuadric<Ring>& q2,
                                const TernaryQuadric<Ring>& q3) {
  return determinant_expand(resultant_matrix(q1, q2, q3));
}

/// Substitutes (x, y, z) -> g (x, y, z) into a form.
template <typename Ring>
TernaryForm<Ring> compose_linear(const TernaryForm<Ring>& f,
                                 const std::array<std::array<Ring, 3>, 3>& g) {
  std::array<TernaryForm<Ring>, 3> images;
  for (int i = 0; i < 3; ++i) images[i] = TernaryForm<Ring>::linear(g[i][0], g[i][1], g[i][2]);
  TernaryForm<Ring> out(f.degree());
  for (const auto& [m, c] : f.coefficients()) {
    TernaryForm<Ring> term(0);
    term.add({0, 0, 0}, c);
    for (int v = 0; v < 3; ++v)
      for (int k = 0; k < m[v]; ++k) term = term * images[v];
    out += term;
  }
  return out;
}

using RationalQuadric = TernaryQuadric<Rational>;

/// Macaulay's formula at degree 4: det of the 15x15 Macaulay matrix divided
/// by its 3x3 extraneous minor. Returns nullopt when that minor vanishes.
std::optional<Rational> macaulay_resultant(const RationalQuadric& q1, const RationalQuadric& q2,
                                           const RationalQuadric& q3);

/// Macaulay's formula, retried under unimodular coordinate changes (which
/// leave the resultant unchanged) until the extraneous minor is nonzero.
Rational macaulay_resultant_robust(const RationalQuadric& q1, const RationalQuadric& q2,
                                   const RationalQuadric& q3);

/// Symbolic construction of the boundary polynomial in n11..n33: tangency
/// quadrics of three symbolic lines, their resultant, then each line
/// coordinate replaced by the matching entry of N. Content 1, grevlex-leading
/// coefficient positive. Expensive; prefer boundary_polynomial().
SparsePoly build_boundary_polynomial();

/// Cache location: $PSDRANK_CACHE_DIR/boundary_m32.poly, else ./.psdrank-cache/.
std::filesystem::path default_boundary_cache_path();

/// Loads the polynomial from the cache, building and caching it on a miss.
/// The result is memoised per process.
const SparsePoly& boundary_polynomial();
const SparsePoly& boundary_polynomial(const std::filesystem::path& cache_path);

std::uint64_t fnv1a64(const std::string& data);
std::string serialize_polynomial(const SparsePoly& p);
SparsePoly deserialize_polynomial(const std::string& text);
/// Atomic write (temporary file then rename).
void write_polynomial_cache(const SparsePoly& p, const std::filesystem::path& path);
std::optional<SparsePoly> read_polynomial_cache(const std::filesystem::path& path);

/// Exact evaluation of the boundary polynomial at a 3x3 matrix.
Rational eval_boundary(const SparsePoly& poly, const RationalMatrix& n);

struct BoundaryScanEntry {
  std::array<std::size_t, 3> rows;
  std::array<std::size_t, 3> cols;
  Rational value;
};

struct BoundaryScanReport {
  std::vector<BoundaryScanEntry> entries;
  std::vector<std::size_t> zero_submatrices;  // indices into entries
  std::vector<std::pair<std::size_t, std::size_t>> zero_entries;  // the M_ij = 0 components
  std::optional<Rational> min_abs_value;
  std::size_t rank = 0;
  bool rank_warning = false;  // rank > 3
};

BoundaryScanReport boundary_scan(const SparsePoly& poly, const RationalMatrix& m);

}  // namespace psdrank
