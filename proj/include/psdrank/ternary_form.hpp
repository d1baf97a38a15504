#pragma once

#include <gmpxx.h>

#include <array>
#include <map>
#include <utility>

namespace psdrank {

using Monomial3 = std::array<int, 3>;

/// Homogeneous form in three variables (x, y, z) with coefficients in an
/// exact ring (mpq_class, mpz_class or SparsePoly).
template <typename Ring>
class TernaryForm {
 public:
  TernaryForm() = default;
  explicit TernaryForm(int degree) : degree_(degree) {}

  static TernaryForm linear(const Ring& cx, const Ring& cy, const Ring& cz) {
    TernaryForm f(1);
    f.add({1, 0, 0}, cx);
    f.add({0, 1, 0}, cy);
    f.add({0, 0, 1}, cz);
    return f;
  }

  int degree() const { return degree_; }
  const std::map<Monomial3, Ring>& coefficients() const { return coeffs_; }

  Ring coefficient(const Monomial3& m) const {
    auto it = coeffs_.find(m);
    return it == coeffs_.end() ? Ring{} : it->second;
  }

  void add(const Monomial3& m, const Ring& c) {
    auto [it, inserted] = coeffs_.try_emplace(m, c);
    if (!inserted) it->second += c;
  }

  TernaryForm& operator+=(const TernaryForm& o) {
    if (coeffs_.empty()) degree_ = o.degree_;
    for (const auto& [m, c] : o.coeffs_) add(m, c);
    return *this;
  }
  TernaryForm& operator-=(const TernaryForm& o) {
    if (coeffs_.empty()) degree_ = o.degree_;
    for (const auto& [m, c] : o.coeffs_) add(m, Ring{} - c);
    return *this;
  }
  friend TernaryForm operator+(TernaryForm a, const TernaryForm& b) { return a += b; }
  friend TernaryForm operator-(TernaryForm a, const TernaryForm& b) { return a -= b; }

  friend TernaryForm operator*(const TernaryForm& a, const TernaryForm& b) {
    TernaryForm r(a.degree_ + b.degree_);
    for (const auto& [ma, ca] : a.coeffs_) {
      for (const auto& [mb, cb] : b.coeffs_) {
        r.add({ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]}, Ring(ca * cb));
      }
    }
    return r;
  }

  friend TernaryForm operator*(const TernaryForm& a, const Ring& s) {
    TernaryForm r(a.degree_);
    for (const auto& [m, c] : a.coeffs_) r.add(m, Ring(c * s));
    return r;
  }

  TernaryForm derivative(int var) const {
    TernaryForm r(degree_ > 0 ? degree_ - 1 : 0);
    for (const auto& [m, c] : coeffs_) {
      if (m[var] == 0) continue;
      Monomial3 mm = m;
      mm[var] -= 1;
      r.add(mm, Ring(c * mpz_class(m[var])));
    }
    return r;
  }

 private:
  int degree_ = 0;
  std::map<Monomial3, Ring> coeffs_;
};

/// Slot order of a ternary quadric: x^2, y^2, z^2, xy, xz, yz.
inline constexpr std::array<Monomial3, 6> kQuadricMonomials = {
    Monomial3{2, 0, 0}, Monomial3{0, 2, 0}, Monomial3{0, 0, 2},
    Monomial3{1, 1, 0}, Monomial3{1, 0, 1}, Monomial3{0, 1, 1}};

/// Ternary quadric with exactly six coefficient slots in kQuadricMonomials order.
template <typename Ring>
struct TernaryQuadric {
  std::array<Ring, 6> coeffs{};

  TernaryForm<Ring> to_form() const {
    TernaryForm<Ring> f(2);
    for (std::size_t s = 0; s < 6; ++s) f.add(kQuadricMonomials[s], coeffs[s]);
    return f;
  }

  static TernaryQuadric from_form(const TernaryForm<Ring>& f) {
    TernaryQuadric q;
    for (std::size_t s = 0; s < 6; ++s) q.coeffs[s] = f.coefficient(kQuadricMonomials[s]);
    return q;
  }
};

}  // namespace psdrank
