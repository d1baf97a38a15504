#include "psdrank/sparse_poly.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>

#include "psdrank/errors.hpp"

namespace psdrank {

namespace {

int degree_of(const SparsePoly::Exponents& e) {
  int d = 0;
  for (auto x : e) d += x;
  return d;
}

}  // namespace

std::size_t SparsePoly::ExponentHash::operator()(const Exponents& e) const noexcept {
  std::uint64_t lo = 0;
  std::uint32_t hi = 0;
  std::memcpy(&lo, e.data(), 8);
  std::memcpy(&hi, e.data() + 8, 4);
  std::uint64_t h = lo * 0x9E3779B97F4A7C15ULL;
  h ^= (h >> 29) + hi * 0xC2B2AE3D27D4EB4FULL;
  h ^= h >> 32;
  return static_cast<std::size_t>(h);
}

SparsePoly::SparsePoly(std::vector<std::string> variables) : vars_(std::move(variables)) {
  if (vars_.size() > kMaxVars) {
    throw Error(ErrorCode::DimensionMismatch, "too many polynomial variables");
  }
}

SparsePoly::SparsePoly(long constant) { add_term(Exponents{}, constant); }

SparsePoly SparsePoly::constant(std::vector<std::string> variables, const mpz_class& c) {
  SparsePoly p(std::move(variables));
  p.add_term(Exponents{}, c);
  return p;
}

SparsePoly SparsePoly::variable(std::vector<std::string> variables, std::size_t index) {
  SparsePoly p(std::move(variables));
  if (index >= p.vars_.size()) throw Error(ErrorCode::DimensionMismatch, "variable index");
  Exponents e{};
  e[index] = 1;
  p.add_term(e, 1);
  return p;
}

void SparsePoly::add_term(const Exponents& e, const mpz_class& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

mpz_class SparsePoly::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? mpz_class(0) : it->second;
}

void SparsePoly::adopt_variables(const SparsePoly& other) {
  if (vars_ == other.vars_) return;
  // A variable-free polynomial is a constant and fits any variable list.
  if (vars_.empty()) {
    vars_ = other.vars_;
    return;
  }
  if (other.vars_.empty()) return;
  throw Error(ErrorCode::DimensionMismatch, "polynomials over different variable lists");
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& other) {
  adopt_variables(other);
  for (const auto& [e, c] : other.terms_) add_term(e, c);
  return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& other) {
  adopt_variables(other);
  for (const auto& [e, c] : other.terms_) add_term(e, -c);
  return *this;
}

SparsePoly& SparsePoly::operator*=(const mpz_class& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

SparsePoly SparsePoly::operator-() const {
  SparsePoly r = *this;
  for (auto& [e, v] : r.terms_) v = -v;
  return r;
}

SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
  SparsePoly r;
  r.adopt_variables(a);
  r.adopt_variables(b);
  if (a.terms_.empty() || b.terms_.empty()) return r;
  r.terms_.reserve(std::min<std::size_t>(a.terms_.size() * b.terms_.size(), 1u << 20));
  const std::size_t n = r.vars_.size();
  mpz_class prod;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      SparsePoly::Exponents e{};
      for (std::size_t i = 0; i < n; ++i) {
        unsigned s = unsigned(ea[i]) + unsigned(eb[i]);
        if (s > 255) throw Error(ErrorCode::DimensionMismatch, "exponent overflow");
        e[i] = static_cast<std::uint8_t>(s);
      }
      auto [it, inserted] = r.terms_.try_emplace(e);
      mpz_addmul(it->second.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    }
  }
  std::erase_if(r.terms_, [](const auto& kv) { return kv.second == 0; });
  return r;
}

bool operator==(const SparsePoly& a, const SparsePoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  if (!a.terms_.empty() && a.vars_ != b.vars_ && !a.vars_.empty() && !b.vars_.empty()) return false;
  for (const auto& [e, c] : a.terms_) {
    auto it = b.terms_.find(e);
    if (it == b.terms_.end() || it->second != c) return false;
  }
  return true;
}

int SparsePoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, degree_of(e));
  return d;
}

bool SparsePoly::is_homogeneous() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int t = degree_of(e);
    if (d >= 0 && t != d) return false;
    d = t;
  }
  return true;
}

int SparsePoly::homogeneous_degree_in(std::span<const std::size_t> block) const {
  int d = -2;
  for (const auto& [e, c] : terms_) {
    int t = 0;
    for (auto i : block) t += e.at(i);
    if (d != -2 && t != d) return -1;
    d = t;
  }
  return d == -2 ? 0 : d;
}

SparsePoly SparsePoly::substitute(const std::vector<SparsePoly>& images) const {
  if (images.size() != vars_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "substitution needs one image per variable");
  }
  SparsePoly result;
  for (const auto& img : images) result.adopt_variables(img);
  // Power tables per variable, grown on demand.
  std::vector<std::vector<SparsePoly>> powers(vars_.size());
  auto power = [&](std::size_t v, int k) -> const SparsePoly& {
    auto& tbl = powers[v];
    if (tbl.empty()) tbl.push_back(SparsePoly::constant(result.vars_, 1));
    while (static_cast<int>(tbl.size()) <= k) tbl.push_back(tbl.back() * images[v]);
    return tbl[k];
  };
  for (const auto& [e, c] : terms_) {
    SparsePoly term = SparsePoly::constant(result.vars_, c);
    for (std::size_t v = 0; v < vars_.size(); ++v) {
      if (e[v] != 0) term = term * power(v, e[v]);
    }
    result += term;
  }
  return result;
}

SparsePoly SparsePoly::rename(std::vector<std::string> new_names) const {
  if (new_names.size() != vars_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "rename needs one name per variable");
  }
  SparsePoly r = *this;
  r.vars_ = std::move(new_names);
  return r;
}

namespace {

template <typename Scalar>
Scalar evaluate_impl(const SparsePoly& p, std::span<const Scalar> point) {
  const std::size_t n = p.num_variables();
  if (point.size() != n) throw Error(ErrorCode::DimensionMismatch, "evaluation point size");
  int maxdeg = 0;
  for (const auto& [e, c] : p.terms())
    for (std::size_t i = 0; i < n; ++i) maxdeg = std::max<int>(maxdeg, e[i]);
  std::vector<std::vector<Scalar>> pw(n);
  for (std::size_t i = 0; i < n; ++i) {
    pw[i].resize(maxdeg + 1);
    pw[i][0] = 1;
    for (int k = 1; k <= maxdeg; ++k) pw[i][k] = pw[i][k - 1] * point[i];
  }
  Scalar acc = 0;
  Scalar mono;
  for (const auto& [e, c] : p.terms()) {
    mono = c;
    for (std::size_t i = 0; i < n; ++i)
      if (e[i] != 0) mono *= pw[i][e[i]];
    acc += mono;
  }
  return acc;
}

}  // namespace

mpq_class SparsePoly::evaluate(std::span<const mpq_class> point) const {
  return evaluate_impl<mpq_class>(*this, point);
}

mpz_class SparsePoly::evaluate(std::span<const mpz_class> point) const {
  return evaluate_impl<mpz_class>(*this, point);
}

mpz_class SparsePoly::content() const {
  mpz_class g = 0;
  for (const auto& [e, c] : terms_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  return g;
}

SparsePoly SparsePoly::normalized() const {
  if (terms_.empty()) return *this;
  SparsePoly r = *this;
  mpz_class g = content();
  auto sorted = sorted_terms();
  if (sorted.front().second < 0) g = -g;
  for (auto& [e, c] : r.terms_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  return r;
}

bool SparsePoly::grevlex_greater(const Exponents& a, const Exponents& b, std::size_t n) {
  int da = degree_of(a), db = degree_of(b);
  if (da != db) return da > db;
  for (std::size_t i = n; i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

std::vector<SparsePoly::Term> SparsePoly::sorted_terms() const {
  std::vector<Term> out(terms_.begin(), terms_.end());
  const std::size_t n = vars_.size();
  std::sort(out.begin(), out.end(),
            [n](const Term& x, const Term& y) { return grevlex_greater(x.first, y.first, n); });
  return out;
}

std::string SparsePoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : sorted_terms()) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    mpz_class a = abs(c);
    bool unit = true;
    for (std::size_t i = 0; i < vars_.size(); ++i) unit = unit && e[i] == 0;
    bool wrote = false;
    if (a != 1 || unit) {
      os << a.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (e[i] == 0) continue;
      if (wrote) os << "*";
      os << vars_[i];
      if (e[i] > 1) os << "^" << int(e[i]);
      wrote = true;
    }
  }
  return os.str();
}

}  // namespace psdrank
