#include "psdrank/boundary_ideal.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>

#include "psdrank/errors.hpp"

namespace psdrank {

std::vector<std::string> line_variable_names() {
  return {"d1", "d2", "d3", "e1", "e2", "e3", "f1", "f2", "f3"};
}

std::vector<std::string> matrix_variable_names() {
  return {"n11", "n12", "n13", "n21", "n22", "n23", "n31", "n32", "n33"};
}

namespace {

std::vector<Monomial3> quartic_monomials() {
  std::vector<Monomial3> out;
  for (int a = 4; a >= 0; --a)
    for (int b = 4 - a; b >= 0; --b) out.push_back({a, b, 4 - a - b});
  return out;
}

}  // namespace

std::optional<Rational> macaulay_resultant(const RationalQuadric& q1, const RationalQuadric& q2,
                                           const RationalQuadric& q3) {
  const auto monos = quartic_monomials();
  const std::array<const RationalQuadric*, 3> qs = {&q1, &q2, &q3};
  auto index_of = [&](const Monomial3& m) {
    for (std::size_t i = 0; i < monos.size(); ++i)
      if (monos[i] == m) return i;
    throw Error(ErrorCode::DimensionMismatch, "monomial outside degree 4");
  };

  // Row for monomial m: (m / x_i^2) * q_i with i the first variable of exponent >= 2.
  std::vector<std::vector<Rational>> mac(monos.size(), std::vector<Rational>(monos.size()));
  std::vector<std::size_t> extraneous;
  for (std::size_t r = 0; r < monos.size(); ++r) {
    const Monomial3& m = monos[r];
    int var = 0;
    while (m[var] < 2) ++var;
    int big = 0;
    for (int v = 0; v < 3; ++v) big += m[v] >= 2 ? 1 : 0;
    if (big >= 2) extraneous.push_back(r);
    Monomial3 shift = m;
    shift[var] -= 2;
    for (std::size_t s = 0; s < 6; ++s) {
      const Monomial3& qm = kQuadricMonomials[s];
      const Monomial3 target = {shift[0] + qm[0], shift[1] + qm[1], shift[2] + qm[2]};
      mac[r][index_of(target)] += qs[var]->coeffs[s];
    }
  }
  std::vector<std::vector<Rational>> ext(extraneous.size(), std::vector<Rational>(extraneous.size()));
  for (std::size_t i = 0; i < extraneous.size(); ++i)
    for (std::size_t j = 0; j < extraneous.size(); ++j) ext[i][j] = mac[extraneous[i]][extraneous[j]];
  const Rational denom = rational_determinant(ext);
  if (denom == 0) return std::nullopt;
  return rational_determinant(mac) / denom;
}

Rational macaulay_resultant_robust(const RationalQuadric& q1, const RationalQuadric& q2,
                                   const RationalQuadric& q3) {
  if (auto r = macaulay_resultant(q1, q2, q3)) return *r;
  using G = std::array<std::array<Rational, 3>, 3>;
  const std::array<G, 4> changes = {{
      {{{1, 1, 0}, {0, 1, 1}, {0, 0, 1}}},
      {{{1, 0, 0}, {1, 1, 0}, {1, 1, 1}}},
      {{{1, 2, 3}, {0, 1, 2}, {0, 0, 1}}},
      {{{2, 1, 1}, {1, 1, 0}, {3, 1, 2}}},  // det 1
  }};
  for (const auto& g : changes) {
    auto t = [&](const RationalQuadric& q) {
      return RationalQuadric::from_form(compose_linear(q.to_form(), g));
    };
    if (auto r = macaulay_resultant(t(q1), t(q2), t(q3))) return *r;
  }
  throw Error(ErrorCode::SolverStall, "Macaulay extraneous minor vanished under all coordinate changes");
}

SparsePoly build_boundary_polynomial() {
  const auto lv = line_variable_names();
  auto line = [&](std::size_t offset) {
    return std::array<SparsePoly, 3>{SparsePoly::variable(lv, offset),
                                     SparsePoly::variable(lv, offset + 1),
                                     SparsePoly::variable(lv, offset + 2)};
  };
  const auto [q1, q2, q3] = tangency_quadrics(line(0), line(3), line(6));
  const SparsePoly res = resultant_ternary_quadrics(q1, q2, q3);

  // With the points at the coordinate vertices, [a,b,c]^T [d,e,f] = [d,e,f]:
  // line coordinate d_i becomes n_i1, e_i becomes n_i2, f_i becomes n_i3.
  const auto nv = matrix_variable_names();
  std::vector<SparsePoly> images;
  for (std::size_t line_index = 0; line_index < 3; ++line_index)
    for (std::size_t coord = 0; coord < 3; ++coord)
      images.push_back(SparsePoly::variable(nv, coord * 3 + line_index));
  return res.substitute(images).normalized();
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string term_lines(const SparsePoly& p) {
  std::ostringstream os;
  for (const auto& [e, c] : p.sorted_terms()) {
    os << c.get_str();
    for (std::size_t i = 0; i < p.num_variables(); ++i) os << ' ' << int(e[i]);
    os << '\n';
  }
  return os.str();
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

}  // namespace

std::string serialize_polynomial(const SparsePoly& p) {
  const std::string body = term_lines(p);
  std::ostringstream os;
  os << "# psdrank-poly vars";
  for (const auto& v : p.variables()) os << ' ' << v;
  os << " ; terms " << p.term_count() << " ; fnv1a64 " << hex64(fnv1a64(body)) << '\n';
  os << body;
  return os.str();
}

SparsePoly deserialize_polynomial(const std::string& text) {
  // Comment lines may precede the header (artifact provenance); they are not hashed.
  std::istringstream in(text);
  std::string header;
  std::size_t header_end = 0;
  while (std::getline(in, header)) {
    header_end += header.size() + 1;
    if (header.rfind("# psdrank-poly vars", 0) == 0) break;
    if (header.rfind("#", 0) != 0) throw Error(ErrorCode::CacheCorrupt, "missing polynomial header");
  }
  if (header.rfind("# psdrank-poly vars", 0) != 0) throw Error(ErrorCode::CacheCorrupt, "missing polynomial header");
  std::istringstream hs(header.substr(std::string("# psdrank-poly vars").size()));
  std::vector<std::string> vars;
  std::string tok;
  std::size_t declared_terms = 0;
  std::string declared_hash;
  while (hs >> tok && tok != ";") vars.push_back(tok);
  if (!(hs >> tok) || tok != "terms" || !(hs >> declared_terms) || !(hs >> tok) || tok != ";" ||
      !(hs >> tok) || tok != "fnv1a64" || !(hs >> declared_hash)) {
    throw Error(ErrorCode::CacheCorrupt, "malformed polynomial header");
  }
  const std::string body = header_end <= text.size() ? text.substr(header_end) : std::string();
  if (hex64(fnv1a64(body)) != declared_hash) {
    throw Error(ErrorCode::CacheCorrupt, "content hash mismatch");
  }
  SparsePoly p(vars);
  std::istringstream bs(body);
  std::string line;
  while (std::getline(bs, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string coeff;
    ls >> coeff;
    SparsePoly::Exponents e{};
    for (std::size_t i = 0; i < vars.size(); ++i) {
      int x = -1;
      if (!(ls >> x) || x < 0 || x > 255) throw Error(ErrorCode::CacheCorrupt, "bad exponent");
      e[i] = static_cast<std::uint8_t>(x);
    }
    p.add_term(e, mpz_class(coeff, 10));
  }
  if (p.term_count() != declared_terms) throw Error(ErrorCode::CacheCorrupt, "term count mismatch");
  return p;
}

void write_polynomial_cache(const SparsePoly& p, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << serialize_polynomial(p);
    if (!out) throw Error(ErrorCode::CacheCorrupt, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::optional<SparsePoly> read_polynomial_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize_polynomial(ss.str());
}

std::filesystem::path default_boundary_cache_path() {
  if (const char* dir = std::getenv("PSDRANK_CACHE_DIR"); dir && *dir) {
    return std::filesystem::path(dir) / "boundary_m32.poly";
  }
  return std::filesystem::path(".psdrank-cache") / "boundary_m32.poly";
}

const SparsePoly& boundary_polynomial() { return boundary_polynomial(default_boundary_cache_path()); }

const SparsePoly& boundary_polynomial(const std::filesystem::path& cache_path) {
  static std::mutex mu;
  static std::optional<SparsePoly> memo;
  std::lock_guard<std::mutex> lock(mu);
  if (!memo) {
    std::optional<SparsePoly> cached;
    try {
      cached = read_polynomial_cache(cache_path);
    } catch (const Error&) {
      cached.reset();  // corrupt cache: rebuild below
    }
    if (cached) {
      memo = std::move(cached);
    } else {
      memo = build_boundary_polynomial();
      write_polynomial_cache(*memo, cache_path);
    }
  }
  return *memo;
}

Rational eval_boundary(const SparsePoly& poly, const RationalMatrix& n) {
  if (n.rows() != 3 || n.cols() != 3) throw Error(ErrorCode::DimensionMismatch, "need a 3x3 matrix");
  std::vector<Rational> point;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) point.push_back(n(i, j));
  return poly.evaluate(std::span<const Rational>(point));
}

BoundaryScanReport boundary_scan(const SparsePoly& poly, const RationalMatrix& m) {
  BoundaryScanReport rep;
  rep.rank = exact_rank(m);
  rep.rank_warning = rep.rank > 3;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) == 0) rep.zero_entries.emplace_back(i, j);

  auto triples = [](std::size_t n) {
    std::vector<std::array<std::size_t, 3>> out;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        for (std::size_t c = b + 1; c < n; ++c) out.push_back({a, b, c});
    return out;
  };
  for (const auto& rt : triples(m.rows())) {
    for (const auto& ct : triples(m.cols())) {
      const RationalMatrix sub = m.submatrix({rt[0], rt[1], rt[2]}, {ct[0], ct[1], ct[2]});
      BoundaryScanEntry entry{rt, ct, eval_boundary(poly, sub)};
      const Rational mag = abs(entry.value);
      if (entry.value == 0) rep.zero_submatrices.push_back(rep.entries.size());
      if (!rep.min_abs_value || mag < *rep.min_abs_value) rep.min_abs_value = mag;
      rep.entries.push_back(std::move(entry));
    }
  }
  return rep;
}

}  // namespace psdrank
