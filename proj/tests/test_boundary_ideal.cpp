#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "helpers.hpp"
#include "psdrank/boundary_ideal.hpp"
#include "psdrank/errors.hpp"

using namespace psdrank;
using testing::frac;

namespace {

// Coefficient order: x^2, y^2, z^2, xy, xz, yz.
RationalQuadric quadric(std::array<Rational, 6> c) {
  RationalQuadric q;
  q.coeffs = c;
  return q;
}

const SparsePoly& poly() { return boundary_polynomial(); }

// Slack-type matrix N = P L^T: rows of P are points, rows of L are lines.
RationalMatrix incidence(const std::vector<std::array<Rational, 3>>& points,
                         const std::vector<std::array<Rational, 3>>& lines) {
  RationalMatrix n(points.size(), lines.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < lines.size(); ++j)
      for (int k = 0; k < 3; ++k) n(i, j) += points[i][k] * lines[j][k];
  return n;
}

// Point of the circle x^2 + y^2 = z^2 with rational parameter t, and its tangent line.
std::array<Rational, 3> circle_point(const Rational& t) { return {1 - t * t, 2 * t, 1 + t * t}; }
std::array<Rational, 3> tangent_at(const Rational& t) { return {1 - t * t, 2 * t, -(1 + t * t)}; }

RationalMatrix random_integer_matrix(std::mt19937_64& rng, std::size_t p, std::size_t q) {
  std::uniform_int_distribution<int> e(1, 30);
  RationalMatrix m(p, q);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < q; ++j) m(i, j) = e(rng);
  return m;
}

}  // namespace

TEST_CASE("tangency quadrics of special lines") {
  const auto q100 = tangency_quadric<Rational>({1, 0, 0});
  CHECK(q100.coeffs == std::array<Rational, 6>{0, 0, -1, 0, 0, 0});
  const auto q001 = tangency_quadric<Rational>({0, 0, 1});
  CHECK(q001.coeffs == std::array<Rational, 6>{-1, 0, 0, 0, 0, 0});

  // Hand-expanded adjugate of [[0,u,v],[u,0,w],[v,w,0]]:
  // [[-w^2, vw, uw], [vw, -v^2, uv], [uw, uv, -u^2]]; l = (1,1,1) sums all entries.
  const auto q111 = tangency_quadric<Rational>({1, 1, 1});
  CHECK(q111.coeffs == std::array<Rational, 6>{-1, -1, -1, 2, 2, 2});
}

TEST_CASE("resultant examples") {
  // x^2 - yz, y^2 - xz, z^2 - xy share [1:1:1].
  const RationalQuadric q1 = quadric({1, 0, 0, 0, 0, -1}), q2 = quadric({0, 1, 0, 0, -1, 0}), q3 = quadric({0, 0, 1, -1, 0, 0});
  CHECK(resultant_ternary_quadrics(q1, q2, q3) == 0);
  CHECK(macaulay_resultant_robust(q1, q2, q3) == 0);
  // x^2, y^2, (x + y)^2 share [0:0:1].
  const RationalQuadric x2 = quadric({1, 0, 0, 0, 0, 0}), y2 = quadric({0, 1, 0, 0, 0, 0});
  const RationalQuadric xy2 = quadric({1, 1, 0, 2, 0, 0}), z2 = quadric({0, 0, 1, 0, 0, 0});
  CHECK(resultant_ternary_quadrics(x2, y2, xy2) == 0);
  // x^2, y^2, z^2 have no common zero; the Macaulay normalisation gives exactly 1.
  CHECK(resultant_ternary_quadrics(x2, y2, z2) != 0);
  CHECK(macaulay_resultant_robust(x2, y2, z2) == 1);
  CHECK(abs(resultant_ternary_quadrics(x2, y2, z2)) == 512);
}

TEST_CASE("macaulay route matches the 6x6 route up to -512") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> coef(-7, 7);
  for (int trial = 0; trial < 20; ++trial) {
    std::array<RationalQuadric, 3> q;
    for (auto& qi : q)
      for (auto& c : qi.coeffs) c = coef(rng);
    const Rational r6 = resultant_ternary_quadrics(q[0], q[1], q[2]);
    const Rational rm = macaulay_resultant_robust(q[0], q[1], q[2]);
    CHECK(r6 == -512 * rm);
  }
}

TEST_CASE("boundary polynomial shape") {
  const SparsePoly& p = poly();
  CHECK(p.term_count() == 1035);
  CHECK(p.total_degree() == 24);
  CHECK(p.is_homogeneous());
  CHECK(p.variables() == matrix_variable_names());
  for (std::size_t b = 0; b < 3; ++b) {
    const std::size_t row[3] = {3 * b, 3 * b + 1, 3 * b + 2};
    const std::size_t col[3] = {b, b + 3, b + 6};
    CHECK(p.homogeneous_degree_in(row) == 8);
    CHECK(p.homogeneous_degree_in(col) == 8);
  }
  CHECK(p.content() == 1);
  CHECK(p.sorted_terms().front().second > 0);
}

TEST_CASE("boundary polynomial vanishes on true configurations") {
  CHECK(eval_boundary(poly(), RationalMatrix::circulant3(4, 1, 1)) == 0);
  CHECK(eval_boundary(poly(), RationalMatrix::circulant3(4, 1, 1).scaled(Rational(1, 6))) == 0);

  const std::vector<std::array<Rational, 3>> points = {{1, 0, 1}, {0, 1, 1}, {-1, 0, 1}};
  const std::vector<std::array<Rational, 3>> lines = {tangent_at(2), tangent_at(frac(1, 3)), tangent_at(frac(-3, 2))};
  CHECK(eval_boundary(poly(), incidence(points, lines)) == 0);

  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> n(-9, 9), d(1, 7);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::array<Rational, 3>> pts, lns;
    for (int i = 0; i < 3; ++i) {
      pts.push_back(circle_point(frac(n(rng), d(rng))));
      lns.push_back(tangent_at(frac(n(rng), d(rng))));
    }
    CHECK(eval_boundary(poly(), incidence(pts, lns)) == 0);
  }
}

TEST_CASE("random matrices are off the hypersurface, with the expected scaling") {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> s(1, 5);
  for (int trial = 0; trial < 10; ++trial) {
    const RationalMatrix n = random_integer_matrix(rng, 3, 3);
    const Rational v = eval_boundary(poly(), n);
    CHECK(v != 0);
    RationalMatrix scaled = n;
    Rational factor = 1;
    for (std::size_t i = 0; i < 3; ++i) {
      const Rational di = frac(s(rng), s(rng));
      for (std::size_t j = 0; j < 3; ++j) scaled(i, j) *= di;
      for (int e = 0; e < 8; ++e) factor *= di;
    }
    for (std::size_t j = 0; j < 3; ++j) {
      const Rational dj = frac(s(rng), s(rng));
      for (std::size_t i = 0; i < 3; ++i) scaled(i, j) *= dj;
      for (int e = 0; e < 8; ++e) factor *= dj;
    }
    CHECK(eval_boundary(poly(), scaled) == factor * v);
  }
}

TEST_CASE("boundary_scan") {
  SUBCASE("single 3x3 circulant") {
    const BoundaryScanReport rep = boundary_scan(poly(), RationalMatrix::circulant3(4, 1, 1));
    REQUIRE(rep.entries.size() == 1);
    CHECK(rep.entries[0].value == 0);
    CHECK(rep.zero_submatrices == std::vector<std::size_t>{0});
    CHECK(rep.zero_entries.empty());
    CHECK_FALSE(rep.rank_warning);
  }
  SUBCASE("interior 4x4 configuration") {
    // Four points near the origin, four lines far away: every 3x3 subconfiguration is strictly nested.
    const std::vector<std::array<Rational, 3>> points = {{1, 0, 1}, {0, 1, 1}, {-1, frac(1, 3), 1}, {frac(1, 2), -1, 1}};
    const std::vector<std::array<Rational, 3>> lines = {{-1, 0, 5}, {0, -1, 5}, {1, 0, 6}, {1, 1, 7}};
    const RationalMatrix n = incidence(points, lines);
    const BoundaryScanReport rep = boundary_scan(poly(), n);
    CHECK(rep.rank == 3);
    CHECK(rep.entries.size() == 16);
    CHECK(rep.zero_submatrices.empty());
  }
  SUBCASE("zero entries are reported separately") {
    const BoundaryScanReport rep = boundary_scan(poly(), RationalMatrix{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
    CHECK(rep.zero_entries.size() == 3);
  }
  SUBCASE("rank above three is flagged") {
    std::mt19937_64 rng(44);
    CHECK(boundary_scan(poly(), random_integer_matrix(rng, 4, 4)).rank_warning);
  }
}

TEST_CASE("polynomial cache round trip and corruption") {
  const auto dir = std::filesystem::temp_directory_path() / "psdrank_cache_test";
  std::filesystem::remove_all(dir);
  const auto path = dir / "poly.txt";
  write_polynomial_cache(poly(), path);
  const auto back = read_polynomial_cache(path);
  REQUIRE(back);
  CHECK(*back == poly());
  CHECK_FALSE(read_polynomial_cache(dir / "missing.txt"));

  std::string text = serialize_polynomial(poly());
  CHECK(deserialize_polynomial(text) == poly());
  // Flip one coefficient digit in the body.
  const std::size_t body = text.find('\n') + 1;
  text[body] = text[body] == '1' ? '2' : '1';
  try {
    deserialize_polynomial(text);
    FAIL("expected CacheCorrupt");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CacheCorrupt);
  }
  {
    std::ofstream out(path, std::ios::trunc);
    out << text;
  }
  CHECK_THROWS_AS(read_polynomial_cache(path), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("serialized cache has one line per term") {
  const std::string text = serialize_polynomial(poly());
  std::size_t lines = 0;
  for (char ch : text) lines += ch == '\n' ? 1 : 0;
  CHECK(lines == 1 + 1035);
}

TEST_CASE("comment lines before the cache header are ignored") {
  const std::string text = "# psdrank 0.1.0 config 0123456789abcdef\n" + serialize_polynomial(poly());
  CHECK(deserialize_polynomial(text) == poly());
  CHECK_THROWS_AS(deserialize_polynomial("not a header\n" + serialize_polynomial(poly())), Error);
}
