#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "psdrank/conic_nesting.hpp"
#include "psdrank/errors.hpp"

using namespace psdrank;

namespace {

// Rational approximation of the point at angle theta on a circle of radius r.
RationalVector polar(double r, double theta) {
  const long scale = 1000000;
  return {testing::frac(std::lround(r * std::cos(theta) * scale), scale), testing::frac(std::lround(r * std::sin(theta) * scale), scale)};
}

constexpr double kPi = 3.14159265358979323846;

// Near-regular triangle of circumradius 1 inside a near-regular triangle of inradius 5.
NestedPair triangle_in_big_triangle() {
  VPolytope inner{2, {}};
  HPolyhedron outer{2, {}};
  for (int i = 0; i < 3; ++i) {
    inner.vertices.push_back(polar(1, kPi / 2 + 2 * kPi * i / 3));
    outer.halfspaces.push_back({polar(1, -kPi / 2 + 2 * kPi * i / 3), 5});
  }
  return NestedPair(inner, outer);
}

NestedPair circulant_pair(const Rational& a, const Rational& b, const Rational& c) {
  return build_nested_pair(row_normalize(NonnegativeMatrix(RationalMatrix::circulant3(a, b, c))).normalized);
}

Conic circle(double r) { return Conic(Eigen::Vector3d(1, 1, -r * r).asDiagonal()); }

}  // namespace

TEST_CASE("circulant criterion examples") {
  CHECK(circulant_criterion(4, 1, 1) == 0);
  CHECK(circulant_psd2(4, 1, 1));
  CHECK(circulant_criterion(1, 1, 1) == -3);
  CHECK(circulant_psd2(1, 1, 1));
  CHECK(circulant_criterion(5, 1, 1) == 5);
  CHECK_FALSE(circulant_psd2(5, 1, 1));
}

TEST_CASE("interior instance: triangle in a large triangle") {
  const NestedPair pair = triangle_in_big_triangle();
  const NestReport rep = nest_ellipse(pair);
  CHECK(rep.verdict == NestVerdict::Feasible);
  REQUIRE(rep.conic);
  CHECK(rep.conic->is_ellipse());
  CHECK(rep.strict);
  CHECK(strict_nest_ellipse(pair));
  // The circle of radius 2 about the origin is a valid witness.
  const WitnessCheck wc = check_witness(pair, circle(2));
  CHECK(wc.min_vertex_slack > 0);
  CHECK(wc.min_certificate > 0);
  CHECK_FALSE(unique_nesting_probe(pair, 8));
}

TEST_CASE("boundary circulant (4,1,1)/6") {
  const NestedPair pair = circulant_pair(4, 1, 1);
  const NestReport rep = nest_ellipse(pair);
  CHECK(rep.feasible);
  CHECK(rep.touched_vertices == std::vector<std::size_t>{0, 1, 2});
  CHECK(rep.tangent_edges == std::vector<std::size_t>{0, 1, 2});
  CHECK_FALSE(rep.strict);
  CHECK_FALSE(strict_nest_ellipse(pair));
  CHECK(unique_nesting_probe(pair, 8));
}

TEST_CASE("inner equal to outer is infeasible") {
  const VPolytope tri{2, {{0, 0}, {1, 0}, {0, 1}}};
  const HPolyhedron same{2, {{{-1, 0}, 0}, {{0, -1}, 0}, {{1, 1}, 1}}};
  const NestReport rep = nest_ellipse(NestedPair(tri, same));
  CHECK(rep.verdict == NestVerdict::Infeasible);
  CHECK_FALSE(rep.feasible);
}

TEST_CASE("outside circulant is not nested, strictly or otherwise") {
  const NestedPair pair = circulant_pair(5, 1, 1);
  CHECK(nest_ellipse(pair).verdict == NestVerdict::Infeasible);
  CHECK_FALSE(strict_nest_ellipse(pair));
}

TEST_CASE("classify_m32 examples") {
  CHECK(classify_m32(NonnegativeMatrix(RationalMatrix::circulant3(4, 1, 1).scaled(Rational(1, 6)))) == M32Class::Boundary);
  CHECK(classify_m32(NonnegativeMatrix(RationalMatrix::circulant3(1, 1, 1).scaled(Rational(1, 3)))) == M32Class::Interior);
  CHECK(classify_m32(NonnegativeMatrix(RationalMatrix::circulant3(5, 1, 1).scaled(Rational(1, 7)))) == M32Class::Outside);
  CHECK(classify_m32(NonnegativeMatrix(RationalMatrix::circulant3(2, 1, 1))) == M32Class::Interior);
  CHECK_THROWS_AS(classify_m32(NonnegativeMatrix(RationalMatrix{{1, 2, 3, 4}, {2, 1, 1, 1}, {1, 1, 2, 5}, {3, 1, 1, 1}})), Error);
}

TEST_CASE("average_ellipses") {
  const Conic unit = circle(1);
  CHECK(average_ellipses(unit, unit).q_matrix().isApprox(unit.q_matrix()));
  const Conic avg = average_ellipses(circle(1), circle(3));
  CHECK(avg.q_matrix().isApprox(circle(std::sqrt(5.0)).q_matrix()));

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (int trial = 0; trial < 10; ++trial) {
    auto through_1_0 = [&] {
      Eigen::Matrix3d q;
      const double a = 1 + u(rng), c = 1 + u(rng), b = 0.5 * u(rng), d = u(rng), e = u(rng);
      q << a, b, d, b, c, e, d, e, -a - 2 * d;
      return Conic(q);
    };
    const Conic e0 = through_1_0(), e1 = through_1_0();
    REQUIRE(e0.is_ellipse());
    REQUIRE(e1.is_ellipse());
    CHECK(std::abs(average_ellipses(e0, e1).evaluate(1, 0)) < 1e-12);
  }
}

TEST_CASE("concentric circles nest, so the probe reports non-unique") {
  VPolytope inner{2, {}};
  for (int i = 0; i < 3; ++i) inner.vertices.push_back(polar(1, 2 * kPi * i / 3));
  const HPolyhedron square{2, {{{1, 0}, 5}, {{-1, 0}, 5}, {{0, 1}, 5}, {{0, -1}, 5}}};
  CHECK_FALSE(unique_nesting_probe(NestedPair(inner, square), 8));
}

TEST_CASE("agreement with the criterion on random circulants") {
  std::mt19937_64 rng(32);
  std::uniform_int_distribution<int> n(1, 60);
  std::size_t stalled = 0, total = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Rational a = testing::frac(n(rng), 10), b = testing::frac(n(rng), 10), c = testing::frac(n(rng), 10);
    const Circulant3Point p = nest_circulant3(a, b, c);
    ++total;
    if (p.verdict == NestVerdict::Stalled) {
      ++stalled;
      CHECK(std::abs(p.criterion.get_d()) <= 1e-3 * Rational(a * a + b * b + c * c).get_d());
      continue;
    }
    CHECK((p.verdict == NestVerdict::Feasible) == circulant_psd2(a, b, c));
  }
  CHECK(stalled * 100 <= total);
}

TEST_CASE("returned witnesses satisfy the containment certificates") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const RationalMatrix m = testing::random_positive_rank(rng, 3 + trial % 3, 3 + trial % 4, 3);
    const NestedPair pair = build_nested_pair(row_normalize(NonnegativeMatrix(m)).normalized);
    const NestReport rep = nest_ellipse(pair);
    if (!rep.feasible) continue;
    REQUIRE(rep.conic);
    const WitnessCheck wc = check_witness(pair, *rep.conic);
    CHECK(wc.min_vertex_slack >= -1e-8);
    CHECK(wc.min_certificate >= -1e-8);
  }
}

TEST_CASE("enlarging the outer polygon keeps a feasible instance feasible") {
  for (const auto& abc : {std::array<int, 3>{2, 1, 1}, std::array<int, 3>{4, 1, 1}, std::array<int, 3>{3, 2, 1}}) {
    const NestedPair pair = circulant_pair(abc[0], abc[1], abc[2]);
    REQUIRE(nest_ellipse(pair).feasible);
    HPolyhedron bigger = pair.outer();
    for (auto& hs : bigger.halfspaces) hs.z += Rational(1, 10);
    CHECK(nest_ellipse(NestedPair(pair.inner(), bigger)).feasible);
  }
}

TEST_CASE("boundary points on the circulant curve touch three times") {
  std::mt19937_64 rng(34);
  std::uniform_int_distribution<int> n(1, 9);
  for (int trial = 0; trial < 8; ++trial) {
    const Rational s = testing::frac(n(rng), n(rng)), t = testing::frac(n(rng), n(rng));
    const Rational a = (s + t) * (s + t), b = s * s, c = t * t;
    REQUIRE(circulant_criterion(a, b, c) == 0);
    const NonnegativeMatrix m(RationalMatrix::circulant3(a, b, c));
    if (exact_rank(m.matrix()) < 3) continue;
    REQUIRE(classify_m32(m) == M32Class::Boundary);
    const NestReport rep = nest_ellipse(build_nested_pair(row_normalize(m).normalized));
    CHECK(rep.touched_vertices.size() >= 3);
    CHECK(rep.tangent_edges.size() >= 3);
  }
}
