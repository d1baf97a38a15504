#include <doctest.h>

#include <random>

#include "psdrank/errors.hpp"
#include "psdrank/spectrahedra.hpp"

using namespace psdrank;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Eigen::Matrix2d mat2(double a, double b, double c, double d) {
  Eigen::Matrix2d m;
  m << a, b, c, d;
  return m;
}

Pencil make_pencil(std::vector<Eigen::MatrixXd> mats) {
  Pencil p;
  p.k = static_cast<std::size_t>(mats.front().rows());
  p.dim = mats.size() - 1;
  p.mats = std::move(mats);
  p.validate();
  return p;
}

// {x : I + r (x1 diag(1,-1) + x2 [[0,1],[1,0]]) >= 0}, the disc of radius 1/r.
Pencil disc(double r) {
  const Eigen::MatrixXd id = Eigen::Matrix2d::Identity();
  return make_pencil({id + r * mat2(1, 0, 0, -1), id + r * mat2(0, 1, 1, 0), id});
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::ParseError;
}

Eigen::VectorXd vertex(std::size_t k, std::size_t i) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
  if (i < k) x[static_cast<Eigen::Index>(i)] = 1;
  return x;
}

}  // namespace

TEST_CASE("membership examples") {
  const Pencil p = make_pencil({mat2(1, 0, 0, 0), mat2(0, 0, 0, 1), Eigen::Matrix2d::Identity()});
  CHECK(membership(p, vec({1, 0})));
  CHECK_FALSE(membership(p, vec({2, 2})));
  CHECK(p.at(vec({2, 2})).isApprox(mat2(-1, 0, 0, -1)));

  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-1, 1), t(0, 1);
  const Pencil d = disc(1);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd a = vec({u(rng), u(rng)}), b = vec({u(rng), u(rng)});
    if (!membership(d, a) || !membership(d, b)) continue;
    const double s = t(rng);
    CHECK(membership(d, s * a + (1 - s) * b));
  }
}

TEST_CASE("rank_locus examples") {
  const Pencil p = make_pencil({mat2(1, 0, 0, 0), mat2(0, 0, 0, 1), Eigen::Matrix2d::Identity()});
  CHECK(rank_locus(p, vec({0, 0})) == 2);
  CHECK(rank_locus(disc(1), vec({0.6, 0.8})) == 1);
  CHECK(rank_locus(disc(1), vec({0.0, 0.0})) == 2);
  CHECK(code_of([&] { rank_locus(disc(1), vec({1, 1})); }) == ErrorCode::NotMember);

  const std::vector<Eigen::VectorXd> a = {vec({1, 0}), vec({0, 1})};
  const Pencil shrunk = shrink_at_rank_one(a, Eigen::Matrix2d::Identity());
  CHECK(rank_locus(shrunk, vec({1, 0})) == 1);
}

TEST_CASE("shrink_at_rank_one examples") {
  const std::vector<Eigen::VectorXd> a = {vec({1, 0}), vec({0, 1})};
  const Pencil c = rank_one_pencil(a, Eigen::Matrix2d::Identity());
  const Pencil s = shrink_at_rank_one(a, Eigen::Matrix2d::Identity());
  CHECK(s.last().isApprox(Eigen::Matrix2d::Ones()));
  for (std::size_t i = 0; i <= 2; ++i) {
    CHECK(membership(s, vertex(2, i)));
    CHECK(rank_locus(s, vertex(2, i)) == 1);
  }
  CHECK(containment_sample(s, c, SampleOptions{.samples = 2000}).violations == 0);

  const std::vector<Eigen::VectorXd> one = {vec({2})};
  const Eigen::MatrixXd b = Eigen::MatrixXd::Constant(1, 1, 3.0);
  const Pencil k1 = shrink_at_rank_one(one, b);
  const Pencil orig = rank_one_pencil(one, b);
  REQUIRE(k1.mats.size() == orig.mats.size());
  for (std::size_t i = 0; i < k1.mats.size(); ++i) CHECK(k1.mats[i].isApprox(orig.mats[i]));
}

TEST_CASE("shrink_at_rank_one preconditions") {
  const std::vector<Eigen::VectorXd> zero = {vec({0, 0}), vec({0, 1})};
  CHECK(code_of([&] { shrink_at_rank_one(zero, Eigen::Matrix2d::Identity()); }) == ErrorCode::PreconditionFailed);
  const std::vector<Eigen::VectorXd> a = {vec({1, 0}), vec({0, 1})};
  CHECK(code_of([&] { shrink_at_rank_one(a, mat2(1, 0, 0, -1)); }) == ErrorCode::PreconditionFailed);
  // span(a) is the first axis and B vanishes off it.
  const std::vector<Eigen::VectorXd> deficient = {vec({1, 0}), vec({2, 0})};
  CHECK(code_of([&] { shrink_at_rank_one(deficient, mat2(1, 0, 0, 0)); }) == ErrorCode::PreconditionFailed);
}

TEST_CASE("shrunk spectrahedra sit inside the original on random instances") {
  std::mt19937_64 rng(62);
  std::normal_distribution<double> g;
  for (int k = 2; k <= 4; ++k) {
    for (int inst = 0; inst < 5; ++inst) {
      const int span = inst == 4 ? k - 1 : k;
      // Nearly parallel a_i make d d^T huge, and the relative membership test then
      // accepts rounding-level negative eigenvalues; keep span(a_i) well conditioned.
      Eigen::MatrixXd basis(k, span), coef(span, k), gm(k, k), am;
      do {
        for (auto* m : {&basis, &coef, &gm})
          for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = g(rng);
        am = basis * coef;
      } while ([&] {
        const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(am).singularValues();
        return sv[0] / sv[span - 1] >= 100;
      }());
      std::vector<Eigen::VectorXd> a;
      for (int i = 0; i < k; ++i) a.push_back(am.col(i));
      const Eigen::MatrixXd b = gm * gm.transpose();
      const Pencil s = shrink_at_rank_one(a, b);
      for (std::size_t i = 0; i <= static_cast<std::size_t>(k); ++i) CHECK(rank_locus(s, vertex(k, i)) == 1);
      SampleOptions so;
      so.samples = 2000;
      so.seed = static_cast<std::uint64_t>(inst + 1);
      const ContainmentReport rep = containment_sample(s, rank_one_pencil(a, b), so);
      CHECK(rep.samples == 2000);
      CHECK(rep.violations == 0);
    }
  }
}

TEST_CASE("containment_sample") {
  SampleOptions so;
  so.samples = 3000;
  CHECK(containment_sample(disc(1), disc(1), so).violations == 0);
  // The half-radius disc is strictly smaller than the unit disc.
  const ContainmentReport rep = containment_sample(disc(1), disc(2), so);
  CHECK(rep.violations > 0);
  REQUIRE(rep.first_violation);
  CHECK_FALSE(membership(disc(2), *rep.first_violation));
  CHECK(code_of([&] { containment_sample(disc(1), make_pencil({Eigen::MatrixXd::Identity(1, 1), Eigen::MatrixXd::Identity(1, 1)}), so); }) ==
        ErrorCode::DimensionMismatch);
  const Pencil empty = make_pencil({-Eigen::MatrixXd::Identity(1, 1), -Eigen::MatrixXd::Identity(1, 1)});
  CHECK(code_of([&] { containment_sample(empty, empty, so); }) == ErrorCode::NoFeasibleStart);
}

TEST_CASE("shadow_to_spectrahedron") {
  // x1 E11 + x2 E22 + y H + (1 - x1 - x2 - y) I with H = [[2, 1/2], [1/2, 2]].
  const Pencil p = make_pencil({mat2(1, 0, 0, 0), mat2(0, 0, 0, 1), mat2(2, 0.5, 0.5, 2), Eigen::Matrix2d::Identity()});

  SUBCASE("projection onto all coordinates returns the pencil") {
    ShadowData sd{p, 3, {vec({}), vec({}), vec({}), vec({})}};
    const ShadowResult r = shadow_to_spectrahedron(sd);
    REQUIRE(r.pencil.mats.size() == p.mats.size());
    for (std::size_t i = 0; i < p.mats.size(); ++i) CHECK(r.pencil.mats[i].isApprox(p.mats[i]));
  }
  SUBCASE("hand-built witnesses, k = 2") {
    ShadowData sd{p, 2, {vec({0}), vec({0}), vec({0.5})}};
    const ShadowResult r = shadow_to_spectrahedron(sd);
    CHECK_FALSE(r.experimental);
    for (std::size_t i = 0; i <= 2; ++i) CHECK(membership(r.pencil, vertex(2, i)));
    // Every point of the new spectrahedron lifts linearly into the original.
    std::mt19937_64 rng(63);
    std::uniform_real_distribution<double> u(-3, 3);
    std::size_t checked = 0;
    for (int trial = 0; trial < 20000 && checked < 10000; ++trial) {
      const Eigen::VectorXd x = vec({u(rng), u(rng)});
      if (!membership(r.pencil, x)) continue;
      ++checked;
      const double y = x[0] * r.lifts[0][0] + x[1] * r.lifts[1][0] + (1 - x[0] - x[1]) * r.lifts[2][0];
      CHECK(membership(p, vec({x[0], x[1], y})));
    }
    CHECK(checked > 100);
  }
  SUBCASE("missing witnesses are searched for") {
    ShadowData sd{p, 2, {}};
    const ShadowResult r = shadow_to_spectrahedron(sd);
    for (std::size_t i = 0; i <= 2; ++i) CHECK(membership(r.pencil, vertex(2, i)));
  }
  SUBCASE("invalid witness") {
    ShadowData sd{p, 2, {vec({-0.2}), vec({0}), vec({0})}};
    CHECK(code_of([&] { shadow_to_spectrahedron(sd); }) == ErrorCode::WitnessInvalid);
  }
  SUBCASE("experimental flag when matrix size differs from k") {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
    Eigen::MatrixXd e1 = Eigen::MatrixXd::Zero(3, 3);
    e1(0, 0) = 1;
    Eigen::MatrixXd e2 = Eigen::MatrixXd::Zero(3, 3);
    e2(1, 1) = 1;
    const Pencil q = make_pencil({e1, e2, id});
    ShadowData sd{q, 2, {vec({}), vec({}), vec({})}};
    CHECK(shadow_to_spectrahedron(sd).experimental);
  }
}
