// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "psdrank/boundary_ideal.hpp"
#include "psdrank/conic_nesting.hpp"
#include "psdrank/dimension_probe.hpp"
#include "psdrank/nested_geometry.hpp"
#include "psdrank/psd_factorization.hpp"
#include "psdrank/spectrahedra.hpp"

using namespace psdrank;

namespace {

Rational frac(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Shape of the boundary polynomial.
Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const SparsePoly p = build_boundary_polynomial();
  const double secs = seconds_since(t0);
  bool blocks_ok = p.is_homogeneous();
  for (std::size_t b = 0; b < 3; ++b) {
    const std::size_t row[3] = {3 * b, 3 * b + 1, 3 * b + 2};
    const std::size_t col[3] = {b, b + 3, b + 6};
    blocks_ok = blocks_ok && p.homogeneous_degree_in(row) == 8 && p.homogeneous_degree_in(col) == 8;
  }
  std::ostringstream os;
  os << "terms " << p.term_count() << ", degree " << p.total_degree() << ", blocks "
     << (blocks_ok ? "8" : "mismatch") << ", " << secs << " s";
  return {p.term_count() == 1035 && p.total_degree() == 24 && blocks_ok && secs <= 600, os.str()};
}

// 2. Vanishing on the circulant boundary curve.
Outcome criterion2() {
  const SparsePoly& p = boundary_polynomial();
  const bool at_411 = eval_boundary(p, RationalMatrix::circulant3(4, 1, 1)) == 0;
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> num(1, 40), den(1, 12);
  std::size_t zeros = 0;
  const std::size_t n = 50;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational s = frac(num(rng), den(rng)), t = frac(num(rng), den(rng));
    // a = (s + t)^2, b = s^2, c = t^2 puts (a, b, c) on the curve; permute to vary which entry is largest.
    Rational v[3] = {(s + t) * (s + t), s * s, t * t};
    std::rotate(v, v + (i % 3), v + 3);
    if (circulant_criterion(v[0], v[1], v[2]) != 0) continue;
    if (eval_boundary(p, RationalMatrix::circulant3(v[0], v[1], v[2])) == 0) ++zeros;
  }
  std::ostringstream os;
  os << "(4,1,1) " << (at_411 ? "zero" : "nonzero") << ", curve points zero " << zeros << "/" << n;
  return {at_411 && zeros == n, os.str()};
}

RationalQuadric random_quadric(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-20, 20);
  RationalQuadric q;
  for (auto& c : q.coeffs) c = coef(rng);
  return q;
}

Rational eval_quadric(const RationalQuadric& q, const std::array<Rational, 3>& x) {
  Rational acc = 0;
  for (std::size_t s = 0; s < 6; ++s) {
    Rational term = q.coeffs[s];
    for (int v = 0; v < 3; ++v)
      for (int e = 0; e < kQuadricMonomials[s][v]; ++e) term *= x[v];
    acc += term;
  }
  return acc;
}

// 3. Resultant vanishes exactly on common zeros; two routes agree up to one constant.
Outcome criterion3() {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pt(-9, 9);
  std::size_t zero_ok = 0, generic_ok = 0;
  bool ratio_set = false, ratio_ok = true;
  Rational ratio;
  for (int i = 0; i < 100; ++i) {
    std::array<Rational, 3> x;
    do {
      for (auto& c : x) c = frac(pt(rng), 1 + (pt(rng) + 9) % 5);
    } while (x[0] == 0);
    std::array<RationalQuadric, 3> q;
    for (auto& qi : q) {
      qi = random_quadric(rng);
      // Adjust the x^2 coefficient so that qi(x) = 0.
      qi.coeffs[0] -= eval_quadric(qi, x) / (x[0] * x[0]);
    }
    const Rational r6 = resultant_ternary_quadrics(q[0], q[1], q[2]);
    const Rational rm = macaulay_resultant_robust(q[0], q[1], q[2]);
    if (r6 == 0 && rm == 0) ++zero_ok;
  }
  for (int i = 0; i < 100; ++i) {
    const RationalQuadric q1 = random_quadric(rng), q2 = random_quadric(rng), q3 = random_quadric(rng);
    const Rational r6 = resultant_ternary_quadrics(q1, q2, q3);
    const Rational rm = macaulay_resultant_robust(q1, q2, q3);
    if (r6 != 0 && rm != 0) {
      ++generic_ok;
      const Rational c = r6 / rm;
      if (!ratio_set) {
        ratio = c;
        ratio_set = true;
      } else if (c != ratio) {
        ratio_ok = false;
      }
    }
  }
  std::ostringstream os;
  os << "common-zero vanish " << zero_ok << "/100, generic nonzero " << generic_ok << "/100, route ratio "
     << (ratio_ok && ratio_set ? ratio.get_str() : "inconsistent");
  return {zero_ok == 100 && generic_ok == 100 && ratio_ok && ratio_set, os.str()};
}

// 4. Ellipse nesting against the closed-form criterion on a 100 x 100 grid.
Outcome criterion4() {
  std::size_t agree = 0, disagree = 0, stalled = 0, stalled_outside_band = 0;
  for (int i = 1; i <= 100; ++i) {
    for (int j = 1; j <= 100; ++j) {
      const Rational a = frac(i, 20), b = frac(j, 20), c = 1;
      const Circulant3Point p = nest_circulant3(a, b, c);
      if (p.verdict == NestVerdict::Stalled) {
        ++stalled;
        const double band = 1e-3 * Rational(a * a + b * b + 1).get_d();
        if (std::abs(p.criterion.get_d()) > band) ++stalled_outside_band;
        continue;
      }
      const bool feasible = p.verdict == NestVerdict::Feasible;
      (feasible == (p.criterion <= 0) ? agree : disagree) += 1;
    }
  }
  std::ostringstream os;
  os << "agree " << agree << ", disagree " << disagree << ", stalled " << stalled << " (outside band "
     << stalled_outside_band << ")";
  return {disagree == 0 && stalled <= 100 && stalled_outside_band == 0, os.str()};
}

// 5. Table 1 and the two k = 4 probes.
Outcome criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t listed = 0, exact = 0;
  for (const RankAssignment& a : table1_assignments()) {
    ++listed;
    const ProbeResult r = jacobian_rank(a, 1);
    if (r.jacobian_rank == a.p * a.q - 1 && r.modular_agree) ++exact;
  }
  const ProbeResult r2 = jacobian_rank(k4_assignment(2), 1);
  const ProbeResult r3 = jacobian_rank(k4_assignment(3), 1);
  const double secs = seconds_since(t0);
  std::ostringstream os;
  os << "listed at pq-1 " << exact << "/" << listed << ", k=4 ranks " << r2.jacobian_rank << " and "
     << r3.jacobian_rank << ", " << secs << " s";
  return {listed > 0 && exact == listed && r2.jacobian_rank == 94 && r3.jacobian_rank == 99 && secs <= 300, os.str()};
}

// 6. Square case p = q = r = k + 1, k <= 9.
Outcome criterion6() {
  const auto rows = square_case_sweep(9, 1);
  std::size_t stable = 0;
  std::ostringstream ranks;
  for (const auto& r : rows) {
    if (r.seed_stable && r.result.modular_agree) ++stable;
    ranks << (ranks.tellp() > 0 ? "," : "") << r.result.jacobian_rank;
  }
  std::ostringstream os;
  const bool covered = rows.size() == 9 && rows.front().k == 1 && rows.back().k == 9;
  os << "k=" << rows.front().k << ".." << rows.back().k << " ranks " << ranks.str() << ", seed-stable " << stable
     << "/" << rows.size();
  return {covered && stable == rows.size(), os.str()};
}

// Random a_1..a_k whose span has condition number below 100, and a random PSD B.
void random_shrink_instance(std::mt19937_64& rng, int k, int span, std::vector<Eigen::VectorXd>& a, Eigen::MatrixXd& b) {
  std::normal_distribution<double> g;
  auto gauss = [&](int r, int c) { return Eigen::MatrixXd(Eigen::MatrixXd::NullaryExpr(r, c, [&] { return g(rng); })); };
  Eigen::MatrixXd am;
  for (;;) {
    am = gauss(k, span) * gauss(span, k);
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(am).singularValues();
    if (sv[0] / sv[span - 1] < 100) break;
  }
  a.clear();
  for (int i = 0; i < k; ++i) a.push_back(am.col(i));
  const Eigen::MatrixXd gm = gauss(k, k);
  b = gm * gm.transpose();
}

// 7. The shrunk spectrahedron stays inside the original, with rank-one vertices.
Outcome criterion7() {
  std::mt19937_64 rng(7);
  std::size_t instances = 0, violations = 0, bad_vertices = 0;
  for (int k = 2; k <= 4; ++k) {
    for (int inst = 0; inst < 100; ++inst) {
      std::vector<Eigen::VectorXd> a;
      Eigen::MatrixXd b;
      random_shrink_instance(rng, k, inst % 4 == 3 ? k - 1 : k, a, b);
      const Pencil outer = rank_one_pencil(a, b);
      const Pencil inner = shrink_at_rank_one(a, b);
      SampleOptions so;
      so.samples = 10000;
      so.tau = 1e-8;
      so.seed = static_cast<std::uint64_t>(1000 * k + inst);
      violations += containment_sample(inner, outer, so).violations;
      for (int i = 0; i <= k; ++i) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(k);
        if (i < k) x[i] = 1;
        if (rank_locus(inner, x, 1e-8) != 1) ++bad_vertices;
      }
      ++instances;
    }
  }
  std::ostringstream os;
  os << instances << " instances, violations " << violations << ", vertices off rank one " << bad_vertices;
  return {instances == 300 && violations == 0 && bad_vertices == 0, os.str()};
}

// 8. Exact slack round trip and the three classification examples.
Outcome criterion8() {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> entry(0, 9), size(3, 7);
  std::size_t round_trips = 0, built = 0;
  while (built < 200) {
    const std::size_t p = static_cast<std::size_t>(size(rng)), q = static_cast<std::size_t>(size(rng));
    RationalMatrix f(p, 3), g(3, q);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < 3; ++j) f(i, j) = entry(rng);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < q; ++j) g(i, j) = entry(rng);
    const RationalMatrix m = f * g;
    if (exact_rank(m) != 3 || drop_zero_rows(m).rows() != p) continue;
    const NonnegativeMatrix normalized = row_normalize(NonnegativeMatrix(m)).normalized;
    ++built;
    if (slack_matrix(build_nested_pair(normalized)) == normalized.matrix()) ++round_trips;
  }
  const M32Class boundary = classify_m32(NonnegativeMatrix(RationalMatrix::circulant3(4, 1, 1).scaled(Rational(1, 6))));
  const M32Class interior = classify_m32(NonnegativeMatrix(RationalMatrix::circulant3(1, 1, 1).scaled(Rational(1, 3))));
  const M32Class outside = classify_m32(NonnegativeMatrix(RationalMatrix::circulant3(5, 1, 1).scaled(Rational(1, 7))));
  std::ostringstream os;
  os << "round trips " << round_trips << "/" << built << ", classes " << to_string(boundary) << "/"
     << to_string(interior) << "/" << to_string(outside);
  return {round_trips == 200 && boundary == M32Class::Boundary && interior == M32Class::Interior &&
              outside == M32Class::Outside,
          os.str()};
}

// Independent oracle: minimum rank over all 2^(pq) sign choices of entrywise square roots.
std::size_t brute_force_sqrt_rank(const RationalMatrix& sqrt_abs) {
  const std::size_t p = sqrt_abs.rows(), q = sqrt_abs.cols();
  std::size_t best = std::min(p, q);
  for (std::uint32_t mask = 0; mask < (1u << (p * q)); ++mask) {
    RationalMatrix s = sqrt_abs;
    for (std::size_t t = 0; t < p * q; ++t)
      if (mask & (1u << t)) s(t / q, t % q) = -s(t / q, t % q);
    best = std::min(best, exact_rank(s));
  }
  return best;
}

// True when w = D1 * target * D2 for diagonal sign matrices D1, D2.
bool sign_equivalent(const RationalMatrix& w, const RationalMatrix& target) {
  if (w.rows() != target.rows() || w.cols() != target.cols()) return false;
  std::vector<int> d1(w.rows(), 0), d2(w.cols(), 0);
  d1[0] = 1;
  for (std::size_t j = 0; j < w.cols(); ++j) {
    if (target(0, j) == 0) return false;
    d2[j] = (w(0, j) == target(0, j)) ? 1 : (w(0, j) == -target(0, j)) ? -1 : 0;
    if (d2[j] == 0) return false;
  }
  for (std::size_t i = 1; i < w.rows(); ++i) {
    d1[i] = (w(i, 0) == target(i, 0) * d2[0]) ? 1 : -1;
    for (std::size_t j = 0; j < w.cols(); ++j)
      if (w(i, j) != target(i, j) * d1[i] * d2[j]) return false;
  }
  return true;
}

// 9. Square-root rank of 6 x (boundary circulant).
Outcome criterion9() {
  const RationalMatrix m = RationalMatrix::circulant3(4, 1, 1);
  const SqrtRankResult r = sqrt_rank(m);
  const RationalMatrix target{{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}};
  const std::size_t oracle = brute_force_sqrt_rank(RationalMatrix{{2, 1, 1}, {1, 2, 1}, {1, 1, 2}});
  const bool witness_ok = r.exact_witness && sign_equivalent(*r.exact_witness, target);
  std::ostringstream os;
  os << "rank " << r.rank << " (enumeration oracle " << oracle << "), witness "
     << (witness_ok ? "3I-J up to row/column signs" : "unexpected");
  return {r.rank == 2 && oracle == 2 && r.exact && witness_ok, os.str()};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                          criterion6, criterion7, criterion8, criterion9};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %zu: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
