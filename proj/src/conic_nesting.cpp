#include "psdrank/conic_nesting.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "psdrank/errors.hpp"
#include "psdrank/lmi_solver.hpp"

namespace psdrank {

Conic::Conic(const Eigen::Matrix3d& q) {
  const Eigen::Matrix3d sym = 0.5 * (q + q.transpose());
  const double tr = sym(0, 0) + sym(1, 1);
  if (!(tr > 0)) throw Error(ErrorCode::DegenerateSum, "conic leading block has nonpositive trace");
  q_ = sym * (2.0 / tr);
}

double Conic::evaluate(double x, double y) const {
  const Eigen::Vector3d v(x, y, 1.0);
  return v.dot(q_ * v);
}

bool Conic::is_ellipse() const {
  const double det2 = q_(0, 0) * q_(1, 1) - q_(0, 1) * q_(0, 1);
  return q_(0, 0) > 0 && det2 > 0 && q_.determinant() < 0;
}

std::string to_string(NestVerdict v) {
  switch (v) {
    case NestVerdict::Feasible: return "feasible";
    case NestVerdict::Infeasible: return "infeasible";
    case NestVerdict::Stalled: return "stalled";
  }
  return "?";
}

std::string to_string(M32Class c) {
  switch (c) {
    case M32Class::Interior: return "Interior";
    case M32Class::Boundary: return "Boundary";
    case M32Class::Outside: return "Outside";
  }
  return "?";
}

namespace {

// P and Q moved so that P's centroid is the origin and its farthest vertex
// has norm 1; halfspace normals have unit length.
struct Normalised {
  Eigen::Vector2d centre;
  double scale = 1;
  std::vector<Eigen::Vector2d> vertices;
  std::vector<Eigen::Vector2d> normals;
  std::vector<double> offsets;
};

Normalised normalise(const VPolytope& p, const HPolyhedron& q) {
  if (p.dim != 2 || q.dim != 2) throw Error(ErrorCode::DimensionMismatch, "ellipse nesting needs dimension 2");
  p.validate();
  q.validate();
  Normalised n;
  n.centre.setZero();
  for (const auto& v : p.vertices) n.centre += Eigen::Vector2d(v[0].get_d(), v[1].get_d());
  n.centre /= static_cast<double>(p.vertices.size());
  double radius = 0;
  for (const auto& v : p.vertices) radius = std::max(radius, (Eigen::Vector2d(v[0].get_d(), v[1].get_d()) - n.centre).norm());
  n.scale = radius > 0 ? radius : 1.0;
  for (const auto& v : p.vertices) n.vertices.push_back((Eigen::Vector2d(v[0].get_d(), v[1].get_d()) - n.centre) / n.scale);
  for (const auto& hs : q.halfspaces) {
    const Eigen::Vector2d h(hs.h[0].get_d(), hs.h[1].get_d());
    Eigen::Vector2d hn = n.scale * h;
    double z = hs.z.get_d() - h.dot(n.centre);
    const double len = hn.norm();
    if (len > 0) {
      hn /= len;
      z /= len;
    }
    n.normals.push_back(hn);
    n.offsets.push_back(z);
  }
  return n;
}

// Multiplier matrix with v^T L v = z - h^T x for v = (x, 1).
Eigen::Matrix3d halfspace_matrix(const Eigen::Vector2d& h, double z) {
  Eigen::Matrix3d l = Eigen::Matrix3d::Zero();
  l(0, 2) = l(2, 0) = -0.5 * h[0];
  l(1, 2) = l(2, 1) = -0.5 * h[1];
  l(2, 2) = z;
  return l;
}

// Conic parameters y = (u, a12, b1, b2, c): X = [[1+u, a12, b1], [a12, 1-u, b2], [b1, b2, c]].
constexpr std::size_t kConicVars = 5;

std::array<Eigen::Matrix3d, kConicVars + 1> conic_basis() {
  std::array<Eigen::Matrix3d, kConicVars + 1> e;
  for (auto& m : e) m.setZero();
  e[0](0, 0) = 1;
  e[0](1, 1) = 1;
  e[1](0, 0) = 1;
  e[1](1, 1) = -1;
  e[2](0, 1) = e[2](1, 0) = 1;
  e[3](0, 2) = e[3](2, 0) = 1;
  e[4](1, 2) = e[4](2, 1) = 1;
  e[5](2, 2) = 1;
  return e;
}

Eigen::Matrix3d conic_from(const Eigen::VectorXd& y) {
  const auto e = conic_basis();
  Eigen::Matrix3d x = e[0];
  for (std::size_t k = 0; k < kConicVars; ++k) x += y[static_cast<Eigen::Index>(k)] * e[k + 1];
  return x;
}

// Vertex blocks, S-procedure blocks and multiplier signs, with the weights used by the margin solver.
MarginProblem nesting_problem(const Normalised& n, double box) {
  const auto e = conic_basis();
  const std::size_t j_count = n.normals.size();
  MarginProblem mp;
  mp.num_vars = kConicVars + j_count;
  mp.box = box;
  mp.t_cap = 2.0;
  for (const auto& v : n.vertices) {
    const Eigen::Vector3d vh(v[0], v[1], 1.0);
    std::vector<std::pair<std::size_t, double>> terms;
    for (std::size_t k = 0; k < kConicVars; ++k) terms.emplace_back(k, -vh.dot(e[k + 1] * vh));
    mp.blocks.push_back(scalar_block(-vh.dot(e[0] * vh), terms));
    mp.weights.push_back(1.0);
  }
  for (std::size_t j = 0; j < j_count; ++j) {
    LmiBlock b;
    b.constant = e[0];
    for (std::size_t k = 0; k < kConicVars; ++k) b.terms.push_back({k, e[k + 1]});
    b.terms.push_back({kConicVars + j, halfspace_matrix(n.normals[j], n.offsets[j])});
    mp.blocks.push_back(std::move(b));
    mp.weights.push_back(1.0);
    mp.blocks.push_back(scalar_block(0.0, {{kConicVars + j, 1.0}}));
    mp.weights.push_back(0.0);
  }
  return mp;
}

Eigen::VectorXd nesting_start(const Normalised& n) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kConicVars + n.normals.size()));
  y[4] = -1.0;  // unit circle about the centroid
  for (std::size_t j = 0; j < n.normals.size(); ++j) y[static_cast<Eigen::Index>(kConicVars + j)] = 1.0;
  return y;
}

Eigen::Matrix3d to_original(const Normalised& n, const Eigen::Matrix3d& xn) {
  Eigen::Matrix3d t = Eigen::Matrix3d::Identity();
  t(0, 0) = t(1, 1) = 1.0 / n.scale;
  t(0, 2) = -n.centre[0] / n.scale;
  t(1, 2) = -n.centre[1] / n.scale;
  return t.transpose() * xn * t;
}

NestVerdict verdict_of(MarginVerdict v) {
  switch (v) {
    case MarginVerdict::Feasible: return NestVerdict::Feasible;
    case MarginVerdict::Infeasible: return NestVerdict::Infeasible;
    default: return NestVerdict::Stalled;
  }
}

MarginResult solve_margin(const Normalised& n, const NestOptions& opt, bool stop_on_verdict) {
  MarginOptions mo;
  mo.tau_feas = opt.tau_feas;
  mo.gap_tol = opt.gap_tol;
  mo.max_newton = opt.max_iter;
  mo.stop_on_verdict = stop_on_verdict;
  return maximize_margin(nesting_problem(n, opt.box), nesting_start(n), mo);
}

}  // namespace

double best_halfspace_certificate(const Eigen::Matrix3d& x, const Eigen::Vector2d& h, double z) {
  const Eigen::Matrix3d l = halfspace_matrix(h, z);
  auto f = [&](double mu) { return min_eigenvalue(x + mu * l); };
  // f is concave in mu; bracket its maximum on [0, hi] and refine by golden section.
  double hi = 1.0;
  for (int k = 0; k < 80 && f(hi) > f(0.5 * hi); ++k) hi *= 2.0;
  double lo = 0.0;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
  double f1 = f(m1), f2 = f(m2);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
    if (f1 < f2) {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + g * (hi - lo);
      f2 = f(m2);
    } else {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - g * (hi - lo);
      f1 = f(m1);
    }
  }
  return std::max({f(0.0), f1, f2});
}

NestReport solve_nesting(const VPolytope& inner, const HPolyhedron& outer, const NestOptions& opt) {
  const Normalised n = normalise(inner, outer);
  const MarginResult mr = solve_margin(n, opt, opt.stop_on_verdict);
  NestReport rep;
  rep.verdict = verdict_of(mr.verdict);
  rep.feasible = rep.verdict == NestVerdict::Feasible;
  rep.margin = mr.t;
  rep.gap = mr.gap;
  rep.iterations = mr.newton_steps;
  if (!rep.feasible) return rep;

  const Conic conic(to_original(n, conic_from(mr.y)));
  const Eigen::Matrix3d& x = conic.q_matrix();
  const double thresh = opt.touch_tol * x.norm();
  for (std::size_t i = 0; i < inner.vertices.size(); ++i) {
    if (std::abs(conic.evaluate(inner.vertices[i][0].get_d(), inner.vertices[i][1].get_d())) <= thresh)
      rep.touched_vertices.push_back(i);
  }
  for (std::size_t j = 0; j < outer.halfspaces.size(); ++j) {
    const auto& hs = outer.halfspaces[j];
    const Eigen::Vector2d h(hs.h[0].get_d(), hs.h[1].get_d());
    const double len = h.norm();
    const double cert = len > 0 ? best_halfspace_certificate(x, h / len, hs.z.get_d() / len)
                                : best_halfspace_certificate(x, h, hs.z.get_d());
    if (cert <= thresh) rep.tangent_edges.push_back(j);
  }
  rep.conic = conic;

  if (opt.compute_strict) {
    const Normalised ns = normalise(homothety(inner, Rational(1) + Rational(opt.delta_h)), outer);
    const MarginResult sr = solve_margin(ns, opt, true);
    rep.iterations += sr.newton_steps;
    if (sr.verdict == MarginVerdict::Stalled) {
      throw Error(ErrorCode::SolverStall, "strictness undecided: margin " + std::to_string(sr.t));
    }
    rep.strict = sr.verdict == MarginVerdict::Feasible;
  }
  return rep;
}

NestReport nest_ellipse(const NestedPair& pair, const NestOptions& opt) {
  NestReport rep = solve_nesting(pair.inner(), pair.outer(), opt);
  if (rep.verdict == NestVerdict::Stalled) {
    throw Error(ErrorCode::SolverStall, "nesting undecided: margin " + std::to_string(rep.margin) + ", gap " +
                                            std::to_string(rep.gap));
  }
  return rep;
}

bool strict_nest_ellipse(const NestedPair& pair, const NestOptions& opt) {
  NestOptions o = opt;
  o.compute_strict = false;
  o.stop_on_verdict = true;
  const NestReport rep = solve_nesting(homothety(pair.inner(), Rational(1) + Rational(opt.delta_h)), pair.outer(), o);
  if (rep.verdict == NestVerdict::Stalled) throw Error(ErrorCode::SolverStall, "strictness undecided");
  return rep.feasible;
}

M32Class classify_m32(const NonnegativeMatrix& m, const NestOptions& opt) {
  const std::size_t r = exact_rank(m.matrix());
  if (r > 3) throw Error(ErrorCode::RankMismatch, "rank " + std::to_string(r) + " exceeds 3");
  if (r < 3) return m.has_zero_entry() ? M32Class::Boundary : M32Class::Interior;
  const RowNormalization rn = row_normalize(m);
  const NestedPair pair = build_nested_pair(rn.normalized);
  NestOptions o = opt;
  o.compute_strict = false;
  const NestReport rep = nest_ellipse(pair, o);
  if (!rep.feasible) return M32Class::Outside;
  if (m.has_zero_entry()) return M32Class::Boundary;
  return strict_nest_ellipse(pair, opt) ? M32Class::Interior : M32Class::Boundary;
}

Rational circulant_criterion(const Rational& a, const Rational& b, const Rational& c) {
  return a * a + b * b + c * c - 2 * (a * b + a * c + b * c);
}

bool circulant_psd2(const Rational& a, const Rational& b, const Rational& c) {
  return circulant_criterion(a, b, c) <= 0;
}

Conic average_ellipses(const Conic& e0, const Conic& e1) {
  if (!e0.is_ellipse() || !e1.is_ellipse()) throw Error(ErrorCode::DegenerateSum, "inputs must be ellipses");
  const Eigen::Matrix3d sum = e0.q_matrix() + e1.q_matrix();
  const Conic out(sum);
  if (!out.is_ellipse() || std::abs(out.determinant()) < 1e-14) {
    throw Error(ErrorCode::DegenerateSum, "sum of the forms is not a nondegenerate ellipse");
  }
  return out;
}

bool unique_nesting_probe(const NestedPair& pair, std::size_t trials, std::uint64_t seed, const NestOptions& opt,
                          double tau_uni) {
  const Normalised n = normalise(pair.inner(), pair.outer());
  NestOptions o = opt;
  const MarginResult best = solve_margin(n, o, false);
  if (best.verdict == MarginVerdict::Stalled) throw Error(ErrorCode::SolverStall, "nesting undecided");
  if (best.verdict == MarginVerdict::Infeasible) return false;
  if (best.t > opt.tau_feas) return false;  // an open set of ellipses nests

  // Relax every weighted block by eps and push the conic in random directions.
  const double eps = std::max(100.0 * opt.gap_tol, 1e-3 * opt.tau_feas);
  if (best.t <= -0.5 * eps) return false;
  MarginProblem mp = nesting_problem(n, opt.box);
  BarrierProblem bp;
  bp.num_vars = mp.num_vars;
  for (std::size_t b = 0; b < mp.blocks.size(); ++b) {
    LmiBlock blk = mp.blocks[b];
    if (mp.weights[b] > 0) blk.constant += eps * Eigen::MatrixXd::Identity(blk.constant.rows(), blk.constant.cols());
    bp.blocks.push_back(std::move(blk));
  }
  for (std::size_t i = 0; i < mp.num_vars; ++i) {
    bp.blocks.push_back(scalar_block(mp.box, {{i, 1.0}}));
    bp.blocks.push_back(scalar_block(mp.box, {{i, -1.0}}));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  BarrierOptions bo;
  bo.gap_tol = 1e-3 * tau_uni * eps;
  bo.max_newton = opt.max_iter;
  std::vector<Eigen::Matrix3d> witnesses;
  for (std::size_t trial = 0; trial < std::max<std::size_t>(trials, 2); ++trial) {
    bp.objective = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mp.num_vars));
    Eigen::VectorXd dir(static_cast<Eigen::Index>(kConicVars));
    for (auto& d : dir) d = gauss(rng);
    bp.objective.head(static_cast<Eigen::Index>(kConicVars)) = dir.normalized();
    const BarrierResult br = barrier_minimize(bp, best.y, bo);
    witnesses.push_back(conic_from(br.z));
  }
  for (std::size_t a = 1; a < witnesses.size(); ++a) {
    if ((witnesses[a] - witnesses[0]).norm() > tau_uni * witnesses[0].norm()) return false;
  }
  return true;
}

WitnessCheck check_witness(const NestedPair& pair, const Conic& conic) {
  WitnessCheck wc{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (const auto& v : pair.inner().vertices)
    wc.min_vertex_slack = std::min(wc.min_vertex_slack, -conic.evaluate(v[0].get_d(), v[1].get_d()));
  for (const auto& hs : pair.outer().halfspaces) {
    const Eigen::Vector2d h(hs.h[0].get_d(), hs.h[1].get_d());
    const double len = h.norm() > 0 ? h.norm() : 1.0;
    wc.min_certificate = std::min(wc.min_certificate, best_halfspace_certificate(conic.q_matrix(), h / len, hs.z.get_d() / len));
  }
  return wc;
}

Circulant3Point nest_circulant3(const Rational& a, const Rational& b, const Rational& c, const NestOptions& opt) {
  Circulant3Point pt{a, b, c, circulant_criterion(a, b, c), NestVerdict::Stalled, false, 0};
  const NonnegativeMatrix m(RationalMatrix::circulant3(a, b, c));
  if (exact_rank(m.matrix()) < 3) {
    pt.rank_deficient = true;
    pt.verdict = NestVerdict::Feasible;
    return pt;
  }
  const NestedPair pair = build_nested_pair(row_normalize(m).normalized);
  NestOptions o = opt;
  o.compute_strict = false;
  o.stop_on_verdict = true;
  const NestReport rep = solve_nesting(pair.inner(), pair.outer(), o);
  pt.verdict = rep.verdict;
  pt.margin = rep.margin;
  return pt;
}

}  // namespace psdrank
