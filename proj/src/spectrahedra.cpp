#include "psdrank/spectrahedra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "psdrank/errors.hpp"
#include "psdrank/lmi_solver.hpp"

namespace psdrank {

void Pencil::validate() const {
  if (mats.size() != dim + 1) throw Error(ErrorCode::DimensionMismatch, "pencil needs dim + 1 matrices");
  for (const auto& m : mats) {
    if (static_cast<std::size_t>(m.rows()) != k || static_cast<std::size_t>(m.cols()) != k)
      throw Error(ErrorCode::DimensionMismatch, "pencil matrix of wrong size");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + m.cwiseAbs().maxCoeff()))
      throw Error(ErrorCode::DimensionMismatch, "pencil matrix is not symmetric");
  }
}

Eigen::MatrixXd Pencil::at(const Eigen::VectorXd& x) const {
  if (static_cast<std::size_t>(x.size()) != dim) throw Error(ErrorCode::DimensionMismatch, "point has wrong dimension");
  // Summed as written (not as last + sum x_i (D_i - last)) so simplex vertices evaluate exactly.
  Eigen::MatrixXd s = (1.0 - x.sum()) * last();
  for (std::size_t i = 0; i < dim; ++i) s += x[static_cast<Eigen::Index>(i)] * mats[i];
  return s;
}

namespace {

Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& s) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s, Eigen::EigenvaluesOnly).eigenvalues();
}

double scaled_min_eigenvalue(const Eigen::MatrixXd& s) {
  if (s.size() == 0) return 0.0;
  const Eigen::VectorXd lam = eigenvalues(s);
  const double norm = std::max(std::abs(lam[0]), std::abs(lam[lam.size() - 1]));
  return lam[0] / std::max(1.0, norm);
}

}  // namespace

bool membership(const Pencil& p, const Eigen::VectorXd& x, double tau) {
  return scaled_min_eigenvalue(p.at(x)) >= -tau;
}

std::size_t rank_locus(const Pencil& p, const Eigen::VectorXd& x, double tau) {
  const Eigen::MatrixXd s = p.at(x);
  if (scaled_min_eigenvalue(s) < -tau) throw Error(ErrorCode::NotMember, "point is outside the spectrahedron");
  const Eigen::VectorXd lam = eigenvalues(s);
  const double thresh = tau * std::max(1.0, lam.maxCoeff());
  return static_cast<std::size_t>((lam.array() > thresh).count());
}

std::optional<Eigen::VectorXd> find_lift(const Pencil& p, const Eigen::VectorXd& x_visible, double tau) {
  const std::size_t k = static_cast<std::size_t>(x_visible.size());
  if (k > p.dim) throw Error(ErrorCode::DimensionMismatch, "more visible coordinates than pencil coordinates");
  const std::size_t hidden = p.dim - k;
  Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.dim));
  full.head(static_cast<Eigen::Index>(k)) = x_visible;
  if (hidden == 0) {
    if (membership(p, full, tau)) return Eigen::VectorXd(0);
    return std::nullopt;
  }
  MarginProblem mp;
  mp.num_vars = hidden;
  mp.box = 1e4;
  mp.t_cap = 1.0 + p.at(full).cwiseAbs().sum();
  LmiBlock blk;
  blk.constant = p.at(full);
  for (std::size_t j = 0; j < hidden; ++j) blk.terms.push_back({j, p.mats[k + j] - p.last()});
  mp.blocks.push_back(std::move(blk));
  mp.weights.push_back(1.0);
  MarginOptions mo;
  mo.tau_feas = tau;
  mo.stop_on_verdict = false;
  mo.gap_tol = 1e-10;
  const MarginResult mr = maximize_margin(mp, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(hidden)), mo);
  if (mr.verdict != MarginVerdict::Feasible) return std::nullopt;
  return mr.y;
}

ShadowResult shadow_to_spectrahedron(const ShadowData& sd, double tau) {
  const Pencil& p = sd.pencil;
  p.validate();
  const std::size_t k = sd.k;
  if (k == 0 || k > p.dim) throw Error(ErrorCode::DimensionMismatch, "projection dimension out of range");
  const std::size_t hidden = p.dim - k;
  if (!sd.witnesses.empty() && sd.witnesses.size() != k + 1)
    throw Error(ErrorCode::DimensionMismatch, "need k + 1 witness slots");

  ShadowResult res;
  res.experimental = p.k != k;
  res.pencil.k = p.k;
  res.pencil.dim = k;
  for (std::size_t i = 0; i <= k; ++i) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
    if (i < k) x[static_cast<Eigen::Index>(i)] = 1.0;
    std::optional<Eigen::VectorXd> y;
    if (!sd.witnesses.empty() && sd.witnesses[i]) y = sd.witnesses[i];
    else y = find_lift(p, x, tau);
    if (!y) throw Error(ErrorCode::NotMember, "no lift found for simplex vertex " + std::to_string(i));
    if (static_cast<std::size_t>(y->size()) != hidden) throw Error(ErrorCode::DimensionMismatch, "witness has wrong size");
    Eigen::MatrixXd d = i < k ? p.mats[i] : p.last();
    for (std::size_t j = 0; j < hidden; ++j) d += (*y)[static_cast<Eigen::Index>(j)] * (p.mats[k + j] - p.last());
    if (scaled_min_eigenvalue(d) < -tau)
      throw Error(ErrorCode::WitnessInvalid, "lift of simplex vertex " + std::to_string(i) + " is not PSD");
    res.pencil.mats.push_back(d);
    res.lifts.push_back(*y);
  }
  return res;
}

Pencil rank_one_pencil(const std::vector<Eigen::VectorXd>& a_vecs, const Eigen::MatrixXd& b) {
  Pencil c;
  c.k = static_cast<std::size_t>(b.rows());
  c.dim = a_vecs.size();
  for (const auto& a : a_vecs) c.mats.push_back(a * a.transpose());
  c.mats.push_back(b);
  c.validate();
  return c;
}

Pencil shrink_at_rank_one(const std::vector<Eigen::VectorXd>& a_vecs, const Eigen::MatrixXd& b) {
  const std::size_t k = a_vecs.size();
  if (static_cast<std::size_t>(b.rows()) != k || static_cast<std::size_t>(b.cols()) != k)
    throw Error(ErrorCode::DimensionMismatch, "B must be k x k for k vectors");
  for (const auto& a : a_vecs) {
    if (static_cast<std::size_t>(a.size()) != k) throw Error(ErrorCode::DimensionMismatch, "vector of wrong length");
    if (a.norm() == 0) throw Error(ErrorCode::PreconditionFailed, "a zero vector puts a vertex at rank 0");
  }
  const double bscale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (eigenvalues(0.5 * (b + b.transpose()))[0] < -1e-12 * bscale)
    throw Error(ErrorCode::PreconditionFailed, "B is not positive semidefinite");
  if (b.cwiseAbs().maxCoeff() == 0) throw Error(ErrorCode::PreconditionFailed, "B is zero");
  if (k == 1) return rank_one_pencil(a_vecs, b);

  Eigen::MatrixXd amat(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < k; ++i) amat.col(static_cast<Eigen::Index>(i)) = a_vecs[i];

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(amat, Eigen::ComputeFullU);
  const Eigen::VectorXd sv = svd.singularValues();
  const auto span = static_cast<Eigen::Index>((sv.array() > 1e-10 * sv[0]).count());

  Eigen::VectorXd v;  // last matrix is v v^T
  if (span == static_cast<Eigen::Index>(k)) {
    // U = amat^{-1} sends a_i to e_i; d_i = sqrt(B'_ii); back in the original frame v = amat d.
    const Eigen::MatrixXd u = amat.inverse();
    const Eigen::MatrixXd bp = u * b * u.transpose();
    Eigen::VectorXd d(static_cast<Eigen::Index>(k));
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = std::sqrt(std::max(0.0, bp(i, i)));
    v = amat * d;
  } else {
    // Orthogonal U maps span(a_i) onto the first `span` coordinates.
    const Eigen::MatrixXd u = svd.matrixU().transpose();
    const Eigen::MatrixXd bp = u * b * u.transpose();
    Eigen::Index best = span;
    for (Eigen::Index j = span; j < bp.rows(); ++j)
      if (bp(j, j) > bp(best, best)) best = j;
    if (!(bp(best, best) > 1e-12 * bscale))
      throw Error(ErrorCode::PreconditionFailed, "B vanishes off span(a_i); reduce the dimension first");
    // d d^T = B' e e^T B' / B'_ee is dominated by B' (Schur complement).
    const Eigen::VectorXd d = bp.col(best) / std::sqrt(bp(best, best));
    v = u.transpose() * d;
  }
  Pencil out;
  out.k = k;
  out.dim = k;
  for (const auto& a : a_vecs) out.mats.push_back(a * a.transpose());
  out.mats.push_back(v * v.transpose());
  return out;
}

ContainmentReport containment_sample(const Pencil& inner, const Pencil& outer, const SampleOptions& opt) {
  inner.validate();
  outer.validate();
  if (inner.dim != outer.dim) throw Error(ErrorCode::DimensionMismatch, "pencils have different dimensions");
  const std::size_t n = inner.dim;

  // Restrict to the joint range of the inner matrices so that an interior point exists.
  const auto kk = static_cast<Eigen::Index>(inner.k);
  Eigen::MatrixXd stacked(kk, kk * static_cast<Eigen::Index>(inner.mats.size()));
  for (std::size_t i = 0; i < inner.mats.size(); ++i) stacked.middleCols(kk * static_cast<Eigen::Index>(i), kk) = inner.mats[i];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullU);
  const Eigen::VectorXd sv = svd.singularValues();
  const auto kept = static_cast<Eigen::Index>((sv.array() > 1e-11 * sv[0]).count());
  if (kept == 0 || !(sv[0] > 0)) throw Error(ErrorCode::NoFeasibleStart, "inner pencil is identically zero");
  const Eigen::MatrixXd basis = svd.matrixU().leftCols(kept);
  std::vector<Eigen::MatrixXd> red;
  for (const auto& m : inner.mats) red.push_back(basis.transpose() * m * basis);
  const Eigen::MatrixXd& f0 = red.back();
  std::vector<Eigen::MatrixXd> dirs;
  for (std::size_t i = 0; i < n; ++i) dirs.push_back(red[i] - f0);

  // Interior start: maximise the eigenvalue margin inside the sampling box.
  MarginProblem mp;
  mp.num_vars = n;
  mp.box = opt.box;
  mp.t_cap = 1.0 + f0.cwiseAbs().sum();
  LmiBlock blk;
  blk.constant = f0;
  for (std::size_t i = 0; i < n; ++i) blk.terms.push_back({i, dirs[i]});
  mp.blocks.push_back(std::move(blk));
  mp.weights.push_back(1.0);
  MarginOptions mo;
  mo.gap_tol = 1e-9;
  const MarginResult mr = maximize_margin(mp, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)), mo);
  if (!(mr.t > 1e-9)) throw Error(ErrorCode::NoFeasibleStart, "inner spectrahedron has empty interior in the box");

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd x = mr.y;
  auto step = [&]() {
    Eigen::VectorXd u(static_cast<Eigen::Index>(n));
    for (auto& c : u) c = gauss(rng);
    u.normalize();
    Eigen::MatrixXd f = f0;
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(f0.rows(), f0.cols());
    for (std::size_t i = 0; i < n; ++i) {
      f += x[static_cast<Eigen::Index>(i)] * dirs[i];
      g += u[static_cast<Eigen::Index>(i)] * dirs[i];
    }
    double lo = -std::numeric_limits<double>::infinity(), hi = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (u[i] > 0) {
        hi = std::min(hi, (opt.box - x[i]) / u[i]);
        lo = std::max(lo, (-opt.box - x[i]) / u[i]);
      } else if (u[i] < 0) {
        hi = std::min(hi, (-opt.box - x[i]) / u[i]);
        lo = std::max(lo, (opt.box - x[i]) / u[i]);
      }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(f);
    if (llt.info() != Eigen::Success) return;  // on the boundary: stay put
    const Eigen::MatrixXd linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(f.rows(), f.cols()));
    const Eigen::VectorXd lam = eigenvalues(linv * g * linv.transpose());
    // F + s G >= 0  <=>  1 + s lam_i >= 0 for all i.
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      if (lam[i] < 0) hi = std::min(hi, -1.0 / lam[i]);
      else if (lam[i] > 0) lo = std::max(lo, -1.0 / lam[i]);
    }
    if (!(hi > lo)) return;
    // The chord ends are only accurate to the conditioning of F; retreat
    // towards x until the new point factors as positive definite.
    double s = lo + (hi - lo) * unif(rng);
    for (int tries = 0; tries < 60; ++tries, s *= 0.5) {
      const Eigen::MatrixXd cand = f + s * g;
      Eigen::LLT<Eigen::MatrixXd> chk(cand);
      if (chk.info() == Eigen::Success && chk.matrixLLT().diagonal().minCoeff() > 0) {
        x += s * u;
        return;
      }
    }
  };

  ContainmentReport rep;
  rep.worst_scaled_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < opt.burn_in; ++b) step();
  for (std::size_t s = 0; s < opt.samples; ++s) {
    for (std::size_t t = 0; t < std::max<std::size_t>(opt.thinning, 1); ++t) step();
    const double e = scaled_min_eigenvalue(outer.at(x));
    rep.worst_scaled_eigenvalue = std::min(rep.worst_scaled_eigenvalue, e);
    ++rep.samples;
    if (e < -opt.tau) {
      ++rep.violations;
      if (!rep.first_violation) rep.first_violation = x;
    }
  }
  return rep;
}

}  // namespace psdrank
