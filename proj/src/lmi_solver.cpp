#include "psdrank/lmi_solver.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "psdrank/errors.hpp"

namespace psdrank {

Eigen::MatrixXd LmiBlock::evaluate(const Eigen::VectorXd& z) const {
  Eigen::MatrixXd g = constant;
  for (const auto& t : terms) g += z[static_cast<Eigen::Index>(t.var)] * t.coeff;
  return g;
}

LmiBlock scalar_block(double constant, std::vector<std::pair<std::size_t, double>> terms) {
  LmiBlock b;
  b.constant = Eigen::MatrixXd::Constant(1, 1, constant);
  for (const auto& [var, c] : terms) b.terms.push_back({var, Eigen::MatrixXd::Constant(1, 1, c)});
  return b;
}

double min_eigenvalue(const Eigen::MatrixXd& s) {
  if (s.rows() == 1) return s(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

namespace {

// Barrier value, or +inf when some block is not positive definite.
double barrier_value(const BarrierProblem& prob, const Eigen::VectorXd& z, double weight) {
  double v = weight * prob.objective.dot(z);
  for (const auto& b : prob.blocks) {
    if (b.size() == 1) {
      double g = b.constant(0, 0);
      for (const auto& t : b.terms) g += z[static_cast<Eigen::Index>(t.var)] * t.coeff(0, 0);
      if (!(g > 0)) return std::numeric_limits<double>::infinity();
      v -= std::log(g);
      continue;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(b.evaluate(z));
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const auto& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
      if (!(l(i, i) > 0)) return std::numeric_limits<double>::infinity();
      v -= 2.0 * std::log(l(i, i));
    }
  }
  return v;
}

void barrier_derivatives(const BarrierProblem& prob, const Eigen::VectorXd& z, double weight,
                         Eigen::VectorXd& grad, Eigen::MatrixXd& hess) {
  grad = weight * prob.objective;
  hess.setZero(static_cast<Eigen::Index>(prob.num_vars), static_cast<Eigen::Index>(prob.num_vars));
  std::vector<Eigen::MatrixXd> sc;
  for (const auto& b : prob.blocks) {
    if (b.size() == 1) {
      double g = b.constant(0, 0);
      for (const auto& t : b.terms) g += z[static_cast<Eigen::Index>(t.var)] * t.coeff(0, 0);
      const double inv = 1.0 / g;
      for (const auto& ti : b.terms) {
        const auto vi = static_cast<Eigen::Index>(ti.var);
        grad[vi] -= ti.coeff(0, 0) * inv;
        for (const auto& tj : b.terms)
          hess(vi, static_cast<Eigen::Index>(tj.var)) += ti.coeff(0, 0) * tj.coeff(0, 0) * inv * inv;
      }
      continue;
    }
    const Eigen::MatrixXd sinv = b.evaluate(z).inverse();
    sc.resize(b.terms.size());
    for (std::size_t i = 0; i < b.terms.size(); ++i) {
      sc[i] = sinv * b.terms[i].coeff;
      grad[static_cast<Eigen::Index>(b.terms[i].var)] -= sc[i].trace();
    }
    for (std::size_t i = 0; i < b.terms.size(); ++i) {
      for (std::size_t j = i; j < b.terms.size(); ++j) {
        const double h = (sc[i].array() * sc[j].transpose().array()).sum();
        const auto vi = static_cast<Eigen::Index>(b.terms[i].var);
        const auto vj = static_cast<Eigen::Index>(b.terms[j].var);
        hess(vi, vj) += h;
        if (i != j) hess(vj, vi) += h;
      }
    }
  }
}

double barrier_parameter(const BarrierProblem& prob) {
  double m = 0;
  for (const auto& b : prob.blocks) m += static_cast<double>(b.size());
  return m;
}

BarrierResult run_barrier(const BarrierProblem& prob, Eigen::VectorXd z, const BarrierOptions& opt,
                          const BarrierStop& stop) {
  if (static_cast<std::size_t>(z.size()) != prob.num_vars ||
      static_cast<std::size_t>(prob.objective.size()) != prob.num_vars) {
    throw Error(ErrorCode::DimensionMismatch, "barrier problem size mismatch");
  }
  if (!strictly_feasible(prob, z)) throw Error(ErrorCode::NoFeasibleStart, "barrier start is not strictly feasible");

  const double m = barrier_parameter(prob);
  BarrierResult res;
  double weight = opt.initial_weight;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  while (true) {
    // Centring by damped Newton.
    for (int inner = 0; inner < 200 && res.newton_steps < opt.max_newton; ++inner) {
      barrier_derivatives(prob, z, weight, grad, hess);
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      Eigen::VectorXd step = ldlt.solve(-grad);
      if (!step.allFinite()) {
        Eigen::MatrixXd reg = hess;
        reg.diagonal().array() += 1e-12 * (1.0 + hess.diagonal().cwiseAbs().maxCoeff());
        step = reg.ldlt().solve(-grad);
      }
      ++res.newton_steps;
      const double decrement = -grad.dot(step);
      if (!(decrement > 1e-18)) break;
      const double f0 = barrier_value(prob, z, weight);
      double alpha = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        const Eigen::VectorXd cand = z + alpha * step;
        const double f1 = barrier_value(prob, cand, weight);
        if (std::isfinite(f1) && f1 <= f0 - 0.25 * alpha * decrement) {
          z = cand;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved || decrement < 1e-10) break;
    }
    res.gap = m / weight;
    res.z = z;
    res.value = prob.objective.dot(z);
    if (stop && stop(z, res.value, res.gap)) break;
    if (res.gap < opt.gap_tol) {
      res.converged = true;
      break;
    }
    if (res.newton_steps >= opt.max_newton) break;
    weight *= opt.growth;
  }
  return res;
}

}  // namespace

bool strictly_feasible(const BarrierProblem& prob, const Eigen::VectorXd& z) {
  return std::isfinite(barrier_value(prob, z, 0.0));
}

BarrierResult barrier_minimize(const BarrierProblem& prob, Eigen::VectorXd z0, const BarrierOptions& opt,
                               const BarrierStop& stop) {
  return run_barrier(prob, std::move(z0), opt, stop);
}

MarginResult maximize_margin(const MarginProblem& mp, const Eigen::VectorXd& y0, const MarginOptions& opt) {
  if (mp.weights.size() != mp.blocks.size()) throw Error(ErrorCode::DimensionMismatch, "one weight per block");
  if (static_cast<std::size_t>(y0.size()) != mp.num_vars) throw Error(ErrorCode::DimensionMismatch, "start size");
  const std::size_t n = mp.num_vars;
  const std::size_t tvar = n;

  BarrierProblem bp;
  bp.num_vars = n + 1;
  bp.objective = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n + 1));
  bp.objective[static_cast<Eigen::Index>(tvar)] = -1.0;

  double t0 = mp.t_cap - 1.0;
  for (std::size_t b = 0; b < mp.blocks.size(); ++b) {
    LmiBlock blk = mp.blocks[b];
    const double lam = min_eigenvalue(blk.evaluate(y0));
    if (mp.weights[b] > 0) {
      t0 = std::min(t0, lam / mp.weights[b] - 1.0);
      blk.terms.push_back({tvar, -mp.weights[b] * Eigen::MatrixXd::Identity(blk.constant.rows(), blk.constant.cols())});
    } else if (!(lam > 0)) {
      throw Error(ErrorCode::NoFeasibleStart, "start violates an unweighted block");
    }
    bp.blocks.push_back(std::move(blk));
  }
  bp.blocks.push_back(scalar_block(mp.t_cap, {{tvar, -1.0}}));
  for (std::size_t i = 0; i < n; ++i) {
    if (!(std::abs(y0[static_cast<Eigen::Index>(i)]) < mp.box)) throw Error(ErrorCode::NoFeasibleStart, "start outside box");
    bp.blocks.push_back(scalar_block(mp.box, {{i, 1.0}}));
    bp.blocks.push_back(scalar_block(mp.box, {{i, -1.0}}));
  }

  Eigen::VectorXd z(static_cast<Eigen::Index>(n + 1));
  z.head(static_cast<Eigen::Index>(n)) = y0;
  z[static_cast<Eigen::Index>(tvar)] = t0;

  const double tau = opt.tau_feas;
  auto settled = [&](double t, double gap) { return t >= -tau || t + gap < -tau; };
  BarrierOptions bo;
  bo.gap_tol = opt.gap_tol;
  bo.max_newton = opt.max_newton;
  const BarrierResult br = barrier_minimize(bp, z, bo, [&](const Eigen::VectorXd& zz, double, double gap) {
    return opt.stop_on_verdict && settled(zz[static_cast<Eigen::Index>(tvar)], gap);
  });

  MarginResult res;
  res.t = br.z[static_cast<Eigen::Index>(tvar)];
  res.gap = br.gap;
  res.y = br.z.head(static_cast<Eigen::Index>(n));
  res.newton_steps = br.newton_steps;
  if (res.t >= -tau) res.verdict = MarginVerdict::Feasible;
  else if (res.t + res.gap < -tau) res.verdict = MarginVerdict::Infeasible;
  else res.verdict = MarginVerdict::Stalled;
  return res;
}

}  // namespace psdrank
