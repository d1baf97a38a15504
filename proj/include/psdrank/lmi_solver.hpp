#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <vector>

namespace psdrank {

/// One affine matrix inequality G(z) = constant + sum_k z[var_k] coeff_k >= 0.
struct LmiBlock {
  struct Term {
    std::size_t var;
    Eigen::MatrixXd coeff;
  };
  Eigen::MatrixXd constant;
  std::vector<Term> terms;

  std::size_t size() const { return static_cast<std::size_t>(constant.rows()); }
  Eigen::MatrixXd evaluate(const Eigen::VectorXd& z) const;
};

/// Scalar block c0 + sum coeff * z[var] >= 0.
LmiBlock scalar_block(double constant, std::vector<std::pair<std::size_t, double>> terms);

struct BarrierProblem {
  std::size_t num_vars = 0;
  std::vector<LmiBlock> blocks;
  Eigen::VectorXd objective;  // minimised
};

struct BarrierOptions {
  double gap_tol = 1e-11;
  double growth = 8.0;
  std::size_t max_newton = 100000;
  double initial_weight = 1.0;
};

struct BarrierResult {
  Eigen::VectorXd z;
  double value = 0;
  double gap = 0;  // objective suboptimality bound at the last centre
  std::size_t newton_steps = 0;
  bool converged = false;
};

/// Log-det barrier path following. `z0` must be strictly feasible. `stop` is
/// consulted after every centring step with (z, value, gap).
using BarrierStop = std::function<bool(const Eigen::VectorXd& z, double value, double gap)>;
BarrierResult barrier_minimize(const BarrierProblem& prob, Eigen::VectorXd z0, const BarrierOptions& opt,
                               const BarrierStop& stop = {});

/// True when every block is positive definite at z.
bool strictly_feasible(const BarrierProblem& prob, const Eigen::VectorXd& z);

enum class MarginVerdict { Feasible, Infeasible, Stalled };

/// Blocks F_b(y) with weights w_b >= 0: maximise t subject to
/// F_b(y) - w_b t I >= 0, t <= t_cap and |y_i| <= box.
struct MarginProblem {
  std::size_t num_vars = 0;
  std::vector<LmiBlock> blocks;
  std::vector<double> weights;
  double box = 1e4;
  double t_cap = 1.0;
};

struct MarginOptions {
  double tau_feas = 1e-8;
  double gap_tol = 1e-11;
  std::size_t max_newton = 100000;
  /// Return as soon as the verdict is settled instead of refining to gap_tol.
  bool stop_on_verdict = false;
};

struct MarginResult {
  MarginVerdict verdict = MarginVerdict::Stalled;
  double t = 0;
  double gap = 0;
  Eigen::VectorXd y;
  std::size_t newton_steps = 0;
};

/// `y0` must satisfy every weight-0 block strictly and lie inside the box.
MarginResult maximize_margin(const MarginProblem& prob, const Eigen::VectorXd& y0, const MarginOptions& opt);

double min_eigenvalue(const Eigen::MatrixXd& s);

}  // namespace psdrank
