#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "psdrank/rational_matrix.hpp"

namespace psdrank {

struct PsdFactorization {
  std::size_t k = 0;
  std::vector<Eigen::MatrixXd> a_factors;
  std::vector<Eigen::MatrixXd> b_factors;
  double residual = 0;  // max_ij |M_ij - <A_i, B_j>|

  /// Recomputes `residual` against m.
  void update_residual(const Eigen::MatrixXd& m);
  Eigen::MatrixXd product() const;
};

struct FactorizeOptions {
  std::size_t k = 2;
  std::size_t seeds = 20;
  std::size_t iters = 5000;
  std::uint64_t seed = 1;
  std::size_t inner_steps = 5;    // projected gradient steps per half-sweep
  double stop_residual = 1e-10;   // early exit for a seed
  double tau_fact = 1e-6;         // residual declaring psd rank <= k numerically
};

struct FactorizeResult {
  PsdFactorization best;
  std::size_t best_seed = 0;
  std::vector<double> seed_residuals;
  std::vector<PsdFactorization> all;  // one per seed, in seed order
  /// Residual <= tau_fact: numerical evidence that psd rank <= k. A large
  /// residual says nothing about lower bounds.
  bool within_tolerance = false;
  /// The squared error never increased across a half-sweep.
  bool monotone = true;
};

FactorizeResult alternate_factorize(const Eigen::MatrixXd& m, const FactorizeOptions& opt);

struct RankProfile {
  std::vector<std::size_t> a_ranks;
  std::vector<std::size_t> b_ranks;
  std::size_t count_rank_one_a = 0;
  std::size_t count_rank_one_b = 0;
};

/// Numerical rank: eigenvalues above tau_rank times the largest.
std::size_t numerical_psd_rank(const Eigen::MatrixXd& s, double tau_rank);
RankProfile rank_profile(const PsdFactorization& f, double tau_rank = 1e-6);

/// Nearest PSD matrix in Frobenius norm (eigenvalue clipping).
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& s);

struct SqrtRankResult {
  std::size_t rank = 0;
  /// Signed square root attaining the rank, as doubles, and exactly when
  /// every entry is the square of a rational.
  Eigen::MatrixXd witness;
  std::optional<RationalMatrix> exact_witness;
  bool exact = false;
  /// Floating case only: some singular value fell in the ambiguous band.
  bool guard_triggered = false;
  std::size_t patterns = 0;
};

/// Minimum rank over Hadamard square roots. Signs on a spanning forest of the
/// nonzero pattern are fixed (row and column sign flips preserve rank); the
/// rest are enumerated. Throws BudgetExceeded beyond `limit` patterns.
SqrtRankResult sqrt_rank(const RationalMatrix& m, std::size_t limit = std::size_t{1} << 20);

/// The 4x4 family [[a,b,1,b],[b,a,b,1],[1,b,a,b],[b,1,b,a]].
RationalMatrix circulant4(const Rational& a, const Rational& b);

struct Circulant4Row {
  Rational a, b;
  double residual_k3 = 0;
  std::size_t boundary_zero_count = 0;  // vanishing 3x3 boundary-polynomial minors
};

/// Rows in a-major order over a_min + i step <= a_max, b likewise.
std::vector<Circulant4Row> scan_circulant4(const Rational& a_min, const Rational& a_max, const Rational& b_min,
                                           const Rational& b_max, const Rational& step,
                                           const FactorizeOptions& opt);

}  // namespace psdrank
