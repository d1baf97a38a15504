#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace psdrank {

/// {x in R^dim : sum_i x_i D_i + (1 - sum_i x_i) D_last >= 0}; mats holds
/// D_1..D_dim followed by D_last, all symmetric k x k.
struct Pencil {
  std::size_t k = 0;
  std::size_t dim = 0;
  std::vector<Eigen::MatrixXd> mats;

  /// Throws DimensionMismatch on wrong counts/sizes or asymmetric matrices.
  void validate() const;
  Eigen::MatrixXd at(const Eigen::VectorXd& x) const;
  const Eigen::MatrixXd& last() const { return mats.back(); }
};

/// Smallest eigenvalue at x is at least -tau max(1, ||pencil(x)||_2).
bool membership(const Pencil& p, const Eigen::VectorXd& x, double tau = 1e-8);

/// Numerical rank of the pencil matrix at x: eigenvalues above tau max(1, lambda_max).
/// Throws NotMember when x is not in the spectrahedron.
std::size_t rank_locus(const Pencil& p, const Eigen::VectorXd& x, double tau = 1e-8);

/// A pencil over s coordinates viewed through its projection onto the first
/// k. witnesses[i] (i < k) lifts e_{i+1}; witnesses[k] lifts the origin; each
/// lift holds the s - k hidden coordinates. Missing lifts are searched for.
struct ShadowData {
  Pencil pencil;
  std::size_t k = 0;
  std::vector<std::optional<Eigen::VectorXd>> witnesses;
};

struct ShadowResult {
  Pencil pencil;                         // over k coordinates
  std::vector<Eigen::VectorXd> lifts;    // the witnesses actually used
  /// Matrix size differs from k, outside the hypotheses of the construction.
  bool experimental = false;
};

/// D_i = B_i + sum_j y_j^(i) (B_j - B_last) and D_last' = B_last + sum_j y_j^(0) (B_j - B_last).
/// Throws WitnessInvalid if some D_i has an eigenvalue below -tau, NotMember
/// if no lift of a simplex vertex exists.
ShadowResult shadow_to_spectrahedron(const ShadowData& sd, double tau = 1e-8);

/// Hidden coordinates of the point (x, y) in the pencil's spectrahedron,
/// chosen with maximal eigenvalue margin; nullopt when none exists.
std::optional<Eigen::VectorXd> find_lift(const Pencil& p, const Eigen::VectorXd& x_visible, double tau = 1e-8);

/// Given C = {sum x_i a_i a_i^T + (1 - sum x_i) B >= 0} with B PSD, returns
/// C' inside C with every vertex of the standard simplex at a rank-one locus;
/// C' replaces B by a rank-one d d^T (in the original coordinates).
/// Throws PreconditionFailed for a zero a_i, a non-PSD or zero B, or when B
/// vanishes on the complement of span(a_i) in the deficient case.
Pencil shrink_at_rank_one(const std::vector<Eigen::VectorXd>& a_vecs, const Eigen::MatrixXd& b);

/// The pencil C of the previous construction.
Pencil rank_one_pencil(const std::vector<Eigen::VectorXd>& a_vecs, const Eigen::MatrixXd& b);

struct SampleOptions {
  std::size_t samples = 10000;
  std::size_t burn_in = 100;
  std::size_t thinning = 1;  // hit-and-run steps between recorded samples
  double tau = 1e-8;
  double box = 10.0;
  std::uint64_t seed = 1;
};

struct ContainmentReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_scaled_eigenvalue = 0;  // min over samples of lambda_min / max(1, ||outer(x)||)
  std::optional<Eigen::VectorXd> first_violation;
};

/// Hit-and-run inside `inner` (restricted to |x_i| <= box), checking membership in `outer`.
/// Throws NoFeasibleStart when inner has no interior point, DimensionMismatch on dim mismatch.
ContainmentReport containment_sample(const Pencil& inner, const Pencil& outer, const SampleOptions& opt = {});

}  // namespace psdrank
