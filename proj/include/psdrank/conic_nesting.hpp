#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psdrank/nested_geometry.hpp"

namespace psdrank {

/// Projective conic with region {(x, y) : (x, y, 1) X (x, y, 1)^T <= 0}.
/// Stored with trace of the leading 2x2 block equal to 2.
class Conic {
 public:
  /// Rescales so the leading block has trace 2. Throws DegenerateSum when that trace is not positive.
  explicit Conic(const Eigen::Matrix3d& q);

  const Eigen::Matrix3d& q_matrix() const { return q_; }
  double evaluate(double x, double y) const;
  bool is_ellipse() const;  // leading block positive definite and det < 0
  double determinant() const { return q_.determinant(); }

 private:
  Eigen::Matrix3d q_;
};

enum class NestVerdict { Feasible, Infeasible, Stalled };
std::string to_string(NestVerdict v);

struct NestOptions {
  double tau_feas = 1e-8;
  double touch_tol = 1e-7;  // relative to the Frobenius norm of X
  double delta_h = 1e-6;
  std::size_t max_iter = 100000;
  double gap_tol = 1e-11;
  double box = 1e4;
  /// Also decide strictness (one extra solve).
  bool compute_strict = true;
  /// Stop once the verdict is settled; the witness is then not the max-margin conic.
  bool stop_on_verdict = false;
};

struct NestReport {
  NestVerdict verdict = NestVerdict::Stalled;
  bool feasible = false;
  std::optional<Conic> conic;
  std::vector<std::size_t> touched_vertices;
  std::vector<std::size_t> tangent_edges;
  bool strict = false;
  double margin = 0;  // best margin found, in normalised coordinates
  double gap = 0;     // bound on how far the true optimum may exceed margin
  std::size_t iterations = 0;
};

/// Three-valued nesting decision for an arbitrary planar (P, Q); no exception on stall.
NestReport solve_nesting(const VPolytope& inner, const HPolyhedron& outer, const NestOptions& opt = {});

/// Decides whether an ellipse E fits with P inside E inside Q. Throws
/// DimensionMismatch unless dim = 2 and SolverStall when undecided.
NestReport nest_ellipse(const NestedPair& pair, const NestOptions& opt = {});

/// Nesting for the homothety (1 + delta_h) P about P's vertex centroid.
bool strict_nest_ellipse(const NestedPair& pair, const NestOptions& opt = {});

enum class M32Class { Interior, Boundary, Outside };
std::string to_string(M32Class c);

/// Row-normalises first (row scaling preserves the class). Rank 1 and 2
/// inputs are classified directly: Interior when all entries are positive,
/// Boundary otherwise. Throws RankMismatch for rank > 3, SolverStall when undecided.
M32Class classify_m32(const NonnegativeMatrix& m, const NestOptions& opt = {});

Rational circulant_criterion(const Rational& a, const Rational& b, const Rational& c);
bool circulant_psd2(const Rational& a, const Rational& b, const Rational& c);

/// Sum of the trace-normalised forms. Throws DegenerateSum unless the result is an ellipse.
Conic average_ellipses(const Conic& e0, const Conic& e1);

/// Evidence that exactly one ellipse nests: zero optimal margin, and witnesses
/// maximising `trials` random linear objectives over the slightly relaxed
/// feasible set all coincide up to tau_uni after normalisation.
bool unique_nesting_probe(const NestedPair& pair, std::size_t trials, std::uint64_t seed = 1,
                          const NestOptions& opt = {}, double tau_uni = 1e-6);

/// Smallest eigenvalue of X + mu L over mu >= 0, where L encodes h^T x <= z;
/// nonnegative exactly when the S-procedure certifies E inside the halfspace.
double best_halfspace_certificate(const Eigen::Matrix3d& x, const Eigen::Vector2d& h, double z);

struct WitnessCheck {
  double min_vertex_slack = 0;  // min over i of -v_i^T X v_i
  double min_certificate = 0;   // min over j of best_halfspace_certificate
};
WitnessCheck check_witness(const NestedPair& pair, const Conic& conic);

struct Circulant3Point {
  Rational a, b, c;
  Rational criterion;
  NestVerdict verdict = NestVerdict::Stalled;
  bool rank_deficient = false;  // rank < 3: psd rank <= 2 without a solve
  double margin = 0;
};

/// Nesting verdict of the row-normalised circulant(a, b, c).
Circulant3Point nest_circulant3(const Rational& a, const Rational& b, const Rational& c,
                                const NestOptions& opt = {});

}  // namespace psdrank
