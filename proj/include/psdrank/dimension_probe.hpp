#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace psdrank {

struct RankAssignment {
  std::size_t p = 0, q = 0, k = 0;
  std::vector<std::size_t> a_ranks;
  std::vector<std::size_t> b_ranks;

  /// Throws DimensionMismatch unless sizes match and every rank is in [1, k].
  void validate() const;
  std::string to_string() const;  // "{{1,1,1,1},{1,1,1,2}}"
};

struct ProbeResult {
  std::size_t jacobian_rank = 0;
  std::size_t target = 0;          // pq - 1
  std::size_t ambient_dim = 0;     // pr + qr - r^2, r = min(p, q, k(k+1)/2)
  std::size_t parameter_count = 0;
  bool is_candidate = false;
  std::uint64_t seed = 0;
  std::array<std::uint64_t, 3> primes{};
  std::array<std::size_t, 3> modular_ranks{};
  bool modular_agree = true;
  double seconds = 0;
};

/// Exact Jacobian of (G_i, H_j) -> (<G_i G_i^T, H_j H_j^T>)_ij at integer points in [1, 1000].
/// Row (i, j) is i * q + j; columns list the entries of G_1..G_p then H_1..H_q, row-major.
std::vector<mpz_class> exact_jacobian(const RankAssignment& asgn, std::uint64_t seed, std::size_t& rows,
                                      std::size_t& cols);

ProbeResult jacobian_rank(const RankAssignment& asgn, std::uint64_t seed = 1);

/// Table 1 of psd rank three, with each "2/3" slot expanded into multisets over {2, 3}.
std::vector<RankAssignment> table1_assignments();

/// Assignments over sorted rank multisets for the given (p, q, k) that are not in `listed`.
std::vector<RankAssignment> complement_assignments(std::size_t p, std::size_t q, std::size_t k,
                                                   const std::vector<RankAssignment>& listed);

struct SweepRow {
  RankAssignment assignment;
  ProbeResult result;
  bool listed = false;  // appears in Table 1
};

/// Table 1 assignments, then the complement for p = q = 4 when requested.
std::vector<SweepRow> table1_sweep(std::uint64_t seed = 1, bool include_complement = true);

/// k = 4, p = q = 10, five rank-one matrices per side and five of rank `other_rank`.
RankAssignment k4_assignment(std::size_t other_rank);

struct SquareCaseRow {
  std::size_t k = 0;
  ProbeResult result;
  std::size_t expected = 0;  // (k+1)^2 - 1
  bool matches = false;
  bool seed_stable = false;  // same rank under a second seed
};

/// p = q = k + 1, all ranks one, for k = 1 .. k_max.
std::vector<SquareCaseRow> square_case_sweep(std::size_t k_max = 9, std::uint64_t seed = 1);

/// C(p,k) C(q,k-1) + C(p,k-1) C(q,k).
mpz_class candidate_count(std::size_t p, std::size_t q, std::size_t k);

}  // namespace psdrank
