#include "psdrank/dimension_probe.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <set>
#include <sstream>

#include "psdrank/errors.hpp"
#include "psdrank/exact_linalg.hpp"

namespace psdrank {

void RankAssignment::validate() const {
  if (a_ranks.size() != p || b_ranks.size() != q) throw Error(ErrorCode::DimensionMismatch, "rank list lengths must be p and q");
  if (k == 0) throw Error(ErrorCode::DimensionMismatch, "k must be positive");
  for (auto r : a_ranks)
    if (r < 1 || r > k) throw Error(ErrorCode::DimensionMismatch, "rank outside [1, k]");
  for (auto r : b_ranks)
    if (r < 1 || r > k) throw Error(ErrorCode::DimensionMismatch, "rank outside [1, k]");
}

std::string RankAssignment::to_string() const {
  std::ostringstream os;
  auto list = [&](const std::vector<std::size_t>& v) {
    os << '{';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << '}';
  };
  os << '{';
  list(a_ranks);
  os << ',';
  list(b_ranks);
  os << '}';
  return os.str();
}

namespace {

using IntMat = std::vector<std::vector<mpz_class>>;  // row-major small dense

IntMat random_factor(std::size_t k, std::size_t r, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(1, 1000);
  IntMat g(k, std::vector<mpz_class>(r));
  for (auto& row : g)
    for (auto& x : row) x = dist(rng);
  return g;
}

IntMat gram(const IntMat& g) {
  const std::size_t k = g.size();
  IntMat s(k, std::vector<mpz_class>(k));
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t c = 0; c < g[a].size(); ++c) s[a][b] += g[a][c] * g[b][c];
  return s;
}

std::array<std::uint64_t, 3> random_primes(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::array<std::uint64_t, 3> out{};
  for (auto& p : out) {
    mpz_class start = static_cast<unsigned long>((rng() & 0x1fffffffULL) | 0x20000000ULL);
    mpz_class prime;
    mpz_nextprime(prime.get_mpz_t(), start.get_mpz_t());
    p = prime.get_ui();
  }
  return out;
}

}  // namespace

std::vector<mpz_class> exact_jacobian(const RankAssignment& asgn, std::uint64_t seed, std::size_t& rows,
                                      std::size_t& cols) {
  asgn.validate();
  const std::size_t p = asgn.p, q = asgn.q, k = asgn.k;
  std::mt19937_64 rng(seed);
  std::vector<IntMat> g, h;
  for (std::size_t i = 0; i < p; ++i) g.push_back(random_factor(k, asgn.a_ranks[i], rng));
  for (std::size_t j = 0; j < q; ++j) h.push_back(random_factor(k, asgn.b_ranks[j], rng));
  std::vector<IntMat> ga, hb;
  for (const auto& x : g) ga.push_back(gram(x));
  for (const auto& x : h) hb.push_back(gram(x));

  std::vector<std::size_t> g_off(p + 1, 0), h_off(q + 1, 0);
  for (std::size_t i = 0; i < p; ++i) g_off[i + 1] = g_off[i] + k * asgn.a_ranks[i];
  h_off[0] = g_off[p];
  for (std::size_t j = 0; j < q; ++j) h_off[j + 1] = h_off[j] + k * asgn.b_ranks[j];
  rows = p * q;
  cols = h_off[q];
  std::vector<mpz_class> jac(rows * cols);

  // d<G G^T, B>/dG = 2 B G and symmetrically for H.
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      const std::size_t row = i * q + j;
      for (std::size_t u = 0; u < k; ++u) {
        for (std::size_t v = 0; v < asgn.a_ranks[i]; ++v) {
          mpz_class acc = 0;
          for (std::size_t w = 0; w < k; ++w) acc += hb[j][u][w] * g[i][w][v];
          jac[row * cols + g_off[i] + u * asgn.a_ranks[i] + v] = 2 * acc;
        }
        for (std::size_t v = 0; v < asgn.b_ranks[j]; ++v) {
          mpz_class acc = 0;
          for (std::size_t w = 0; w < k; ++w) acc += ga[i][u][w] * h[j][w][v];
          jac[row * cols + h_off[j] + u * asgn.b_ranks[j] + v] = 2 * acc;
        }
      }
    }
  }
  return jac;
}

ProbeResult jacobian_rank(const RankAssignment& asgn, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t rows = 0, cols = 0;
  const std::vector<mpz_class> jac = exact_jacobian(asgn, seed, rows, cols);
  ProbeResult res;
  res.seed = seed;
  res.parameter_count = cols;
  res.target = asgn.p * asgn.q - 1;
  const std::size_t r = std::min({asgn.p, asgn.q, asgn.k * (asgn.k + 1) / 2});
  res.ambient_dim = asgn.p * r + asgn.q * r - r * r;
  res.jacobian_rank = bareiss_rank(jac, rows, cols);
  res.primes = random_primes(seed);
  for (std::size_t t = 0; t < 3; ++t) {
    res.modular_ranks[t] = modular_rank(jac, rows, cols, res.primes[t]);
    if (res.modular_ranks[t] != res.jacobian_rank) res.modular_agree = false;
  }
  res.is_candidate = res.jacobian_rank == res.target;
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

namespace {

// A rank list where 0 stands for a "2/3" slot.
using Pattern = std::vector<std::size_t>;

std::vector<std::vector<std::size_t>> expand(const Pattern& pat) {
  std::vector<std::size_t> fixed;
  std::size_t slots = 0;
  for (auto r : pat) {
    if (r == 0) ++slots;
    else fixed.push_back(r);
  }
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t threes = 0; threes <= slots; ++threes) {
    std::vector<std::size_t> v = fixed;
    for (std::size_t s = 0; s < slots; ++s) v.push_back(s < slots - threes ? 2 : 3);
    std::sort(v.begin(), v.end());
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::vector<RankAssignment> table1_assignments() {
  const std::vector<std::pair<Pattern, Pattern>> rows = {
      {{1, 1, 1, 1}, {1, 1, 1, 1}},
      {{1, 1, 1, 1}, {1, 1, 1, 1, 0}},
      {{1, 1, 1, 1}, {1, 1, 1, 1, 0, 0}},
      {{1, 1, 1, 2}, {1, 1, 1, 1, 1, 1}},
      {{1, 1, 1, 1, 0}, {1, 1, 1, 1, 0}},
      {{1, 1, 1, 1, 0}, {1, 1, 1, 1, 0, 0}},
      {{1, 1, 1, 2, 3}, {1, 1, 1, 1, 1, 1}},
      {{1, 1, 1, 1, 0, 0}, {1, 1, 1, 1, 0, 0}},
      {{1, 1, 1, 1, 1, 1}, {1, 1, 1, 2, 3, 3}},
      {{1, 1, 1, 1, 1, 1}, {1, 1, 2, 2, 2, 2}},
      {{1, 1, 1, 1, 1, 2}, {1, 1, 1, 2, 2, 2}},
  };
  std::vector<RankAssignment> out;
  for (const auto& [a, b] : rows)
    for (const auto& ea : expand(a))
      for (const auto& eb : expand(b)) out.push_back({a.size(), b.size(), 3, ea, eb});
  return out;
}

std::vector<RankAssignment> complement_assignments(std::size_t p, std::size_t q, std::size_t k,
                                                   const std::vector<RankAssignment>& listed) {
  auto multisets = [&](std::size_t n) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur(n, 1);
    while (true) {
      out.push_back(cur);
      std::size_t i = n;
      while (i > 0 && cur[i - 1] == k) --i;
      if (i == 0) break;
      const std::size_t v = cur[i - 1] + 1;
      for (std::size_t j = i - 1; j < n; ++j) cur[j] = v;
    }
    return out;
  };
  std::set<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> seen;
  for (const auto& a : listed)
    if (a.p == p && a.q == q && a.k == k) seen.insert({a.a_ranks, a.b_ranks});
  std::vector<RankAssignment> out;
  for (const auto& a : multisets(p))
    for (const auto& b : multisets(q))
      if (!seen.count({a, b})) out.push_back({p, q, k, a, b});
  return out;
}

std::vector<SweepRow> table1_sweep(std::uint64_t seed, bool include_complement) {
  const auto listed = table1_assignments();
  std::vector<SweepRow> rows;
  for (const auto& a : listed) rows.push_back({a, jacobian_rank(a, seed), true});
  if (include_complement)
    for (const auto& a : complement_assignments(4, 4, 3, listed)) rows.push_back({a, jacobian_rank(a, seed), false});
  return rows;
}

RankAssignment k4_assignment(std::size_t other_rank) {
  RankAssignment a{10, 10, 4, {}, {}};
  for (std::size_t i = 0; i < 10; ++i) {
    a.a_ranks.push_back(i < 5 ? 1 : other_rank);
    a.b_ranks.push_back(i < 5 ? 1 : other_rank);
  }
  return a;
}

std::vector<SquareCaseRow> square_case_sweep(std::size_t k_max, std::uint64_t seed) {
  std::vector<SquareCaseRow> rows;
  for (std::size_t k = 1; k <= k_max; ++k) {
    const RankAssignment a{k + 1, k + 1, k, std::vector<std::size_t>(k + 1, 1), std::vector<std::size_t>(k + 1, 1)};
    SquareCaseRow row;
    row.k = k;
    row.result = jacobian_rank(a, seed);
    row.expected = (k + 1) * (k + 1) - 1;
    row.matches = row.result.jacobian_rank == row.expected;
    row.seed_stable = jacobian_rank(a, seed + 7919).jacobian_rank == row.result.jacobian_rank;
    rows.push_back(row);
  }
  return rows;
}

mpz_class candidate_count(std::size_t p, std::size_t q, std::size_t k) {
  auto binom = [](std::size_t n, std::size_t r) {
    if (r > n) return mpz_class(0);
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), n, r);
    return out;
  };
  mpz_class total = binom(p, k) * binom(q, k - 1);
  total += binom(p, k - 1) * binom(q, k);
  return total;
}

}  // namespace psdrank
