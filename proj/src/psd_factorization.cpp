#include "psdrank/psd_factorization.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "psdrank/boundary_ideal.hpp"
#include "psdrank/errors.hpp"
#include "psdrank/exact_linalg.hpp"

namespace psdrank {

Eigen::MatrixXd PsdFactorization::product() const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(a_factors.size()), static_cast<Eigen::Index>(b_factors.size()));
  for (std::size_t i = 0; i < a_factors.size(); ++i)
    for (std::size_t j = 0; j < b_factors.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (a_factors[i].array() * b_factors[j].array()).sum();
  return out;
}

void PsdFactorization::update_residual(const Eigen::MatrixXd& m) {
  residual = (product() - m).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (s + s.transpose()));
  const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

namespace {

double squared_error(const std::vector<Eigen::MatrixXd>& a, const std::vector<Eigen::MatrixXd>& b,
                     const Eigen::MatrixXd& m) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double d = (a[i].array() * b[j].array()).sum() - m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      s += d * d;
    }
  return s;
}

// Projected gradient on every X_i for min sum_j (<X_i, Y_j> - target(i, j))^2
// with the Y_j fixed; target is m or its transpose.
void half_sweep(std::vector<Eigen::MatrixXd>& xs, const std::vector<Eigen::MatrixXd>& ys,
                const Eigen::MatrixXd& target, std::size_t steps) {
  const auto ny = static_cast<Eigen::Index>(ys.size());
  Eigen::MatrixXd gram(ny, ny);
  for (Eigen::Index j = 0; j < ny; ++j)
    for (Eigen::Index l = j; l < ny; ++l)
      gram(j, l) = gram(l, j) = (ys[j].array() * ys[l].array()).sum();
  const double lip = 2.0 * Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  if (!(lip > 0)) return;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t s = 0; s < steps; ++s) {
      Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(xs[i].rows(), xs[i].cols());
      for (Eigen::Index j = 0; j < ny; ++j) {
        const double r = (xs[i].array() * ys[j].array()).sum() - target(static_cast<Eigen::Index>(i), j);
        grad += 2.0 * r * ys[j];
      }
      xs[i] = project_psd(xs[i] - grad / lip);
    }
  }
}

Eigen::MatrixXd random_psd(std::size_t k, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = gauss(rng);
  Eigen::MatrixXd s = g * g.transpose();
  return s / s.trace();
}

}  // namespace

FactorizeResult alternate_factorize(const Eigen::MatrixXd& m, const FactorizeOptions& opt) {
  if (opt.k == 0 || opt.seeds == 0) throw Error(ErrorCode::DimensionMismatch, "k and seeds must be positive");
  if ((m.array() < 0).any()) throw Error(ErrorCode::NegativeEntry, "matrix must be nonnegative");
  const auto p = static_cast<std::size_t>(m.rows());
  const auto q = static_cast<std::size_t>(m.cols());
  const Eigen::MatrixXd mt = m.transpose();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());

  FactorizeResult res;
  for (std::size_t s = 0; s < opt.seeds; ++s) {
    std::mt19937_64 rng(opt.seed * 1000003ULL + s);
    PsdFactorization f;
    f.k = opt.k;
    for (std::size_t i = 0; i < p; ++i) f.a_factors.push_back(random_psd(opt.k, rng));
    for (std::size_t j = 0; j < q; ++j) f.b_factors.push_back(random_psd(opt.k, rng));
    // Match the overall magnitude before iterating.
    const double prod_mean = f.product().mean();
    const double target_mean = m.mean();
    if (prod_mean > 0 && target_mean > 0)
      for (auto& b : f.b_factors) b *= target_mean / prod_mean;

    double err = squared_error(f.a_factors, f.b_factors, m);
    for (std::size_t it = 0; it < opt.iters; ++it) {
      half_sweep(f.a_factors, f.b_factors, m, opt.inner_steps);
      double next = squared_error(f.a_factors, f.b_factors, m);
      if (next > err * (1 + 1e-12) + 1e-20 * scale * scale) res.monotone = false;
      err = next;
      half_sweep(f.b_factors, f.a_factors, mt, opt.inner_steps);
      next = squared_error(f.a_factors, f.b_factors, m);
      if (next > err * (1 + 1e-12) + 1e-20 * scale * scale) res.monotone = false;
      err = next;
      if ((it & 15) == 0) {
        f.update_residual(m);
        if (f.residual <= opt.stop_residual) break;
      }
    }
    f.update_residual(m);
    res.seed_residuals.push_back(f.residual);
    if (s == 0 || f.residual < res.best.residual) {
      res.best = f;
      res.best_seed = s;
    }
    res.all.push_back(std::move(f));
  }
  res.within_tolerance = res.best.residual <= opt.tau_fact;
  return res;
}

std::size_t numerical_psd_rank(const Eigen::MatrixXd& s, double tau_rank) {
  const Eigen::VectorXd lam = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s, Eigen::EigenvaluesOnly).eigenvalues();
  const double top = lam.maxCoeff();
  if (!(top > 0)) return 0;
  return static_cast<std::size_t>((lam.array() > tau_rank * top).count());
}

RankProfile rank_profile(const PsdFactorization& f, double tau_rank) {
  RankProfile rp;
  for (const auto& a : f.a_factors) rp.a_ranks.push_back(numerical_psd_rank(a, tau_rank));
  for (const auto& b : f.b_factors) rp.b_ranks.push_back(numerical_psd_rank(b, tau_rank));
  rp.count_rank_one_a = static_cast<std::size_t>(std::count(rp.a_ranks.begin(), rp.a_ranks.end(), 1u));
  rp.count_rank_one_b = static_cast<std::size_t>(std::count(rp.b_ranks.begin(), rp.b_ranks.end(), 1u));
  return rp;
}

namespace {

std::optional<Rational> exact_sqrt(const Rational& x) {
  if (x < 0) return std::nullopt;
  const mpz_class& num = x.get_num();
  const mpz_class& den = x.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return std::nullopt;
  return Rational(sqrt(num), sqrt(den));
}

}  // namespace

SqrtRankResult sqrt_rank(const RationalMatrix& m, std::size_t limit) {
  const std::size_t p = m.rows(), q = m.cols();
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < q; ++j)
      if (m(i, j) < 0) throw Error(ErrorCode::NegativeEntry, "square roots need nonnegative entries");

  // Spanning forest on the bipartite graph of nonzero entries: those signs are fixed.
  std::vector<int> parent(p + q);
  for (std::size_t v = 0; v < p + q; ++v) parent[v] = static_cast<int>(v);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<std::pair<std::size_t, std::size_t>> free_entries;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < q; ++j) {
      if (m(i, j) == 0) continue;
      const int a = find(static_cast<int>(i)), b = find(static_cast<int>(p + j));
      if (a != b) parent[a] = b;
      else free_entries.emplace_back(i, j);
    }
  if (free_entries.size() >= 63 || (std::size_t{1} << free_entries.size()) > limit) {
    throw Error(ErrorCode::BudgetExceeded, std::to_string(free_entries.size()) + " free signs exceed the budget");
  }

  SqrtRankResult res;
  bool exact = true;
  RationalMatrix root_exact(p, q);
  Eigen::MatrixXd root(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < q; ++j) {
      root(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = std::sqrt(m(i, j).get_d());
      if (auto r = exact_sqrt(m(i, j))) root_exact(i, j) = *r;
      else exact = false;
    }
  res.exact = exact;
  res.rank = std::min(p, q) + 1;
  const std::size_t patterns = std::size_t{1} << free_entries.size();
  for (std::size_t mask = 0; mask < patterns; ++mask) {
    Eigen::MatrixXd w = root;
    RationalMatrix we = root_exact;
    for (std::size_t b = 0; b < free_entries.size(); ++b) {
      if (!(mask >> b & 1)) continue;
      const auto [i, j] = free_entries[b];
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *= -1;
      if (exact) we(i, j) = -we(i, j);
    }
    std::size_t rank;
    bool guard = false;
    if (exact) {
      rank = exact_rank(we);
    } else {
      const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(w).singularValues();
      const double top = sv.size() ? sv[0] : 0.0;
      rank = static_cast<std::size_t>((sv.array() > 1e-9 * top).count());
      guard = ((sv.array() > 1e-12 * top) && (sv.array() <= 1e-6 * top)).any();
    }
    ++res.patterns;
    if (rank < res.rank) {
      res.rank = rank;
      res.witness = w;
      res.guard_triggered = guard;
      if (exact) res.exact_witness = we;
    }
  }
  return res;
}

RationalMatrix circulant4(const Rational& a, const Rational& b) {
  return RationalMatrix{{a, b, 1, b}, {b, a, b, 1}, {1, b, a, b}, {b, 1, b, a}};
}

std::vector<Circulant4Row> scan_circulant4(const Rational& a_min, const Rational& a_max, const Rational& b_min,
                                           const Rational& b_max, const Rational& step,
                                           const FactorizeOptions& opt) {
  if (!(step > 0) || a_min <= 0 || b_min <= 0 || a_max < a_min || b_max < b_min) {
    throw Error(ErrorCode::DimensionMismatch, "ranges must be positive with a positive step");
  }
  const SparsePoly& poly = boundary_polynomial();
  FactorizeOptions o = opt;
  o.k = 3;
  std::vector<Circulant4Row> rows;
  for (Rational a = a_min; a <= a_max; a += step) {
    for (Rational b = b_min; b <= b_max; b += step) {
      const RationalMatrix m = circulant4(a, b);
      Eigen::MatrixXd md(4, 4);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) md(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j).get_d();
      Circulant4Row row{a, b, alternate_factorize(md, o).best.residual, 0};
      row.boundary_zero_count = boundary_scan(poly, m).zero_submatrices.size();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace psdrank
