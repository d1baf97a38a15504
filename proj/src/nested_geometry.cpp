#include "psdrank/nested_geometry.hpp"

#include "psdrank/errors.hpp"

namespace psdrank {

void VPolytope::validate() const {
  if (vertices.empty()) throw Error(ErrorCode::DimensionMismatch, "polytope has no vertices");
  for (const auto& v : vertices)
    if (v.size() != dim) throw Error(ErrorCode::DimensionMismatch, "vertex of wrong dimension");
}

void HPolyhedron::validate() const {
  if (halfspaces.empty()) throw Error(ErrorCode::DimensionMismatch, "polyhedron has no halfspaces");
  for (const auto& hs : halfspaces)
    if (hs.h.size() != dim) throw Error(ErrorCode::DimensionMismatch, "normal of wrong dimension");
}

RationalMatrix slack_matrix(const VPolytope& inner, const HPolyhedron& outer) {
  inner.validate();
  outer.validate();
  if (inner.dim != outer.dim) throw Error(ErrorCode::DimensionMismatch, "inner and outer dimensions differ");
  RationalMatrix s(inner.vertices.size(), outer.halfspaces.size());
  for (std::size_t i = 0; i < inner.vertices.size(); ++i) {
    for (std::size_t j = 0; j < outer.halfspaces.size(); ++j) {
      const Halfspace& hs = outer.halfspaces[j];
      Rational v = hs.z;
      for (std::size_t k = 0; k < inner.dim; ++k) v -= hs.h[k] * inner.vertices[i][k];
      s(i, j) = v;
    }
  }
  return s;
}

bool contains(const VPolytope& inner, const HPolyhedron& outer) {
  const RationalMatrix s = slack_matrix(inner, outer);
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j)
      if (s(i, j) < 0) return false;
  return true;
}

NestedPair::NestedPair(VPolytope inner, HPolyhedron outer)
    : inner_(std::move(inner)), outer_(std::move(outer)) {
  if (!contains(inner_, outer_)) throw Error(ErrorCode::NotNested, "an inner vertex violates an outer halfspace");
}

RationalMatrix slack_matrix(const NestedPair& pair) { return slack_matrix(pair.inner(), pair.outer()); }

NestedPair build_nested_pair(const NonnegativeMatrix& m) {
  const RankFactorization f = rank_factorization(m.matrix());
  const std::size_t r = f.a_factor.cols();
  if (r < 2) throw Error(ErrorCode::DegenerateDimension, "rank 1 input gives a zero-dimensional pair");
  const std::size_t d = r - 1;

  VPolytope p{d, {}};
  for (std::size_t i = 0; i < f.a_factor.rows(); ++i) {
    RationalVector v(d);
    for (std::size_t k = 0; k < d; ++k) v[k] = f.a_factor(i, k);
    p.vertices.push_back(std::move(v));
  }
  // (a^T, 1) b_j >= 0  <=>  -b_j[0..d)^T a <= b_j[d].
  HPolyhedron q{d, {}};
  for (std::size_t j = 0; j < f.b_factor.cols(); ++j) {
    Halfspace hs{RationalVector(d), f.b_factor(d, j)};
    for (std::size_t k = 0; k < d; ++k) hs.h[k] = -f.b_factor(k, j);
    q.halfspaces.push_back(std::move(hs));
  }
  return NestedPair(std::move(p), std::move(q));
}

RationalVector vertex_centroid(const VPolytope& p) {
  p.validate();
  RationalVector c(p.dim);
  for (const auto& v : p.vertices)
    for (std::size_t k = 0; k < p.dim; ++k) c[k] += v[k];
  for (auto& x : c) x /= static_cast<long>(p.vertices.size());
  return c;
}

VPolytope homothety(const VPolytope& p, const Rational& t) {
  const RationalVector c = vertex_centroid(p);
  VPolytope out{p.dim, {}};
  for (const auto& v : p.vertices) {
    RationalVector w(p.dim);
    for (std::size_t k = 0; k < p.dim; ++k) w[k] = c[k] + t * (v[k] - c[k]);
    out.vertices.push_back(std::move(w));
  }
  return out;
}

}  // namespace psdrank
