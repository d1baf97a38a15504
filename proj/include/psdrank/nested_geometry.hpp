#pragma once

#include <vector>

#include "psdrank/rational_matrix.hpp"

namespace psdrank {

using RationalVector = std::vector<Rational>;

struct VPolytope {
  std::size_t dim = 0;
  std::vector<RationalVector> vertices;

  /// Throws DimensionMismatch on an empty list or a point of the wrong size.
  void validate() const;
};

struct Halfspace {
  RationalVector h;  // h^T x <= z
  Rational z;
};

struct HPolyhedron {
  std::size_t dim = 0;
  std::vector<Halfspace> halfspaces;

  void validate() const;
};

/// Entry (i, j) is z_j - h_j^T v_i. Throws DimensionMismatch.
RationalMatrix slack_matrix(const VPolytope& inner, const HPolyhedron& outer);

/// True iff every slack is nonnegative.
bool contains(const VPolytope& inner, const HPolyhedron& outer);

/// Inner polytope P given by vertices, outer polyhedron Q by halfspaces, P inside Q.
class NestedPair {
 public:
  /// Throws NotNested if some slack is negative.
  NestedPair(VPolytope inner, HPolyhedron outer);

  const VPolytope& inner() const { return inner_; }
  const HPolyhedron& outer() const { return outer_; }
  std::size_t dim() const { return inner_.dim; }

 private:
  VPolytope inner_;
  HPolyhedron outer_;
};

RationalMatrix slack_matrix(const NestedPair& pair);

/// P = conv(a_i) from the rows (a_i^T, 1) of the rank factorization and
/// Q = {x : (x^T, 1) B >= 0}, one halfspace per column, no redundancy removal.
/// Requires rank >= 2 (DegenerateDimension); propagates NoOnesInSpan.
NestedPair build_nested_pair(const NonnegativeMatrix& m);

/// Mean of the vertex list.
RationalVector vertex_centroid(const VPolytope& p);

/// Image of p under x -> c + t (x - c), c the vertex centroid.
VPolytope homothety(const VPolytope& p, const Rational& t);

}  // namespace psdrank
