#pragma once

#include <utility>
#include <vector>

#include "foilspace/types.hpp"

namespace foilspace {

/// Selects which moment orders enter an augmentation vector. Orders are the
/// total degree r = p + q; every (p, q) pair of each listed order is included,
/// ordered by (r ascending, p descending). Orders 0 and 1 are excluded by
/// contract: after centering and normalization they are the constants 1, 0, 0.
struct MomentSpec {
  std::vector<int> orders;

  static MomentSpec of_orders(std::vector<int> orders);

  /// All (p, q) pairs in the canonical order, e.g. orders {2} yields
  /// (2,0), (1,1), (0,2).
  std::vector<std::pair<int, int>> index_pairs() const;

  int count() const;
};

/// Exact ∬ x^p y^q dA over the polygonal region bounded by the polyline,
/// via Green's theorem with closed-form per-edge integration. The polygon must
/// be closed (endpoints within 1e-6); orientation is corrected so the area
/// M_{0,0} is positive.
double raw_moment(const PolylineFoil& poly, int p, int q);

/// Moment about the region centroid. Computed by translating the vertices to
/// the centroid frame first, which keeps high-order powers well conditioned
/// for far-from-origin polygons.
double central_moment(const PolylineFoil& poly, int p, int q);

/// Translation- and scale-invariant moment
/// mu_{p,q} = central_{p,q} / area^{(p+q+2)/2}. Deliberately not invariant to
/// rotation: orientation carries aerodynamic information.
double invariant_moment(const PolylineFoil& poly, int p, int q);

/// Invariant moments for every pair selected by the spec, in canonical order.
std::vector<double> moment_vector(const PolylineFoil& poly,
                                  const MomentSpec& spec);

}  // namespace foilspace
