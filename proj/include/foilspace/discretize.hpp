#pragma once

#include <string>

#include "foilspace/curve.hpp"
#include "foilspace/types.hpp"

namespace foilspace {

/// Number of sample points per profile used throughout unless overridden.
inline constexpr int kDefaultN = 200;

/// Converts a smooth curve into an N-point polyline under the given spacing
/// scheme. The first/last output points are the exact curve endpoints and the
/// underlying parameter sequence is strictly increasing.
///
/// Spacing rules:
///  - UniformParametric: equal parameter steps.
///  - Cosine: t(s) = (1 - cos(pi s))/2 reparameterization, clustering points
///    at both ends of the domain.
///  - CurvatureBased: equal increments of the cumulative integral of
///    |kappa(t)| + eps, with eps = 0.05 * mean|kappa| so that flat stretches
///    still receive points.
///  - UniformPoint: equal arc length per segment.
PolylineFoil discretize(const ParametricCurve& c, Scheme scheme, int n,
                        const std::string& name = "curve");

struct ResampleResult {
  PolylineFoil foil;
  double hausdorff;  // symmetric polyline-to-polyline distance bound, chord units
};

/// Re-discretizes an existing polyline: fits a chord-length cubic spline
/// through the (cleaned) points and samples it under (scheme, n). The reported
/// Hausdorff distance measures how far the output strays from the input shape.
ResampleResult resample_polyline(const PolylineFoil& pf, Scheme scheme, int n);

}  // namespace foilspace
