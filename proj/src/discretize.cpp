#include "foilspace/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "foilspace/error.hpp"

namespace foilspace {

namespace {

const double kGL5X[5] = {-0.90617984593866396, -0.53846931010568311, 0.0,
                         0.53846931010568311, 0.90617984593866396};
const double kGL5W[5] = {0.23692688505618909, 0.47862867049936647,
                         128.0 / 225.0, 0.47862867049936647,
                         0.23692688505618909};

template <typename F>
double gl5(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += kGL5W[i] * f(mid + half * kGL5X[i]);
  return s * half;
}

/// Cumulative integral of a positive integrand on [t0, t1], tabulated on a
/// composite panel grid that never straddles a smoothness breakpoint.
struct CumulativeTable {
  std::vector<double> edges;  // panel edges, strictly increasing
  std::vector<double> cum;    // cumulative integral at the edges, cum[0] = 0

  double total() const { return cum.back(); }
};

template <typename F>
CumulativeTable build_table(const F& f, const ParametricCurve& c, int panels) {
  const double t0 = c.t_min(), t1 = c.t_max();
  std::vector<double> cuts{t0};
  for (double k : c.breakpoints())
    if (k > t0 && k < t1 && k > cuts.back()) cuts.push_back(k);
  cuts.push_back(t1);

  CumulativeTable tab;
  tab.edges.push_back(t0);
  const double total_len = t1 - t0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    const int n = std::max(
        1, static_cast<int>(std::llround(panels * len / total_len)));
    for (int j = 1; j <= n; ++j)
      tab.edges.push_back(cuts[i] + len * static_cast<double>(j) / n);
  }
  tab.cum.resize(tab.edges.size());
  tab.cum[0] = 0.0;
  for (size_t i = 1; i < tab.edges.size(); ++i)
    tab.cum[i] = tab.cum[i - 1] + gl5(f, tab.edges[i - 1], tab.edges[i]);
  return tab;
}

/// Solves cumulative(t) = target by bisection inside the bracketing panel.
template <typename F>
double invert_table(const CumulativeTable& tab, const F& f, double target) {
  if (target <= 0.0) return tab.edges.front();
  if (target >= tab.total()) return tab.edges.back();
  size_t i =
      static_cast<size_t>(std::upper_bound(tab.cum.begin(), tab.cum.end(),
                                           target) -
                          tab.cum.begin()) -
      1;
  i = std::min(i, tab.edges.size() - 2);
  double lo = tab.edges[i], hi = tab.edges[i + 1];
  const double base = tab.cum[i];
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (base + gl5(f, tab.edges[i], mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> scheme_parameters(const ParametricCurve& c, Scheme scheme,
                                      int n) {
  const double t0 = c.t_min(), t1 = c.t_max();
  std::vector<double> ts(static_cast<size_t>(n));
  ts.front() = t0;
  ts.back() = t1;

  switch (scheme) {
    case Scheme::UniformParametric: {
      for (int i = 1; i < n - 1; ++i)
        ts[static_cast<size_t>(i)] =
            t0 + (t1 - t0) * static_cast<double>(i) / (n - 1);
      break;
    }
    case Scheme::Cosine: {
      for (int i = 1; i < n - 1; ++i) {
        const double s = static_cast<double>(i) / (n - 1);
        ts[static_cast<size_t>(i)] =
            t0 + (t1 - t0) * (1.0 - std::cos(M_PI * s)) / 2.0;
      }
      break;
    }
    case Scheme::CurvatureBased: {
      auto abs_kappa = [&c](double t) { return std::abs(c.curvature(t)); };
      const CumulativeTable kt = build_table(abs_kappa, c, 1024);
      // Uniform floor keeps zero-curvature stretches populated.
      const double eps = 0.05 * kt.total() / (t1 - t0);
      auto density = [&](double t) { return abs_kappa(t) + eps; };
      const double total = kt.total() + eps * (t1 - t0);
      // cumulative of the floored density = kappa table + linear term
      CumulativeTable dt = kt;
      for (size_t j = 0; j < dt.edges.size(); ++j)
        dt.cum[j] += eps * (dt.edges[j] - t0);
      for (int i = 1; i < n - 1; ++i)
        ts[static_cast<size_t>(i)] =
            invert_table(dt, density, total * static_cast<double>(i) / (n - 1));
      break;
    }
    case Scheme::UniformPoint: {
      auto speed = [&c](double t) { return c.speed(t); };
      const CumulativeTable st = build_table(speed, c, 1024);
      const double total = st.total();
      for (int i = 1; i < n - 1; ++i)
        ts[static_cast<size_t>(i)] =
            invert_table(st, speed, total * static_cast<double>(i) / (n - 1));
      break;
    }
  }

  for (size_t i = 1; i < ts.size(); ++i)
    if (!(ts[i] > ts[i - 1])) {
      std::ostringstream os;
      os << "discretization produced a non-increasing parameter at index " << i;
      throw_error(ErrorCode::Numeric, os.str());
    }
  return ts;
}

}  // namespace

PolylineFoil discretize(const ParametricCurve& c, Scheme scheme, int n,
                        const std::string& name) {
  if (n < 4)
    throw_error(ErrorCode::Domain, "discretization needs at least 4 points");
  const std::vector<double> ts = scheme_parameters(c, scheme, n);

  PolylineFoil pf;
  pf.points.reserve(static_cast<size_t>(n));
  for (double t : ts) pf.points.push_back(c.eval(t));
  pf.name = name;
  pf.provenance = Provenance::Parametric;
  pf.scheme = scheme;
  pf.has_scheme = true;
  pf.closed = dist(pf.points.front(), pf.points.back()) < 1e-6;
  return pf;
}

namespace {

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 <= 0.0) return dist(p, a);
  const double s = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return dist(p, a + s * ab);
}

double directed_hausdorff(const std::vector<Point2>& from,
                          const std::vector<Point2>& to) {
  double worst = 0.0;
  for (const Point2& p : from) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < to.size(); ++i)
      best = std::min(best, point_segment_distance(p, to[i], to[i + 1]));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

ResampleResult resample_polyline(const PolylineFoil& pf, Scheme scheme, int n) {
  std::vector<Point2> cleaned;
  cleaned.reserve(pf.points.size());
  for (const Point2& p : pf.points)
    if (cleaned.empty() || dist(p, cleaned.back()) > 1e-12)
      cleaned.push_back(p);
  if (cleaned.size() < 4)
    throw_error(ErrorCode::InvalidArgument,
                "resampling needs at least 4 distinct points (" + pf.name + ")");

  const CubicSplineCurve spline(cleaned);
  ResampleResult out;
  out.foil = discretize(spline, scheme, n, pf.name);
  out.foil.provenance = pf.provenance;
  out.hausdorff = std::max(directed_hausdorff(cleaned, out.foil.points),
                           directed_hausdorff(out.foil.points, cleaned));
  return out;
}

}  // namespace foilspace
