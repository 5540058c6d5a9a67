#include "foilspace/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>

#include "foilspace/error.hpp"

namespace foilspace {

namespace {

constexpr int kMaxOrder = 8;

double binom(int n, int k) {
  static const auto table = [] {
    std::array<std::array<double, kMaxOrder + 2>, kMaxOrder + 2> c{};
    for (int i = 0; i <= kMaxOrder + 1; ++i) {
      c[static_cast<size_t>(i)][0] = 1.0;
      for (int j = 1; j <= i; ++j)
        c[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            c[static_cast<size_t>(i - 1)][static_cast<size_t>(j - 1)] +
            (j <= i - 1 ? c[static_cast<size_t>(i - 1)][static_cast<size_t>(j)]
                        : 0.0);
    }
    return c;
  }();
  return table[static_cast<size_t>(n)][static_cast<size_t>(k)];
}

void check_order(int p, int q) {
  if (p < 0 || q < 0)
    throw_error(ErrorCode::InvalidArgument, "moment exponents must be >= 0");
  if (p + q > kMaxOrder)
    throw_error(ErrorCode::InvalidArgument, "moment order limited to 8");
}

/// ∫_0^1 (a + b s)^m (c + d s)^n ds, expanded binomially. m, n small.
double edge_poly_integral(double a, double b, int m, double c, double d,
                          int n) {
  double pa[kMaxOrder + 2], pb[kMaxOrder + 2], pc[kMaxOrder + 2],
      pd[kMaxOrder + 2];
  pa[0] = pb[0] = pc[0] = pd[0] = 1.0;
  for (int i = 1; i <= m; ++i) {
    pa[i] = pa[i - 1] * a;
    pb[i] = pb[i - 1] * b;
  }
  for (int j = 1; j <= n; ++j) {
    pc[j] = pc[j - 1] * c;
    pd[j] = pd[j - 1] * d;
  }
  double acc = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double fi = binom(m, i) * pa[m - i] * pb[i];
    for (int j = 0; j <= n; ++j)
      acc += fi * binom(n, j) * pc[n - j] * pd[j] / (i + j + 1);
  }
  return acc;
}

/// Vertex cycle of the closed polygon bounded by the polyline. The duplicate
/// closing vertex, when present, is dropped.
std::vector<Point2> polygon_cycle(const PolylineFoil& poly) {
  std::vector<Point2> v = poly.points;
  if (v.size() < 3)
    throw_error(ErrorCode::InvalidArgument, "polygon needs at least 3 vertices");
  if (dist(v.front(), v.back()) > 1e-6) {
    std::ostringstream os;
    os << "polygon is not closed: endpoint gap " << dist(v.front(), v.back())
       << " exceeds 1e-6 (" << poly.name << ")";
    throw_error(ErrorCode::Domain, os.str());
  }
  v.pop_back();
  if (v.size() < 3)
    throw_error(ErrorCode::InvalidArgument, "polygon needs at least 3 vertices");
  return v;
}

double signed_area(const std::vector<Point2>& v) {
  double a = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const Point2& p = v[i];
    const Point2& q = v[(i + 1) % v.size()];
    a += cross(p, q);
  }
  return 0.5 * a;
}

/// Green's theorem: ∬ x^p y^q dA = (1/(p+1)) ∮ x^{p+1} y^q dy, evaluated
/// edge by edge in closed form. `orient` flips the boundary integral so the
/// result corresponds to positive area.
double cycle_moment(const std::vector<Point2>& v, int p, int q, double orient) {
  double acc = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const Point2& a = v[i];
    const Point2& b = v[(i + 1) % v.size()];
    const double dy = b.y - a.y;
    if (dy == 0.0) continue;
    acc += dy * edge_poly_integral(a.x, b.x - a.x, p + 1, a.y, dy, q);
  }
  return orient * acc / (p + 1);
}

struct PolygonFrame {
  std::vector<Point2> cycle;   // vertices translated to the centroid frame
  double area = 0.0;           // positive
  double orient = 1.0;
};

PolygonFrame centered_polygon(const PolylineFoil& poly) {
  PolygonFrame f;
  f.cycle = polygon_cycle(poly);
  // Move to a local frame near the region before any boundary integral runs.
  // On far-from-origin coordinates the per-edge terms scale like |offset|^2
  // while the results scale like the feature size, so the centroid (and the
  // area used for normalization) would come back with only ~1e-6 of relative
  // accuracy. Vertex-mean subtraction is cancellation-free, and any rounding
  // in the mean itself is a constant shift that the exact area-centroid
  // subtraction below absorbs.
  Point2 ref{0.0, 0.0};
  for (const Point2& p : f.cycle) ref = ref + p;
  ref = (1.0 / static_cast<double>(f.cycle.size())) * ref;
  for (Point2& p : f.cycle) p = p - ref;
  const double a = signed_area(f.cycle);
  if (std::abs(a) < 1e-12)
    throw_error(ErrorCode::Numeric,
                "degenerate region: polygon area below 1e-12 (" + poly.name +
                    ")");
  f.orient = a < 0.0 ? -1.0 : 1.0;
  f.area = std::abs(a);
  const double cx = cycle_moment(f.cycle, 1, 0, f.orient) / f.area;
  const double cy = cycle_moment(f.cycle, 0, 1, f.orient) / f.area;
  for (Point2& p : f.cycle) p = p - Point2{cx, cy};
  return f;
}

}  // namespace

MomentSpec MomentSpec::of_orders(std::vector<int> orders) {
  if (orders.empty())
    throw_error(ErrorCode::InvalidArgument, "moment spec needs at least one order");
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
  for (int r : orders)
    if (r < 2 || r > kMaxOrder)
      throw_error(ErrorCode::InvalidArgument,
                  "moment orders must lie in 2..8 (orders 0 and 1 are the "
                  "constants 1, 0, 0 after normalization)");
  return MomentSpec{std::move(orders)};
}

std::vector<std::pair<int, int>> MomentSpec::index_pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int r : orders)
    for (int p = r; p >= 0; --p) out.emplace_back(p, r - p);
  return out;
}

int MomentSpec::count() const {
  int n = 0;
  for (int r : orders) n += r + 1;
  return n;
}

double raw_moment(const PolylineFoil& poly, int p, int q) {
  check_order(p, q);
  const std::vector<Point2> v = polygon_cycle(poly);
  const double a = signed_area(v);
  if (std::abs(a) < 1e-12)
    throw_error(ErrorCode::Numeric,
                "degenerate region: polygon area below 1e-12 (" + poly.name +
                    ")");
  return cycle_moment(v, p, q, a < 0.0 ? -1.0 : 1.0);
}

double central_moment(const PolylineFoil& poly, int p, int q) {
  check_order(p, q);
  const PolygonFrame f = centered_polygon(poly);
  if (p == 0 && q == 0) return f.area;
  return cycle_moment(f.cycle, p, q, f.orient);
}

double invariant_moment(const PolylineFoil& poly, int p, int q) {
  check_order(p, q);
  if (p == 0 && q == 0)
    throw_error(ErrorCode::InvalidArgument,
                "(0,0) is excluded from invariant moments (identically 1)");
  const PolygonFrame f = centered_polygon(poly);
  const double central = cycle_moment(f.cycle, p, q, f.orient);
  return central / std::pow(f.area, static_cast<double>(p + q + 2) / 2.0);
}

std::vector<double> moment_vector(const PolylineFoil& poly,
                                  const MomentSpec& spec) {
  const PolygonFrame f = centered_polygon(poly);
  std::vector<double> out;
  const auto pairs = spec.index_pairs();
  out.reserve(pairs.size());
  for (const auto& [p, q] : pairs) {
    check_order(p, q);
    const double central = cycle_moment(f.cycle, p, q, f.orient);
    out.push_back(central /
                  std::pow(f.area, static_cast<double>(p + q + 2) / 2.0));
  }
  return out;
}

}  // namespace foilspace
