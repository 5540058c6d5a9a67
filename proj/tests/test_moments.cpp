#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "doctest.h"
#include "foilspace/error.hpp"
#include "foilspace/moments.hpp"
#include "foilspace/rng.hpp"
#include "foilspace/types.hpp"

using namespace foilspace;

namespace {

PolylineFoil closed_poly(std::vector<Point2> pts, const std::string& name) {
  PolylineFoil pf;
  pf.points = std::move(pts);
  pf.name = name;
  return pf;
}

// Axis-aligned rectangle [x0,x1] x [y0,y1], counterclockwise, closed.
PolylineFoil rectangle(double x0, double x1, double y0, double y1) {
  return closed_poly({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}, {x0, y0}},
                     "rect");
}

// Regular n-gon approximating the circle of radius r about (cx, cy).
PolylineFoil ngon(double cx, double cy, double r, int n) {
  std::vector<Point2> pts;
  pts.reserve(static_cast<size_t>(n) + 1);
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    pts.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
  }
  pts.push_back(pts.front());
  return closed_poly(std::move(pts), "ngon");
}

// Star-shaped polygon about (cx, cy): radius varies per vertex but stays
// positive, so the result is always simple.
PolylineFoil random_star(Rng& rng, double cx, double cy, int n) {
  std::vector<Point2> pts;
  pts.reserve(static_cast<size_t>(n) + 1);
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * i / n;
    const double r = rng.uniform(0.5, 1.0);
    pts.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
  }
  pts.push_back(pts.front());
  return closed_poly(std::move(pts), "star");
}

PolylineFoil transformed(const PolylineFoil& in, double dx, double dy,
                         double scale, double angle) {
  PolylineFoil out = in;
  const double ca = std::cos(angle), sa = std::sin(angle);
  for (Point2& p : out.points) {
    const double x = scale * (ca * p.x - sa * p.y) + dx;
    const double y = scale * (sa * p.x + ca * p.y) + dy;
    p = {x, y};
  }
  return out;
}

// Monte Carlo estimate of the raw moment by rejection sampling in the
// bounding box with even-odd point-in-polygon tests. Independent of the
// Green's-theorem path.
double mc_raw_moment(const PolylineFoil& poly, int p, int q, int samples,
                     Rng& rng) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const Point2& v : poly.points) {
    x0 = std::min(x0, v.x);
    x1 = std::max(x1, v.x);
    y0 = std::min(y0, v.y);
    y1 = std::max(y1, v.y);
  }
  auto inside = [&](double x, double y) {
    bool in = false;
    const size_t n = poly.points.size();
    for (size_t i = 0, j = n - 1; i < n; j = i++) {
      const Point2& a = poly.points[i];
      const Point2& b = poly.points[j];
      if ((a.y > y) != (b.y > y) &&
          x < (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x)
        in = !in;
    }
    return in;
  };
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double x = rng.uniform(x0, x1);
    const double y = rng.uniform(y0, y1);
    if (inside(x, y)) acc += std::pow(x, p) * std::pow(y, q);
  }
  const double box = (x1 - x0) * (y1 - y0);
  return box * acc / samples;
}

}  // namespace

TEST_CASE("raw moments of the unit square match closed forms") {
  // integral over [0,1]^2 of x^p y^q is 1 / ((p+1)(q+1))
  const PolylineFoil sq = rectangle(0.0, 1.0, 0.0, 1.0);
  for (int p = 0; p <= 4; ++p)
    for (int q = 0; p + q <= 4; ++q) {
      const double want = 1.0 / ((p + 1.0) * (q + 1.0));
      CHECK(raw_moment(sq, p, q) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("raw moments ignore vertex orientation") {
  PolylineFoil cw = rectangle(0.0, 2.0, -1.0, 1.0);
  std::reverse(cw.points.begin(), cw.points.end());
  const PolylineFoil ccw = rectangle(0.0, 2.0, -1.0, 1.0);
  for (int p = 0; p <= 3; ++p)
    for (int q = 0; q <= 3; ++q)
      CHECK(raw_moment(cw, p, q) ==
            doctest::Approx(raw_moment(ccw, p, q)).epsilon(1e-12));
}

TEST_CASE("central moments of an offset rectangle match closed forms") {
  // Rectangle w x h centered anywhere: central moments depend on w, h only.
  // integral of (x-cx)^p over width w is w^{p+1}/(2^p (p+1)) for even p,
  // zero for odd p.
  const double w = 3.0, h = 0.5;
  const PolylineFoil r = rectangle(10.0, 10.0 + w, -7.0, -7.0 + h);
  auto one_d = [](double len, int p) {
    if (p % 2 == 1) return 0.0;
    return std::pow(len, p + 1) / (std::pow(2.0, p) * (p + 1.0));
  };
  for (int p = 0; p <= 4; ++p)
    for (int q = 0; p + q <= 4; ++q) {
      const double want = one_d(w, p) * one_d(h, q);
      if (want == 0.0) {
        CHECK(std::fabs(central_moment(r, p, q)) < 1e-10);
      } else {
        CHECK(central_moment(r, p, q) == doctest::Approx(want).epsilon(1e-12));
      }
    }
}

TEST_CASE("polygonal disk reproduces the circle's normalized moment") {
  // For the unit disk, mu_{2,0} = (pi/4) / pi^2 = 1/(4 pi). A fine regular
  // polygon converges to it from below.
  const PolylineFoil d = ngon(0.0, 0.0, 1.0, 4096);
  CHECK(invariant_moment(d, 2, 0) ==
        doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-5));
  CHECK(invariant_moment(d, 0, 2) ==
        doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-5));
  CHECK(std::fabs(invariant_moment(d, 1, 1)) < 1e-12);
}

TEST_CASE("normalized moments survive translation and scaling") {
  Rng rng(31, "mom-inv");
  for (int trial = 0; trial < 20; ++trial) {
    const PolylineFoil base = random_star(rng, 0.0, 0.0, 24);
    const double dx = rng.uniform(-1000.0, 1000.0);
    const double dy = rng.uniform(-1000.0, 1000.0);
    const double s = std::pow(10.0, rng.uniform(-2.0, 2.0));
    const PolylineFoil moved = transformed(base, dx, dy, s, 0.0);
    for (int p = 0; p <= 4; ++p)
      for (int q = 0; p + q <= 4; ++q) {
        if (p + q < 2) continue;
        const double a = invariant_moment(base, p, q);
        const double b = invariant_moment(moved, p, q);
        const double scale = std::max({std::fabs(a), std::fabs(b), 1e-12});
        CHECK(std::fabs(a - b) / scale < 1e-9);
      }
  }
}

TEST_CASE("normalized moments respond to rotation") {
  // Orientation is intentionally preserved: a 10-degree rotation must move
  // at least mu_{2,0} for an elongated shape.
  const PolylineFoil r = rectangle(0.0, 4.0, 0.0, 1.0);
  const PolylineFoil rot = transformed(r, 0.0, 0.0, 1.0, 10.0 * M_PI / 180.0);
  CHECK(std::fabs(invariant_moment(r, 2, 0) - invariant_moment(rot, 2, 0)) >
        1e-6);
}

TEST_CASE("green's theorem agrees with a monte carlo oracle") {
  Rng rng(32, "mom-mc");
  for (int trial = 0; trial < 3; ++trial) {
    const PolylineFoil poly = random_star(rng, 3.0, 3.0, 16);
    for (int p = 0; p <= 2; ++p)
      for (int q = 0; p + q <= 2; ++q) {
        const double exact = raw_moment(poly, p, q);
        const double est = mc_raw_moment(poly, p, q, 400000, rng);
        CHECK(est == doctest::Approx(exact).epsilon(0.02));
      }
  }
}

TEST_CASE("moment spec enumerates pairs in canonical order") {
  const MomentSpec spec = MomentSpec::of_orders({2, 3});
  const std::vector<std::pair<int, int>> want = {
      {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}};
  CHECK(spec.index_pairs() == want);
  CHECK(spec.count() == 7);
  CHECK(MomentSpec::of_orders({2, 3, 4}).count() == 12);
  CHECK(MomentSpec::of_orders({4, 2, 3, 2}).count() == 12);  // sorted, deduped
}

TEST_CASE("moment vector matches elementwise invariant moments") {
  Rng rng(33, "mom-vec");
  const PolylineFoil poly = random_star(rng, 0.0, 0.0, 20);
  const MomentSpec spec = MomentSpec::of_orders({2, 3, 4});
  const std::vector<double> v = moment_vector(poly, spec);
  const auto pairs = spec.index_pairs();
  REQUIRE(v.size() == pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i)
    CHECK(v[i] == doctest::Approx(invariant_moment(
                      poly, pairs[i].first, pairs[i].second))
                      .epsilon(1e-14));
}

TEST_CASE("open polylines are rejected") {
  const PolylineFoil open =
      closed_poly({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}}, "open");
  CHECK_THROWS_AS((void)raw_moment(open, 0, 0), Error);
}

TEST_CASE("moment spec rejects orders below two") {
  CHECK_THROWS_AS((void)MomentSpec::of_orders({1, 2}), Error);
  CHECK_THROWS_AS((void)MomentSpec::of_orders({0}), Error);
}
