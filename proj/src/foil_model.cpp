#include <cmath>
#include <vector>

#include "foilspace/curve.hpp"
#include "foilspace/error.hpp"
#include "foilspace/types.hpp"

namespace foilspace {

namespace {

double lerp(double lo, double hi, double u) { return lo + (hi - lo) * u; }

// Unit-peak bump x^e (1-x)^g. For exponents inside (0,1) the second
// derivative is strictly negative on (0,1): every term of
//   e(e-1)(1-x)^2 - 2eg x(1-x) + g(g-1)x^2
// is negative there. Both the mean line and the half-thickness profiles use
// this form, so each surface function is a sum or difference of concave
// bumps: the upper surface is concave outright, and the lower surface can
// cross curvature zero at most once when the mean-line exponents sit above
// the fore and below the aft thickness exponents (the ratio of second
// derivatives is then monotone in x).
double beta_bump(double x, double e, double g) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double x_peak = e / (e + g);
  const double peak = std::pow(x_peak, e) * std::pow(1.0 - x_peak, g);
  return std::pow(x, e) * std::pow(1.0 - x, g) / peak;
}

// Parameter of the minimum-x point: dense scan then golden-section refinement.
double locate_leading_edge(const NurbsCurve& c) {
  const double lo = c.t_min(), hi = c.t_max();
  const int scan = 2000;
  double best_t = lo, best_x = c.eval(lo).x;
  for (int i = 1; i <= scan; ++i) {
    const double t = lo + (hi - lo) * static_cast<double>(i) / scan;
    const double x = c.eval(t).x;
    if (x < best_x) {
      best_x = x;
      best_t = t;
    }
  }
  const double step = (hi - lo) / scan;
  double a = std::max(lo, best_t - step), b = std::min(hi, best_t + step);
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = c.eval(x1).x, f2 = c.eval(x2).x;
  for (int it = 0; it < 80 && (b - a) > 1e-14; ++it) {
    if (f1 < f2) {
      b = x2, x2 = x1, f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = c.eval(x1).x;
    } else {
      a = x1, x1 = x2, f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = c.eval(x2).x;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

NurbsCurve make_foil(const ParamVector& p) {
  // Affine parameter ranges chosen so every combination yields a valid
  // (non-self-intersecting, fair) profile; see the generator tests for the
  // Monte-Carlo sweep that backs this claim. The mean-line exponents stay
  // strictly above the fore thickness exponents and strictly below the aft
  // ones, which is what caps the lower surface at a single inflection.
  const double c_max = lerp(0.000, 0.035, p[0]);   // max camber
  const double a_m = lerp(0.70, 0.95, p[1]);       // camber fore exponent
  const double b_m = lerp(0.65, 0.80, p[2]);       // camber aft exponent
  const double t_mult = lerp(0.90, 1.10, p[3]);    // overall thickness scale
  const double t_u = t_mult * lerp(0.035, 0.080, p[4]);  // upper half-thickness
  const double e_u = lerp(0.45, 0.68, p[5]);       // upper fore exponent
  const double g_u = lerp(0.82, 0.95, p[6]);       // upper aft exponent
  const double t_l = t_mult * lerp(0.030, 0.070, p[7]);  // lower half-thickness
  const double e_l = lerp(0.45, 0.68, p[8]);       // lower fore exponent
  const double g_l = lerp(0.82, 0.95, p[9]);       // lower aft exponent
  const double d_le = lerp(0.006, 0.016, p[10]);   // leading-edge bulge depth
  const double r_u = lerp(0.55, 0.85, p[11]);      // LE upper fullness
  const double r_l = lerp(0.55, 0.85, p[12]);      // LE lower fullness
  const double droop = lerp(-0.004, 0.004, p[13]); // LE vertical offset
  const double shift_u = lerp(-0.025, 0.025, p[14]);  // upper station shift
  const double shift_l = lerp(-0.025, 0.025, p[15]);  // lower station shift
  const double w_le = lerp(0.90, 1.25, p[16]);     // LE control-point weight

  const double base[4] = {0.84, 0.58, 0.32, 0.12};
  double st_u[4], st_l[4];
  for (int i = 0; i < 4; ++i) {
    st_u[i] = base[i] + shift_u;
    st_l[i] = base[i] + shift_l;
  }

  auto mean_line = [&](double x) { return c_max * beta_bump(x, a_m, b_m); };
  auto upper_y = [&](double x) {
    return mean_line(x) + t_u * beta_bump(x, e_u, g_u);
  };
  auto lower_y = [&](double x) {
    return mean_line(x) - t_l * beta_bump(x, e_l, g_l);
  };

  // Nose cap height, measured at a fixed virtual station just off the LE.
  const double a_u = r_u * t_u * beta_bump(0.04, e_u, g_u);
  const double a_l = r_l * t_l * beta_bump(0.04, e_l, g_l);

  // 13-point control net, trailing edge -> upper -> leading edge -> lower ->
  // trailing edge. The trailing edge is sharp: first and last control points
  // are both exactly (1, 0), which closes the curve identically.
  std::vector<Point2> net(13);
  net[0] = {1.0, 0.0};
  for (int i = 0; i < 4; ++i)
    net[static_cast<size_t>(1 + i)] = {st_u[i], upper_y(st_u[i])};
  net[5] = {0.0, droop + a_u};
  net[6] = {-d_le, droop};
  net[7] = {0.0, droop - a_l};
  for (int i = 0; i < 4; ++i)
    net[static_cast<size_t>(8 + i)] = {st_l[3 - i], lower_y(st_l[3 - i])};
  net[12] = {1.0, 0.0};

  std::vector<double> weights(13, 1.0);
  weights[6] = w_le;

  std::vector<double> knots;
  knots.reserve(17);
  for (int i = 0; i < 4; ++i) knots.push_back(0.0);
  for (int i = 1; i <= 9; ++i) knots.push_back(static_cast<double>(i) / 10.0);
  for (int i = 0; i < 4; ++i) knots.push_back(1.0);

  NurbsCurve raw(kFoilOrder - 1, net, weights, knots);

  // Chord normalization: pin the leading edge to x=0. Dividing by (1 - x_le)
  // keeps the trailing-edge control points at exactly (1, 0).
  const double t_le = locate_leading_edge(raw);
  const double x_le = raw.eval(t_le).x;
  const double span = 1.0 - x_le;
  for (Point2& b : net) b = {(b.x - x_le) / span, b.y / span};
  NurbsCurve foil(kFoilOrder - 1, std::move(net), std::move(weights),
                  std::move(knots));
  validate_foil_curve(foil);
  return foil;
}

}  // namespace foilspace
