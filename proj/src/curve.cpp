#include "foilspace/curve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "foilspace/error.hpp"

namespace foilspace {

namespace {

constexpr double kGL7X[7] = {
    -0.94910791234275849, -0.74153118559939446, -0.40584515137739718, 0.0,
    0.40584515137739718,  0.74153118559939446,  0.94910791234275849};
constexpr double kGL7W[7] = {
    0.12948496616887065, 0.27970539148927659, 0.38183005050511831,
    0.41795918367346896, 0.38183005050511831, 0.27970539148927659,
    0.12948496616887065};

constexpr double kGL15X[15] = {
    -0.98799251802048538, -0.93727339240070595, -0.84820658341042721,
    -0.72441773136017007, -0.57097217260853883, -0.39415134707756339,
    -0.20119409399743451, 0.0,                  0.20119409399743451,
    0.39415134707756339,  0.57097217260853883,  0.72441773136017007,
    0.84820658341042721,  0.93727339240070595,  0.98799251802048538};
constexpr double kGL15W[15] = {
    0.030753241996118647, 0.070366047488108069, 0.10715922046717177,
    0.13957067792615391,  0.16626920581699378,  0.18616100001556188,
    0.19843148532711125,  0.2025782419255609,   0.19843148532711125,
    0.18616100001556188,  0.16626920581699378,  0.13957067792615391,
    0.10715922046717177,  0.070366047488108069, 0.030753241996118647};

double gauss7(const ParametricCurve& c, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 7; ++i) s += kGL7W[i] * c.speed(mid + half * kGL7X[i]);
  return s * half;
}

double gauss15(const ParametricCurve& c, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 15; ++i) s += kGL15W[i] * c.speed(mid + half * kGL15X[i]);
  return s * half;
}

double adaptive_length(const ParametricCurve& c, double a, double b,
                       double tol, int depth) {
  const double coarse = gauss7(c, a, b);
  const double fine = gauss15(c, a, b);
  if (std::abs(fine - coarse) <= tol || depth >= 48) return fine;
  const double mid = 0.5 * (a + b);
  return adaptive_length(c, a, mid, 0.5 * tol, depth + 1) +
         adaptive_length(c, mid, b, 0.5 * tol, depth + 1);
}

}  // namespace

double ParametricCurve::curvature(double t) const {
  const Point2 d1 = derivative(t);
  const Point2 d2 = second_derivative(t);
  const double v2 = d1.x * d1.x + d1.y * d1.y;
  if (v2 < 1e-24) {
    std::ostringstream os;
    os << "curvature singular: vanishing speed at t=" << t;
    throw_error(ErrorCode::Numeric, os.str());
  }
  return cross(d1, d2) / (v2 * std::sqrt(v2));
}

double ParametricCurve::arc_length(double t0, double t1, double abs_tol) const {
  const double lo = t_min(), hi = t_max();
  if (t0 < lo || t1 > hi || t0 > t1) {
    std::ostringstream os;
    os << "arc_length interval [" << t0 << ", " << t1 << "] invalid for domain ["
       << lo << ", " << hi << "]";
    throw_error(ErrorCode::Domain, os.str());
  }
  if (t0 == t1) return 0.0;

  // Split at smoothness breakpoints, then refine adaptively inside each span.
  std::vector<double> cuts{t0};
  for (double k : breakpoints())
    if (k > t0 && k < t1 && k > cuts.back()) cuts.push_back(k);
  cuts.push_back(t1);

  const double span_tol = 0.25 * abs_tol / static_cast<double>(cuts.size() - 1);
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    total += adaptive_length(*this, cuts[i], cuts[i + 1], span_tol, 0);
  return total;
}

// ---------------------------------------------------------------------------
// NurbsCurve
// ---------------------------------------------------------------------------

NurbsCurve::NurbsCurve(int degree, std::vector<Point2> control_points,
                       std::vector<double> weights, std::vector<double> knots)
    : degree_(degree),
      ctrl_(std::move(control_points)),
      weights_(std::move(weights)),
      knots_(std::move(knots)) {
  if (degree_ < 1 || degree_ > 8)
    throw_error(ErrorCode::InvalidArgument, "curve degree must be in 1..8");
  const size_t n = ctrl_.size();
  if (n < static_cast<size_t>(degree_ + 1))
    throw_error(ErrorCode::InvalidArgument,
                "need at least degree+1 control points");
  if (weights_.size() != n)
    throw_error(ErrorCode::InvalidArgument,
                "weight count does not match control point count");
  for (double w : weights_)
    if (!(w > 0.0))
      throw_error(ErrorCode::InvalidArgument, "all weights must be positive");
  if (knots_.size() != n + static_cast<size_t>(degree_) + 1)
    throw_error(ErrorCode::InvalidArgument,
                "knot vector length must equal control count + order");
  for (size_t i = 1; i < knots_.size(); ++i)
    if (knots_[i] < knots_[i - 1])
      throw_error(ErrorCode::InvalidArgument, "knot vector must be nondecreasing");
  if (!(t_min() < t_max()))
    throw_error(ErrorCode::InvalidArgument, "empty parametric domain");
}

namespace {

int find_span(double t, int degree, int nctrl, const std::vector<double>& knots) {
  const int n = nctrl - 1;
  if (t >= knots[static_cast<size_t>(n + 1)]) return n;
  if (t <= knots[static_cast<size_t>(degree)]) return degree;
  int lo = degree, hi = n + 1;
  int mid = (lo + hi) / 2;
  while (t < knots[static_cast<size_t>(mid)] ||
         t >= knots[static_cast<size_t>(mid + 1)]) {
    if (t < knots[static_cast<size_t>(mid)])
      hi = mid;
    else
      lo = mid;
    mid = (lo + hi) / 2;
  }
  return mid;
}

constexpr int kMaxDegree = 8;
using BasisRow = std::array<double, kMaxDegree + 1>;

// Nonzero basis functions and their derivatives at t (Cox-de Boor recursion
// with the standard triangular-table derivative scheme).
// ders[k][j] = d^k/dt^k N_{span-degree+j}(t), k = 0..order, j = 0..degree.
void basis_derivatives(double t, int span, int degree, int order,
                       const std::vector<double>& knots,
                       std::array<BasisRow, 3>& ders) {
  const int p = degree;
  BasisRow left{}, right{};
  // tab[r][j]: value of the r-th nonzero basis function at degree j.
  // lower[j][r]: knot-difference denominators reused by the derivative pass.
  std::array<BasisRow, kMaxDegree + 1> tab{}, lower{};
  tab[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = t - knots[static_cast<size_t>(span + 1 - j)];
    right[j] = knots[static_cast<size_t>(span + j)] - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      lower[j][r] = right[r + 1] + left[j - r];
      const double temp = tab[r][j - 1] / lower[j][r];
      tab[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    tab[j][j] = saved;
  }

  for (auto& row : ders) row.fill(0.0);
  for (int j = 0; j <= p; ++j) ders[0][j] = tab[j][p];

  std::array<BasisRow, 2> a{};
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a[0].fill(0.0);
    a[1].fill(0.0);
    a[0][0] = 1.0;
    for (int k = 1; k <= order; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a[s2][0] = a[s1][0] / lower[pk + 1][rk];
        d = a[s2][0] * tab[rk][pk];
      }
      const int j1 = (rk >= -1) ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = (a[s1][j] - a[s1][j - 1]) / lower[pk + 1][rk + j];
        d += a[s2][j] * tab[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][k] = -a[s1][k - 1] / lower[pk + 1][r];
        d += a[s2][k] * tab[r][pk];
      }
      ders[static_cast<size_t>(k)][r] = d;
      std::swap(s1, s2);
    }
  }
  double factor = static_cast<double>(p);
  for (int k = 1; k <= order; ++k) {
    for (int j = 0; j <= p; ++j) ders[static_cast<size_t>(k)][j] *= factor;
    factor *= static_cast<double>(p - k);
  }
}

}  // namespace

struct NurbsCurve::Frame {
  Point2 c{}, d1{}, d2{};
};

NurbsCurve::Frame NurbsCurve::frame(double t, int order) const {
  if (t < t_min() || t > t_max()) {
    std::ostringstream os;
    os << "parameter t=" << t << " outside domain [" << t_min() << ", "
       << t_max() << "]";
    throw_error(ErrorCode::Domain, os.str());
  }
  const int span = find_span(t, degree_, control_count(), knots_);
  std::array<BasisRow, 3> ders;
  basis_derivatives(t, span, degree_, order, knots_, ders);

  // Homogeneous sums A^(k), W^(k)
  Point2 A[3] = {};
  double W[3] = {};
  for (int k = 0; k <= order; ++k) {
    for (int j = 0; j <= degree_; ++j) {
      const size_t idx = static_cast<size_t>(span - degree_ + j);
      const double nw = ders[static_cast<size_t>(k)][static_cast<size_t>(j)] * weights_[idx];
      A[k] = A[k] + nw * ctrl_[idx];
      W[k] += nw;
    }
  }

  Frame f;
  f.c = (1.0 / W[0]) * A[0];
  if (order >= 1) f.d1 = (1.0 / W[0]) * (A[1] - W[1] * f.c);
  if (order >= 2)
    f.d2 = (1.0 / W[0]) * (A[2] - 2.0 * W[1] * f.d1 - W[2] * f.c);
  return f;
}

Point2 NurbsCurve::eval(double t) const { return frame(t, 0).c; }
Point2 NurbsCurve::derivative(double t) const { return frame(t, 1).d1; }
Point2 NurbsCurve::second_derivative(double t) const { return frame(t, 2).d2; }

std::vector<double> NurbsCurve::breakpoints() const {
  std::vector<double> out;
  const double lo = t_min(), hi = t_max();
  for (double k : knots_) {
    if (k < lo || k > hi) continue;
    if (out.empty() || k > out.back()) out.push_back(k);
  }
  return out;
}

NurbsCurve NurbsCurve::transformed(Point2 shift, double scale) const {
  std::vector<Point2> moved(ctrl_.size());
  for (size_t i = 0; i < ctrl_.size(); ++i)
    moved[i] = scale * (ctrl_[i] - shift);
  return NurbsCurve(degree_, std::move(moved), weights_, knots_);
}

// ---------------------------------------------------------------------------
// CubicSplineCurve
// ---------------------------------------------------------------------------

CubicSplineCurve::CubicSplineCurve(const std::vector<Point2>& through)
    : pts_(through) {
  const size_t n = pts_.size();
  if (n < 2)
    throw_error(ErrorCode::InvalidArgument,
                "interpolating spline needs at least 2 points");
  params_.resize(n);
  params_[0] = 0.0;
  for (size_t i = 1; i < n; ++i) {
    const double d = dist(pts_[i], pts_[i - 1]);
    if (d <= 0.0)
      throw_error(ErrorCode::InvalidArgument,
                  "interpolating spline needs distinct consecutive points");
    params_[i] = params_[i - 1] + d;
  }
  const double total = params_.back();
  for (double& s : params_) s /= total;
  params_.back() = 1.0;

  // Natural cubic spline second derivatives via the Thomas algorithm,
  // solved componentwise for x and y.
  m_.assign(n, Point2{});
  if (n == 2) return;
  const size_t k = n - 2;
  std::vector<double> diag(k), upper(k), rx(k), ry(k);
  for (size_t i = 0; i < k; ++i) {
    const double h0 = params_[i + 1] - params_[i];
    const double h1 = params_[i + 2] - params_[i + 1];
    diag[i] = 2.0 * (h0 + h1);
    upper[i] = h1;
    const Point2 r = 6.0 * ((1.0 / h1) * (pts_[i + 2] - pts_[i + 1]) -
                            (1.0 / h0) * (pts_[i + 1] - pts_[i]));
    rx[i] = r.x;
    ry[i] = r.y;
  }
  for (size_t i = 1; i < k; ++i) {
    const double h = params_[i + 1] - params_[i];  // sub-diagonal entry
    const double w = h / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rx[i] -= w * rx[i - 1];
    ry[i] -= w * ry[i - 1];
  }
  m_[k].x = rx[k - 1] / diag[k - 1];
  m_[k].y = ry[k - 1] / diag[k - 1];
  for (size_t i = k - 1; i >= 1; --i) {
    m_[i].x = (rx[i - 1] - upper[i - 1] * m_[i + 1].x) / diag[i - 1];
    m_[i].y = (ry[i - 1] - upper[i - 1] * m_[i + 1].y) / diag[i - 1];
  }
}

int CubicSplineCurve::span(double t) const {
  if (t < 0.0 || t > 1.0) {
    std::ostringstream os;
    os << "parameter t=" << t << " outside domain [0, 1]";
    throw_error(ErrorCode::Domain, os.str());
  }
  const auto it = std::upper_bound(params_.begin(), params_.end(), t);
  int i = static_cast<int>(it - params_.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(params_.size()) - 2);
}

Point2 CubicSplineCurve::eval(double t) const {
  const int i = span(t);
  const double h = params_[static_cast<size_t>(i + 1)] - params_[static_cast<size_t>(i)];
  const double a = (params_[static_cast<size_t>(i + 1)] - t) / h;
  const double b = (t - params_[static_cast<size_t>(i)]) / h;
  return a * pts_[static_cast<size_t>(i)] + b * pts_[static_cast<size_t>(i + 1)] +
         (h * h / 6.0) * ((a * a * a - a) * m_[static_cast<size_t>(i)] +
                          (b * b * b - b) * m_[static_cast<size_t>(i + 1)]);
}

Point2 CubicSplineCurve::derivative(double t) const {
  const int i = span(t);
  const double h = params_[static_cast<size_t>(i + 1)] - params_[static_cast<size_t>(i)];
  const double a = (params_[static_cast<size_t>(i + 1)] - t) / h;
  const double b = (t - params_[static_cast<size_t>(i)]) / h;
  return (1.0 / h) * (pts_[static_cast<size_t>(i + 1)] - pts_[static_cast<size_t>(i)]) +
         (h / 6.0) * ((1.0 - 3.0 * a * a) * m_[static_cast<size_t>(i)] +
                      (3.0 * b * b - 1.0) * m_[static_cast<size_t>(i + 1)]);
}

Point2 CubicSplineCurve::second_derivative(double t) const {
  const int i = span(t);
  const double h = params_[static_cast<size_t>(i + 1)] - params_[static_cast<size_t>(i)];
  const double a = (params_[static_cast<size_t>(i + 1)] - t) / h;
  const double b = (t - params_[static_cast<size_t>(i)]) / h;
  return a * m_[static_cast<size_t>(i)] + b * m_[static_cast<size_t>(i + 1)];
}

void validate_foil_curve(const NurbsCurve& c) {
  if (c.control_count() != kFoilControlPoints)
    throw_error(ErrorCode::InvalidArgument, "foil curve must have 13 control points");
  if (c.degree() + 1 != kFoilOrder)
    throw_error(ErrorCode::InvalidArgument, "foil curve must have order 4");
  if (c.knots().size() != kFoilControlPoints + kFoilOrder)
    throw_error(ErrorCode::InvalidArgument, "foil knot vector must have 17 entries");
  const Point2 a = c.eval(c.t_min());
  const Point2 b = c.eval(c.t_max());
  if (dist(a, b) >= kFoilClosureTol)
    throw_error(ErrorCode::InvalidArgument,
                "foil curve is not closed at the trailing edge");
}

}  // namespace foilspace
