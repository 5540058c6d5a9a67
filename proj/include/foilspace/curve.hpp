#pragma once

#include <memory>
#include <vector>

#include "foilspace/types.hpp"

namespace foilspace {

/// Planar parametric curve with piecewise-smooth speed. Breakpoints partition
/// the domain into smooth spans; quadrature never straddles one.
class ParametricCurve {
 public:
  virtual ~ParametricCurve() = default;

  virtual double t_min() const = 0;
  virtual double t_max() const = 0;
  virtual Point2 eval(double t) const = 0;
  virtual Point2 derivative(double t) const = 0;
  virtual Point2 second_derivative(double t) const = 0;
  virtual std::vector<double> breakpoints() const = 0;

  double speed(double t) const { return norm(derivative(t)); }

  /// Signed planar curvature (x'y'' - y'x'') / |C'|^3.
  /// Throws Numeric when the speed vanishes at t.
  double curvature(double t) const;

  /// Arc length over [t0, t1] by adaptive Gauss-Legendre quadrature on each
  /// smooth span, to the given absolute tolerance (chord units).
  double arc_length(double t0, double t1, double abs_tol = 1e-9) const;
};

/// Rational B-spline curve of arbitrary degree. Immutable after construction.
class NurbsCurve final : public ParametricCurve {
 public:
  NurbsCurve(int degree, std::vector<Point2> control_points,
             std::vector<double> weights, std::vector<double> knots);

  int degree() const { return degree_; }
  int control_count() const { return static_cast<int>(ctrl_.size()); }
  const std::vector<Point2>& control_points() const { return ctrl_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& knots() const { return knots_; }

  double t_min() const override { return knots_[static_cast<size_t>(degree_)]; }
  double t_max() const override { return knots_[ctrl_.size()]; }
  Point2 eval(double t) const override;
  Point2 derivative(double t) const override;
  Point2 second_derivative(double t) const override;
  std::vector<double> breakpoints() const override;

  /// Affine map applied to the control net: p -> (scale*(p - shift)).
  NurbsCurve transformed(Point2 shift, double scale) const;

 private:
  struct Frame;  // curve point plus first/second derivatives
  Frame frame(double t, int order) const;

  int degree_;
  std::vector<Point2> ctrl_;
  std::vector<double> weights_;
  std::vector<double> knots_;
};

/// C2 cubic interpolating spline through ordered planar points,
/// chord-length parameterized over [0, 1]. Used when a smooth curve must be
/// recovered from an existing polyline.
class CubicSplineCurve final : public ParametricCurve {
 public:
  explicit CubicSplineCurve(const std::vector<Point2>& through);

  double t_min() const override { return 0.0; }
  double t_max() const override { return 1.0; }
  Point2 eval(double t) const override;
  Point2 derivative(double t) const override;
  Point2 second_derivative(double t) const override;
  std::vector<double> breakpoints() const override { return params_; }

 private:
  int span(double t) const;

  std::vector<double> params_;            // interpolation parameters in [0,1]
  std::vector<Point2> pts_;               // interpolated points
  std::vector<Point2> m_;                 // second derivatives at params_
};

/// Number of control points / order of the foil profile representation.
inline constexpr int kFoilControlPoints = 13;
inline constexpr int kFoilOrder = 4;
inline constexpr double kFoilClosureTol = 1e-9;

/// Checks the foil-profile contract: 13 control points, order 4, positive
/// weights, nondecreasing 17-entry knot vector, trailing-edge closure.
void validate_foil_curve(const NurbsCurve& c);

/// Deterministic 17-parameter foil generator. Every parameter vector in
/// [0,1]^17 maps to a closed, chord-normalized cubic NURBS profile with
/// leading edge at x=0 and trailing edge at x=1.
NurbsCurve make_foil(const ParamVector& p);

}  // namespace foilspace
