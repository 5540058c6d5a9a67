#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace foilspace {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
  friend Point2 operator*(Point2 p, double s) { return {s * p.x, s * p.y}; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }

/// Nondimensionalized foil design vector; every component lives in [0,1].
class ParamVector {
 public:
  static constexpr int kSize = 17;

  ParamVector() { p_.fill(0.5); }
  explicit ParamVector(const std::array<double, kSize>& p);

  /// Validating constructor from a runtime-sized buffer; rejects wrong arity
  /// and components outside [0,1].
  static ParamVector from(std::span<const double> values);

  double operator[](int i) const { return p_[static_cast<size_t>(i)]; }
  const std::array<double, kSize>& values() const { return p_; }

 private:
  std::array<double, kSize> p_;
};

enum class Scheme {
  UniformParametric,
  Cosine,
  CurvatureBased,
  UniformPoint,
};

const char* scheme_name(Scheme s) noexcept;
Scheme scheme_from_name(const std::string& name);

enum class Provenance {
  File,
  Parametric,
  ExternalSynthesized,
  Decoded,
};

const char* provenance_name(Provenance p) noexcept;
Provenance provenance_from_name(const std::string& name);

/// Discretized foil profile. Points run trailing edge -> upper surface ->
/// leading edge -> lower surface -> trailing edge (Selig ordering).
struct PolylineFoil {
  std::vector<Point2> points;
  std::string name;
  Provenance provenance = Provenance::File;
  Scheme scheme = Scheme::Cosine;
  bool has_scheme = false;  // re-sampled/generated polylines carry a scheme tag
  bool closed = true;       // first/last coincide within 1e-6

  int size() const { return static_cast<int>(points.size()); }
};

/// Validates the PolylineFoil structural invariants (point count, spacing,
/// x-range) and records the closed/open trailing-edge flag. Throws on violation.
void validate_polyline(PolylineFoil& pf);

struct DatasetWarning {
  std::string member;
  std::string message;
};

struct FoilDataset {
  std::vector<PolylineFoil> members;
  int common_n = 0;
  Scheme scheme = Scheme::Cosine;
  std::string source_label;  // "D1", "D2", or "custom"
  std::vector<DatasetWarning> warnings;

  int size() const { return static_cast<int>(members.size()); }
};

}  // namespace foilspace
