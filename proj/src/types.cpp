#include "foilspace/types.hpp"

#include <cmath>
#include <sstream>

#include "foilspace/error.hpp"

namespace foilspace {

ParamVector::ParamVector(const std::array<double, kSize>& p) : p_(p) {
  for (int i = 0; i < kSize; ++i) {
    const double v = p_[static_cast<size_t>(i)];
    if (!(v >= 0.0 && v <= 1.0)) {
      std::ostringstream os;
      os << "design parameter " << i << " = " << v << " outside [0,1]";
      throw_error(ErrorCode::Domain, os.str());
    }
  }
}

ParamVector ParamVector::from(std::span<const double> values) {
  if (values.size() != static_cast<size_t>(kSize)) {
    std::ostringstream os;
    os << "design vector needs " << kSize << " components, got " << values.size();
    throw_error(ErrorCode::InvalidArgument, os.str());
  }
  std::array<double, kSize> p;
  for (int i = 0; i < kSize; ++i) p[static_cast<size_t>(i)] = values[static_cast<size_t>(i)];
  return ParamVector(p);
}

const char* scheme_name(Scheme s) noexcept {
  switch (s) {
    case Scheme::UniformParametric: return "uniform-parametric";
    case Scheme::Cosine: return "cosine";
    case Scheme::CurvatureBased: return "curvature-based";
    case Scheme::UniformPoint: return "uniform-point";
  }
  return "unknown";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "uniform-parametric") return Scheme::UniformParametric;
  if (name == "cosine") return Scheme::Cosine;
  if (name == "curvature-based") return Scheme::CurvatureBased;
  if (name == "uniform-point") return Scheme::UniformPoint;
  throw_error(ErrorCode::InvalidArgument, "unknown discretization scheme: " + name);
}

const char* provenance_name(Provenance p) noexcept {
  switch (p) {
    case Provenance::File: return "file";
    case Provenance::Parametric: return "parametric";
    case Provenance::ExternalSynthesized: return "external-synthesized";
    case Provenance::Decoded: return "decoded";
  }
  return "unknown";
}

Provenance provenance_from_name(const std::string& name) {
  if (name == "file") return Provenance::File;
  if (name == "parametric") return Provenance::Parametric;
  if (name == "external-synthesized") return Provenance::ExternalSynthesized;
  if (name == "decoded") return Provenance::Decoded;
  throw_error(ErrorCode::InvalidArgument, "unknown provenance: " + name);
}

void validate_polyline(PolylineFoil& pf) {
  const auto& pts = pf.points;
  if (pts.size() < 4)
    throw_error(ErrorCode::InvalidArgument,
                "polyline needs at least 4 points (" + pf.name + ")");
  for (const Point2& p : pts)
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw_error(ErrorCode::Domain, "non-finite coordinate (" + pf.name + ")");
  for (size_t i = 1; i < pts.size(); ++i)
    if (dist(pts[i], pts[i - 1]) <= 1e-12) {
      std::ostringstream os;
      os << "duplicate consecutive points at index " << i << " (" << pf.name << ")";
      throw_error(ErrorCode::Domain, os.str());
    }
  for (const Point2& p : pts)
    if (p.x < -0.05 || p.x > 1.05) {
      std::ostringstream os;
      os << "x=" << p.x << " outside the normalized chord band [-0.05, 1.05] ("
         << pf.name << ")";
      throw_error(ErrorCode::Domain, os.str());
    }
  const bool closed = dist(pts.front(), pts.back()) < 1e-6;
  if (!closed) {
    // Open trailing edge: both endpoints must sit at the aft end of the chord.
    if (pts.front().x < 0.95 || pts.back().x < 0.95) {
      std::ostringstream os;
      os << "endpoints neither coincide nor form a trailing-edge gap ("
         << pf.name << ")";
      throw_error(ErrorCode::Domain, os.str());
    }
  }
  pf.closed = closed;
}

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Io: return "io";
    case ErrorCode::Numeric: return "numeric";
    case ErrorCode::External: return "external";
    case ErrorCode::Timeout: return "timeout";
  }
  return "unknown";
}

}  // namespace foilspace
