#include "foilspace/quality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "json.hpp"

#include "foilspace/error.hpp"
#include "foilspace/rng.hpp"

namespace foilspace {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cross2(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const Point2& p, const Point2& q, const Point2& r) {
  return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) &&
         std::min(p.y, r.y) <= q.y && q.y <= std::max(p.y, r.y);
}

// Proper or improper intersection of closed segments [p1,p2] and [p3,p4].
bool segments_intersect(const Point2& p1, const Point2& p2, const Point2& p3,
                        const Point2& p4) {
  const double d1 = cross2(p3, p4, p1);
  const double d2 = cross2(p3, p4, p2);
  const double d3 = cross2(p1, p2, p3);
  const double d4 = cross2(p1, p2, p4);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(p3, p1, p4)) return true;
  if (d2 == 0 && on_segment(p3, p2, p4)) return true;
  if (d3 == 0 && on_segment(p1, p3, p2)) return true;
  if (d4 == 0 && on_segment(p1, p4, p2)) return true;
  return false;
}

struct Seg {
  Point2 a, b;
  double xmin, xmax, ymin, ymax;
};

// Signed curvature of the circumcircle through three consecutive points.
// Zero-length legs give zero (treated as locally straight).
double three_point_curvature(const Point2& a, const Point2& b,
                             const Point2& c) {
  const double la = dist(a, b);
  const double lb = dist(b, c);
  const double lc = dist(a, c);
  const double denom = la * lb * lc;
  if (denom < 1e-30) return 0.0;
  return 2.0 * cross2(a, b, c) / denom;
}

int count_sign_changes(const std::vector<double>& kappa) {
  double floor = 0.0;
  for (double k : kappa) floor = std::max(floor, std::fabs(k));
  floor = std::max(0.05, 1e-3 * floor);
  int changes = 0;
  int prev = 0;
  for (double k : kappa) {
    if (std::fabs(k) <= floor) continue;
    const int s = k > 0.0 ? 1 : -1;
    if (prev != 0 && s != prev) ++changes;
    prev = s;
  }
  return changes;
}

}  // namespace

int count_self_intersections(const std::vector<Point2>& pts, bool closed) {
  const size_t n = pts.size();
  if (n < 3) return 0;
  // Edge list for the shape outline. Open trailing edges are bridged so the
  // outline is always a cycle.
  std::vector<Seg> segs;
  segs.reserve(n);
  auto push = [&segs](const Point2& a, const Point2& b) {
    if (dist(a, b) < 1e-15) return;
    Seg s{a, b, std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y),
          std::max(a.y, b.y)};
    segs.push_back(s);
  };
  for (size_t i = 0; i + 1 < n; ++i) push(pts[i], pts[i + 1]);
  if (!closed) push(pts[n - 1], pts[0]);

  const size_t m = segs.size();
  int hits = 0;
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;  // adjacent around the cycle
      const Seg& s = segs[i];
      const Seg& t = segs[j];
      if (s.xmax < t.xmin || t.xmax < s.xmin || s.ymax < t.ymin ||
          t.ymax < s.ymin)
        continue;
      if (segments_intersect(s.a, s.b, t.a, t.b)) ++hits;
    }
  }
  return hits;
}

ValidityReport check_validity(const PolylineFoil& pf) {
  ValidityReport rep;
  const auto& pts = pf.points;
  const size_t n = pts.size();
  if (n < 4) {
    rep.is_valid = false;
    rep.reasons.push_back("fewer than 4 points");
    return rep;
  }

  rep.self_intersections = count_self_intersections(pts, pf.closed);
  if (rep.self_intersections > 0) {
    std::ostringstream os;
    os << rep.self_intersections << " self-intersection(s)";
    rep.reasons.push_back(os.str());
  }

  // Split at the leading edge (minimum x) into two surfaces.
  size_t i_le = 0;
  for (size_t i = 1; i < n; ++i)
    if (pts[i].x < pts[i_le].x) i_le = i;
  if (i_le < 2 || i_le > n - 3) {
    rep.is_valid = false;
    rep.reasons.push_back("degenerate surface split at the leading edge");
    return rep;
  }

  auto surface_changes = [&pts](size_t lo, size_t hi) {
    std::vector<double> kappa;
    kappa.reserve(hi - lo);
    for (size_t i = lo + 1; i < hi; ++i)
      kappa.push_back(three_point_curvature(pts[i - 1], pts[i], pts[i + 1]));
    return count_sign_changes(kappa);
  };
  rep.undulations_upper = surface_changes(0, i_le);
  rep.undulations_lower = surface_changes(i_le, n - 1);
  if (rep.undulations_upper > kUndulationAllowance) {
    std::ostringstream os;
    os << "first surface undulates (" << rep.undulations_upper
       << " curvature sign changes)";
    rep.reasons.push_back(os.str());
  }
  if (rep.undulations_lower > kUndulationAllowance) {
    std::ostringstream os;
    os << "second surface undulates (" << rep.undulations_lower
       << " curvature sign changes)";
    rep.reasons.push_back(os.str());
  }

  rep.is_valid = rep.self_intersections == 0 &&
                 rep.undulations_upper <= kUndulationAllowance &&
                 rep.undulations_lower <= kUndulationAllowance;
  return rep;
}

Eigen::MatrixXd similarity_kernel(const std::vector<Eigen::VectorXd>& xs,
                                  double bandwidth,
                                  const std::vector<double>* q,
                                  double gamma0) {
  const size_t n = xs.size();
  if (n == 0) throw_error(ErrorCode::InvalidArgument, "empty point set");
  if (!(bandwidth > 0.0))
    throw_error(ErrorCode::InvalidArgument, "bandwidth must be positive");
  if (q != nullptr && q->size() != n)
    throw_error(ErrorCode::InvalidArgument,
                "quality weights must match the point count");
  const double inv2h2 = 1.0 / (2.0 * bandwidth * bandwidth);
  Eigen::MatrixXd L(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n; ++j) {
      const double d2 = (xs[i] - xs[j]).squaredNorm();
      double k = std::exp(-d2 * inv2h2);
      if (q != nullptr && gamma0 != 0.0)
        k *= std::pow((*q)[i] * (*q)[j], gamma0);
      L(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k;
      L(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = k;
    }
  }
  return L;
}

double median_pairwise_distance(const std::vector<Eigen::VectorXd>& xs) {
  const size_t n = xs.size();
  if (n < 2)
    throw_error(ErrorCode::InvalidArgument,
                "need at least 2 points for the median heuristic");
  std::vector<double> d;
  d.reserve(n * (n - 1) / 2);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      d.push_back((xs[i] - xs[j]).norm());
  const size_t mid = d.size() / 2;
  std::nth_element(d.begin(), d.begin() + static_cast<ptrdiff_t>(mid), d.end());
  double med = d[mid];
  if (d.size() % 2 == 0) {
    const double lo =
        *std::max_element(d.begin(), d.begin() + static_cast<ptrdiff_t>(mid));
    med = 0.5 * (lo + med);
  }
  return med;
}

double logdet_similarity(const Eigen::MatrixXd& L) {
  Eigen::LLT<Eigen::MatrixXd> llt(L);
  if (llt.info() == Eigen::Success) {
    const auto& Lf = llt.matrixLLT();
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < Lf.rows(); ++i) {
      const double d = Lf(i, i);
      if (!(d > 0.0)) return -kInf;
      logdet += 2.0 * std::log(d);
    }
    if (std::isfinite(logdet)) return logdet;
  }
  // Cholesky refused the matrix. Duplicated designs make the kernel exactly
  // singular and must read as -inf; a merely ill-conditioned kernel should
  // still get its (hugely negative) log-determinant. The spectrum separates
  // the two cases where a diagonal jitter cannot.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  if (es.info() != Eigen::Success) return -kInf;
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double tol =
      ev[ev.size() - 1] * static_cast<double>(ev.size()) * 1e-14;
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] <= tol) return -kInf;
    logdet += std::log(ev[i]);
  }
  return std::isfinite(logdet) ? logdet : -kInf;
}

DiversityScore diversity_score(const std::vector<Eigen::VectorXd>& designs,
                               int subset_count, double bandwidth,
                               uint64_t seed) {
  if (subset_count < 1)
    throw_error(ErrorCode::InvalidArgument, "subset count must be >= 1");
  const size_t n = designs.size();
  if (n < 2)
    throw_error(ErrorCode::InvalidArgument,
                "need at least 2 designs to score diversity");
  const size_t subset_size =
      std::max<size_t>(2, n / static_cast<size_t>(subset_count));

  DiversityScore out;
  out.gamma0 = 0.0;
  out.per_subset.reserve(static_cast<size_t>(subset_count));
  out.per_subset_bandwidth.reserve(static_cast<size_t>(subset_count));

  Rng rng(seed, "subsets");
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});

  for (int s = 0; s < subset_count; ++s) {
    // Fisher-Yates over the index pool; each pass draws a fresh subset.
    for (size_t i = n - 1; i > 0; --i) {
      const size_t j = static_cast<size_t>(rng.below(i + 1));
      std::swap(order[i], order[j]);
    }
    std::vector<Eigen::VectorXd> sub;
    sub.reserve(subset_size);
    for (size_t i = 0; i < subset_size && i < n; ++i)
      sub.push_back(designs[order[i]]);

    double h = bandwidth;
    if (!(h > 0.0)) {
      const double med = median_pairwise_distance(sub);
      h = med / std::sqrt(2.0);
      if (!(h > 0.0)) {
        out.per_subset.push_back(-kInf);
        out.per_subset_bandwidth.push_back(0.0);
        std::ostringstream os;
        os << "subset " << s << ": all points coincide, score is -inf";
        out.warnings.push_back(os.str());
        continue;
      }
    }
    out.per_subset_bandwidth.push_back(h);

    const Eigen::MatrixXd L = similarity_kernel(sub, h, nullptr, 0.0);
    const double score = logdet_similarity(L) / static_cast<double>(sub.size());
    out.per_subset.push_back(score);
    if (!std::isfinite(score)) {
      std::ostringstream os;
      os << "subset " << s << ": near-duplicate designs, score is -inf";
      out.warnings.push_back(os.str());
    }
  }

  double sum = 0.0;
  size_t finite = 0;
  out.min = kInf;
  out.max = -kInf;
  for (double v : out.per_subset) {
    out.min = std::min(out.min, v);
    out.max = std::max(out.max, v);
    if (std::isfinite(v)) {
      sum += v;
      ++finite;
    }
  }
  out.mean = finite > 0 ? sum / static_cast<double>(finite) : -kInf;

  double hsum = 0.0;
  size_t hcount = 0;
  for (double h : out.per_subset_bandwidth)
    if (h > 0.0) {
      hsum += h;
      ++hcount;
    }
  out.kernel_bandwidth = hcount > 0 ? hsum / static_cast<double>(hcount) : 0.0;
  return out;
}

namespace {

// Linear-interpolation quantile on a sorted sample (the convention most
// stats packages default to).
double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (sorted.size() == 1) return sorted[0];
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(std::floor(pos));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

PerfStats performance_stats(const std::vector<PolylineFoil>& designs,
                            const PerfEvaluator& eval) {
  if (!eval)
    throw_error(ErrorCode::InvalidArgument, "no performance evaluator");
  PerfStats st;
  std::vector<double> ld;
  ld.reserve(designs.size());
  for (const auto& d : designs) {
    ++st.evaluated;
    try {
      const PolarPoint pp = eval(d);
      if (pp.converged && std::isfinite(pp.ld)) {
        ld.push_back(pp.ld);
        ++st.converged;
      } else {
        ++st.failed;
      }
    } catch (const Error&) {
      ++st.failed;
    }
  }
  if (ld.empty()) {
    st.mean = st.q1 = st.median = st.q3 =
        std::numeric_limits<double>::quiet_NaN();
    return st;
  }
  std::sort(ld.begin(), ld.end());
  st.mean = std::accumulate(ld.begin(), ld.end(), 0.0) /
            static_cast<double>(ld.size());
  st.q1 = quantile_sorted(ld, 0.25);
  st.median = quantile_sorted(ld, 0.50);
  st.q3 = quantile_sorted(ld, 0.75);
  return st;
}

KdeResult kde(const std::vector<double>& values, double bandwidth) {
  if (values.empty())
    throw_error(ErrorCode::InvalidArgument, "empty sample for the density");
  KdeResult out;
  const size_t n = values.size();

  double h = bandwidth;
  if (!(h > 0.0)) {
    // Silverman's rule with the robust spread estimate.
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    const double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) /
                        static_cast<double>(n);
    double var = 0.0;
    for (double v : sorted) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n > 1 ? n - 1 : 1);
    const double sd = std::sqrt(var);
    const double iqr =
        quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
    double spread = sd;
    if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
    h = 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
    if (!(h > 0.0)) {
      h = std::max(1e-9, std::fabs(sorted[0]) * 1e-9 + 1e-12);
      out.warnings.push_back("sample has no spread, density is a narrow spike");
    }
  }
  out.bandwidth = h;

  const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *mn_it - 3.0 * h;
  const double hi = *mx_it + 3.0 * h;
  constexpr int kGrid = 512;
  out.grid.resize(kGrid);
  out.density.assign(kGrid, 0.0);
  const double step = (hi - lo) / (kGrid - 1);
  for (int g = 0; g < kGrid; ++g)
    out.grid[static_cast<size_t>(g)] = lo + step * g;

  const double norm =
      1.0 / (static_cast<double>(n) * h * std::sqrt(2.0 * M_PI));
  for (int g = 0; g < kGrid; ++g) {
    const double x = out.grid[static_cast<size_t>(g)];
    double acc = 0.0;
    for (double v : values) {
      const double z = (x - v) / h;
      acc += std::exp(-0.5 * z * z);
    }
    out.density[static_cast<size_t>(g)] = acc * norm;
  }

  // The finite grid clips the tails; rescale so the trapezoid integral of the
  // reported curve is exactly one.
  double mass = 0.0;
  for (int g = 1; g < kGrid; ++g)
    mass += 0.5 *
            (out.density[static_cast<size_t>(g)] +
             out.density[static_cast<size_t>(g - 1)]) *
            step;
  if (mass > 0.0)
    for (double& d : out.density) d /= mass;
  return out;
}

QualityReport audit_space(const LatentSpace& ls, const LatentBounds& lb,
                          const AuditProtocol& proto, const PerfEvaluator& eval,
                          const std::string& evaluator_name) {
  if (proto.count < 2)
    throw_error(ErrorCode::InvalidArgument, "audit needs at least 2 samples");
  if (proto.subsets < 1)
    throw_error(ErrorCode::InvalidArgument, "audit needs at least 1 subset");

  QualityReport rep;
  rep.protocol = proto;
  rep.alpha = lb.alpha;
  rep.beta = ls.beta;
  rep.variant = aug_kind_name(ls.layout.aug);
  rep.evaluator = evaluator_name;

  const std::vector<LatentSample> samples =
      sample_latent(ls, lb, proto.count, proto.seed);

  rep.designs.reserve(samples.size());
  std::vector<size_t> valid_idx;
  valid_idx.reserve(samples.size());
  std::vector<Eigen::VectorXd> valid_u;
  valid_u.reserve(samples.size());
  size_t invalid = 0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const ValidityReport v = check_validity(samples[i].foil);
    DesignRecord dr;
    dr.name = samples[i].foil.name;
    dr.is_valid = v.is_valid;
    dr.self_intersections = v.self_intersections;
    dr.undulations_upper = v.undulations_upper;
    dr.undulations_lower = v.undulations_lower;
    rep.designs.push_back(std::move(dr));
    if (v.is_valid) {
      valid_idx.push_back(i);
      valid_u.push_back(samples[i].u);
    } else {
      ++invalid;
    }
  }
  rep.invalid_fraction =
      static_cast<double>(invalid) / static_cast<double>(samples.size());

  if (valid_u.size() >= 2) {
    try {
      rep.diversity = diversity_score(valid_u, proto.subsets, 0.0, proto.seed);
    } catch (const Error& e) {
      rep.errors.push_back(std::string("diversity: ") + e.what());
    }
  } else {
    rep.errors.push_back("diversity: fewer than 2 valid designs");
  }

  if (eval && !valid_idx.empty()) {
    std::vector<double> converged_ld;
    for (size_t i : valid_idx) {
      DesignRecord& dr = rep.designs[i];
      dr.evaluated = true;
      ++rep.performance.evaluated;
      try {
        const PolarPoint pp = eval(samples[i].foil);
        dr.converged = pp.converged && std::isfinite(pp.ld);
        dr.cl = pp.cl;
        dr.cd = pp.cd;
        dr.ld = pp.ld;
        if (dr.converged) {
          converged_ld.push_back(pp.ld);
          ++rep.performance.converged;
        } else {
          ++rep.performance.failed;
        }
      } catch (const Error&) {
        ++rep.performance.failed;
      }
    }
    if (!converged_ld.empty()) {
      std::vector<double> sorted(converged_ld);
      std::sort(sorted.begin(), sorted.end());
      rep.performance.mean =
          std::accumulate(sorted.begin(), sorted.end(), 0.0) /
          static_cast<double>(sorted.size());
      rep.performance.q1 = quantile_sorted(sorted, 0.25);
      rep.performance.median = quantile_sorted(sorted, 0.50);
      rep.performance.q3 = quantile_sorted(sorted, 0.75);
      try {
        rep.kde = kde(converged_ld, 0.0);
      } catch (const Error& e) {
        rep.errors.push_back(std::string("density: ") + e.what());
      }
    } else {
      rep.performance.mean = rep.performance.q1 = rep.performance.median =
          rep.performance.q3 = std::numeric_limits<double>::quiet_NaN();
      rep.errors.push_back("performance: no converged evaluations");
    }
  } else if (!eval) {
    rep.errors.push_back("performance: no evaluator configured");
  }

  return rep;
}

namespace {

nlohmann::json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::string report_to_json(const QualityReport& rep) {
  nlohmann::json j;
  j["invalid_fraction"] = rep.invalid_fraction;
  j["alpha"] = rep.alpha;
  j["beta"] = rep.beta;
  j["scheme"] = rep.scheme;
  j["variant"] = rep.variant;
  j["evaluator"] = rep.evaluator;
  j["protocol"] = {{"count", rep.protocol.count},
                   {"subsets", rep.protocol.subsets},
                   {"seed", rep.protocol.seed},
                   {"reynolds", rep.protocol.condition.reynolds},
                   {"mach", rep.protocol.condition.mach},
                   {"alpha_deg", rep.protocol.condition.alpha_deg}};
  nlohmann::json div;
  div["mean"] = finite_or_string(rep.diversity.mean);
  div["min"] = finite_or_string(rep.diversity.min);
  div["max"] = finite_or_string(rep.diversity.max);
  div["kernel_bandwidth"] = rep.diversity.kernel_bandwidth;
  div["gamma0"] = rep.diversity.gamma0;
  nlohmann::json per = nlohmann::json::array();
  for (double v : rep.diversity.per_subset) per.push_back(finite_or_string(v));
  div["per_subset"] = per;
  div["warnings"] = rep.diversity.warnings;
  j["diversity"] = div;
  nlohmann::json perf;
  perf["mean"] = finite_or_string(rep.performance.mean);
  perf["q1"] = finite_or_string(rep.performance.q1);
  perf["median"] = finite_or_string(rep.performance.median);
  perf["q3"] = finite_or_string(rep.performance.q3);
  perf["evaluated"] = rep.performance.evaluated;
  perf["converged"] = rep.performance.converged;
  perf["failed"] = rep.performance.failed;
  j["performance"] = perf;
  j["kde_bandwidth"] = rep.kde.bandwidth;
  j["kde_warnings"] = rep.kde.warnings;
  j["errors"] = rep.errors;
  return j.dump(2);
}

void write_report_json(const QualityReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw_error(ErrorCode::Io, "cannot write " + path);
  out << report_to_json(rep) << '\n';
  out.close();
  if (!out) throw_error(ErrorCode::Io, "failed writing " + path);
}

void write_designs_csv(const QualityReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw_error(ErrorCode::Io, "cannot write " + path);
  out << "name,is_valid,self_intersections,undulations_upper,"
         "undulations_lower,evaluated,converged,cl,cd,ld\n";
  char buf[160];
  for (const auto& d : rep.designs) {
    out << d.name;
    std::snprintf(buf, sizeof buf, ",%d,%d,%d,%d,%d,%d", d.is_valid ? 1 : 0,
                  d.self_intersections, d.undulations_upper,
                  d.undulations_lower, d.evaluated ? 1 : 0,
                  d.converged ? 1 : 0);
    out << buf;
    if (d.converged) {
      std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g\n", d.cl, d.cd, d.ld);
      out << buf;
    } else {
      out << ",,,\n";
    }
  }
  out.close();
  if (!out) throw_error(ErrorCode::Io, "failed writing " + path);
}

void write_kde_csv(const QualityReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw_error(ErrorCode::Io, "cannot write " + path);
  out << "value,density\n";
  char buf[80];
  for (size_t i = 0; i < rep.kde.grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", rep.kde.grid[i],
                  rep.kde.density[i]);
    out << buf;
  }
  out.close();
  if (!out) throw_error(ErrorCode::Io, "failed writing " + path);
}

}  // namespace foilspace
