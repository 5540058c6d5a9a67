#include "foilspace/ssv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "foilspace/error.hpp"

namespace foilspace {

const char* aug_kind_name(AugKind k) noexcept {
  switch (k) {
    case AugKind::None: return "none";
    case AugKind::R2: return "r2";
    case AugKind::R3: return "r3";
    case AugKind::R4: return "r4";
    case AugKind::R23: return "r23";
    case AugKind::R234: return "r234";
    case AugKind::Performance: return "perf";
  }
  return "unknown";
}

AugKind aug_kind_from_name(const std::string& name) {
  for (AugKind k : all_aug_kinds())
    if (name == aug_kind_name(k)) return k;
  throw_error(ErrorCode::InvalidArgument,
              "unknown SSV variant: " + name +
                  " (expected none|r2|r3|r4|r23|r234|perf)");
}

const std::vector<AugKind>& all_aug_kinds() {
  static const std::vector<AugKind> kinds{
      AugKind::None, AugKind::R2,   AugKind::R3,         AugKind::R4,
      AugKind::R23,  AugKind::R234, AugKind::Performance};
  return kinds;
}

MomentSpec aug_moment_spec(AugKind k) {
  switch (k) {
    case AugKind::R2: return MomentSpec::of_orders({2});
    case AugKind::R3: return MomentSpec::of_orders({3});
    case AugKind::R4: return MomentSpec::of_orders({4});
    case AugKind::R23: return MomentSpec::of_orders({2, 3});
    case AugKind::R234: return MomentSpec::of_orders({2, 3, 4});
    case AugKind::None:
    case AugKind::Performance:
      break;
  }
  throw_error(ErrorCode::InvalidArgument,
              std::string(aug_kind_name(k)) + " has no moment spec");
}

int aug_block_length(AugKind k) noexcept {
  switch (k) {
    case AugKind::None: return 0;
    case AugKind::R2: return 3;
    case AugKind::R3: return 4;
    case AugKind::R4: return 5;
    case AugKind::R23: return 7;
    case AugKind::R234: return 12;
    case AugKind::Performance: return 1;
  }
  return 0;
}

namespace {

std::vector<double> raw_augmentation(const PolylineFoil& pf, AugKind aug,
                                     const PerfEvaluator* perf) {
  switch (aug) {
    case AugKind::None:
      return {};
    case AugKind::Performance: {
      if (perf == nullptr || !*perf)
        throw_error(ErrorCode::InvalidArgument,
                    "performance augmentation needs an evaluator");
      const PolarPoint pp = (*perf)(pf);
      if (!pp.converged)
        throw_error(ErrorCode::External,
                    "performance evaluation did not converge (" + pf.name + ")");
      return {pp.ld};
    }
    default:
      return moment_vector(pf, aug_moment_spec(aug));
  }
}

}  // namespace

Ssv build_ssv(const PolylineFoil& pf, AugKind aug, double weight,
              const PerfEvaluator* perf) {
  if (!(weight > 0.0))
    throw_error(ErrorCode::InvalidArgument,
                "build_ssv needs an explicit positive weight");
  Ssv v;
  v.layout = SsvLayout{pf.size(), aug, aug_block_length(aug), weight};
  v.values.reserve(static_cast<size_t>(v.layout.total_length()));
  for (const Point2& p : pf.points) {
    v.values.push_back(p.x);
    v.values.push_back(p.y);
  }
  std::vector<double> a;
  try {
    a = raw_augmentation(pf, aug, perf);
  } catch (const Error& e) {
    throw_error(e.code(), std::string(e.what()) + " [member " + pf.name + "]");
  }
  for (double x : a) v.values.push_back(weight * x);
  return v;
}

PolylineFoil extract_geometry(const std::vector<double>& values,
                              const SsvLayout& layout,
                              const std::string& name) {
  if (values.size() != static_cast<size_t>(layout.total_length()))
    throw_error(ErrorCode::InvalidArgument,
                "vector length does not match the SSV layout");
  PolylineFoil pf;
  pf.name = name;
  pf.provenance = Provenance::Decoded;
  pf.has_scheme = false;
  pf.points.reserve(static_cast<size_t>(layout.n_points));
  for (int i = 0; i < layout.n_points; ++i)
    pf.points.push_back({values[static_cast<size_t>(2 * i)],
                         values[static_cast<size_t>(2 * i + 1)]});
  pf.closed = dist(pf.points.front(), pf.points.back()) < 1e-6;
  return pf;
}

DesignMatrix assemble_design_matrix(const FoilDataset& ds, AugKind aug,
                                    double weight, const PerfEvaluator* perf,
                                    bool fail_fast) {
  if (ds.members.empty())
    throw_error(ErrorCode::InvalidArgument, "empty dataset");

  const int n = ds.common_n;
  const int n_aug = aug_block_length(aug);
  DesignMatrix dm;
  dm.layout = SsvLayout{n, aug, n_aug, 1.0};

  // First pass with unit weight so the variance-equalizing default can be
  // measured on the raw augmentation values.
  std::vector<std::vector<double>> rows;
  rows.reserve(ds.members.size());
  ErrorCode first_code = ErrorCode::Numeric;
  for (const auto& m : ds.members) {
    if (m.size() != n)
      throw_error(ErrorCode::InvalidArgument,
                  "member " + m.name + " has " + std::to_string(m.size()) +
                      " points, dataset expects " + std::to_string(n));
    try {
      rows.push_back(build_ssv(m, aug, 1.0, perf).values);
      dm.labels.push_back(m.name);
    } catch (const Error& e) {
      if (fail_fast) throw;
      if (dm.warnings.empty()) first_code = e.code();
      dm.warnings.push_back({m.name, std::string("dropped: ") + e.what()});
    }
  }
  if (rows.empty()) {
    std::string msg = "every member failed SSV assembly";
    if (!dm.warnings.empty()) msg += ": " + dm.warnings.front().message;
    throw_error(first_code, msg);
  }

  double w = weight;
  if (!(w > 0.0)) {
    if (n_aug == 0) {
      w = 1.0;
    } else {
      // sigma^2 per block: mean over the block's columns of the column
      // variance. Scaling the augmentation block by w equalizes the total
      // variance contributed by the two blocks.
      const size_t m_rows = rows.size();
      const size_t geo_len = static_cast<size_t>(2 * n);
      const size_t total_len = geo_len + static_cast<size_t>(n_aug);
      double geo_var = 0.0, aug_var = 0.0;
      double geo_msq = 0.0, aug_msq = 0.0;
      for (size_t c = 0; c < total_len; ++c) {
        double mean = 0.0, msq = 0.0;
        for (const auto& r : rows) {
          mean += r[c];
          msq += r[c] * r[c];
        }
        mean /= static_cast<double>(m_rows);
        msq /= static_cast<double>(m_rows);
        double var = 0.0;
        for (const auto& r : rows) var += (r[c] - mean) * (r[c] - mean);
        var /= static_cast<double>(m_rows > 1 ? m_rows - 1 : 1);
        if (c < geo_len) {
          geo_var += var;
          geo_msq += msq;
        } else {
          aug_var += var;
          aug_msq += msq;
        }
      }
      const double sigma_geo = std::sqrt(geo_var / static_cast<double>(geo_len));
      const double sigma_aug = std::sqrt(aug_var / static_cast<double>(n_aug));
      // A column of identical values still shows ~1e-16 of variance from the
      // mean's rounding; measure "zero" against the block's own magnitude.
      const double geo_floor =
          1e-10 * std::sqrt(geo_msq / static_cast<double>(geo_len));
      const double aug_floor =
          1e-10 * std::sqrt(aug_msq / static_cast<double>(n_aug));
      if (sigma_aug > aug_floor && sigma_geo > geo_floor) {
        w = std::sqrt(static_cast<double>(2 * n) / n_aug) *
            (sigma_geo / sigma_aug);
      } else {
        w = 1.0;
        dm.warnings.push_back(
            {"", "block weight fallback to 1: a block has zero variance"});
      }
    }
  }
  dm.layout.weight = w;

  dm.rows.resize(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(dm.layout.total_length()));
  for (size_t r = 0; r < rows.size(); ++r) {
    for (int c = 0; c < 2 * n; ++c)
      dm.rows(static_cast<Eigen::Index>(r), c) = rows[r][static_cast<size_t>(c)];
    for (int c = 0; c < n_aug; ++c)
      dm.rows(static_cast<Eigen::Index>(r), 2 * n + c) =
          w * rows[r][static_cast<size_t>(2 * n + c)];
  }
  return dm;
}

void write_design_matrix(const DesignMatrix& dm, const std::string& csv_path,
                         const std::string& sidecar_path) {
  std::ofstream out(csv_path);
  if (!out) throw_error(ErrorCode::Io, "cannot write " + csv_path);
  char num[64];
  for (Eigen::Index r = 0; r < dm.rows.rows(); ++r) {
    std::string name = dm.labels[static_cast<size_t>(r)];
    std::replace(name.begin(), name.end(), ',', ';');
    out << name;
    for (Eigen::Index c = 0; c < dm.rows.cols(); ++c) {
      std::snprintf(num, sizeof num, ",%.17g", dm.rows(r, c));
      out << num;
    }
    out << '\n';
  }
  out.close();
  if (!out) throw_error(ErrorCode::Io, "failed writing " + csv_path);

  nlohmann::json j;
  j["n_points"] = dm.layout.n_points;
  j["aug"] = aug_kind_name(dm.layout.aug);
  j["aug_length"] = dm.layout.aug_length;
  j["weight"] = dm.layout.weight;
  j["rows"] = dm.rows.rows();
  std::ofstream sout(sidecar_path);
  if (!sout) throw_error(ErrorCode::Io, "cannot write " + sidecar_path);
  sout << j.dump(2) << '\n';
}

DesignMatrix read_design_matrix(const std::string& csv_path,
                                const std::string& sidecar_path) {
  nlohmann::json j;
  {
    std::ifstream in(sidecar_path);
    if (!in) throw_error(ErrorCode::Io, "cannot open " + sidecar_path);
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw_error(ErrorCode::Parse, sidecar_path + ": " + e.what());
    }
  }
  DesignMatrix dm;
  dm.layout.n_points = j.at("n_points").get<int>();
  dm.layout.aug = aug_kind_from_name(j.at("aug").get<std::string>());
  dm.layout.aug_length = j.at("aug_length").get<int>();
  dm.layout.weight = j.at("weight").get<double>();

  std::ifstream in(csv_path);
  if (!in) throw_error(ErrorCode::Io, "cannot open " + csv_path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  const size_t want = static_cast<size_t>(dm.layout.total_length());
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::getline(ls, cell, ',');
    dm.labels.push_back(cell);
    std::vector<double> vals;
    vals.reserve(want);
    while (std::getline(ls, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        std::ostringstream os;
        os << csv_path << " line " << line_no << ": bad numeric cell";
        throw_error(ErrorCode::Parse, os.str());
      }
    }
    if (vals.size() != want) {
      std::ostringstream os;
      os << csv_path << " line " << line_no << ": expected " << want
         << " values, got " << vals.size();
      throw_error(ErrorCode::Parse, os.str());
    }
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw_error(ErrorCode::Parse, csv_path + ": empty matrix");
  dm.rows.resize(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(want));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < want; ++c)
      dm.rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c];
  return dm;
}

}  // namespace foilspace
