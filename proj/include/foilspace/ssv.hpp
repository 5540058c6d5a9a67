#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "foilspace/moments.hpp"
#include "foilspace/perf.hpp"
#include "foilspace/types.hpp"

namespace foilspace {

/// The seven shape-signature-vector variants: plain geometry, geometry plus
/// one of five invariant-moment sets, or geometry plus the performance value.
enum class AugKind { None, R2, R3, R4, R23, R234, Performance };

const char* aug_kind_name(AugKind k) noexcept;
AugKind aug_kind_from_name(const std::string& name);
const std::vector<AugKind>& all_aug_kinds();

/// Moment spec backing a moment-augmented kind; error for None/Performance.
MomentSpec aug_moment_spec(AugKind k);

/// Augmentation block length: 0, 3, 4, 5, 7, 12, or 1.
int aug_block_length(AugKind k) noexcept;

struct SsvLayout {
  int n_points = 0;     // N; geometry block holds 2N scalars x1,y1,...,xN,yN
  AugKind aug = AugKind::None;
  int aug_length = 0;
  double weight = 1.0;  // multiplier already applied to the augmentation block

  int total_length() const { return 2 * n_points + aug_length; }
  bool compatible(const SsvLayout& o) const {
    return n_points == o.n_points && aug == o.aug && aug_length == o.aug_length;
  }
  bool operator==(const SsvLayout& o) const = default;
};

struct Ssv {
  std::vector<double> values;  // geometry block then weighted augmentation
  SsvLayout layout;
};

/// Assembles one SSV: the polyline's coordinates bit-exactly, followed by the
/// augmentation computed from that same polyline, scaled by `weight`.
/// Performance augmentation needs an evaluator; a non-converged evaluation is
/// an error here (assemble_design_matrix can instead drop the member).
Ssv build_ssv(const PolylineFoil& pf, AugKind aug, double weight,
              const PerfEvaluator* perf = nullptr);

/// Rebuilds the polyline held in an SSV-length vector's geometry block.
PolylineFoil extract_geometry(const std::vector<double>& values,
                              const SsvLayout& layout,
                              const std::string& name = "decoded");

struct DesignMatrix {
  Eigen::MatrixXd rows;  // m x total_length
  SsvLayout layout;
  std::vector<std::string> labels;
  std::vector<DatasetWarning> warnings;

  int count() const { return static_cast<int>(rows.rows()); }
};

/// One SSV row per dataset member, in dataset order. weight > 0 is applied
/// verbatim; weight <= 0 selects the variance-equalizing default
/// w = sqrt(2N/n_mu) * (sigma_geo / sigma_aug), where each sigma is the RMS
/// per-column standard deviation of its block over the dataset (so both
/// blocks contribute equal total variance to the covariance). When fail_fast
/// is false, members whose augmentation fails are dropped with a warning.
DesignMatrix assemble_design_matrix(const FoilDataset& ds, AugKind aug,
                                    double weight,
                                    const PerfEvaluator* perf = nullptr,
                                    bool fail_fast = true);

/// Design-matrix persistence: CSV (label then values, 17 significant digits)
/// plus a JSON sidecar describing the layout.
void write_design_matrix(const DesignMatrix& dm, const std::string& csv_path,
                         const std::string& sidecar_path);
DesignMatrix read_design_matrix(const std::string& csv_path,
                                const std::string& sidecar_path);

}  // namespace foilspace
