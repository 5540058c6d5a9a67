#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "foilspace/kle.hpp"
#include "foilspace/perf.hpp"
#include "foilspace/types.hpp"

namespace foilspace {

struct ValidityReport {
  bool is_valid = false;
  int self_intersections = 0;    // crossing non-adjacent segment pairs
  int undulations_upper = 0;     // curvature sign changes on the upper surface
  int undulations_lower = 0;
  std::vector<std::string> reasons;
};

/// Allowed curvature sign changes per surface before a profile counts as
/// undulating (a fair foil may legitimately carry an aft reflex).
inline constexpr int kUndulationAllowance = 2;

/// Validity per the audit definition: no self-intersections (every
/// non-adjacent segment pair tested, with a bounding-box prefilter) and at
/// most kUndulationAllowance curvature sign changes on each surface, where
/// discrete curvature comes from three-point circumcircles and sign changes
/// below a noise floor are ignored.
ValidityReport check_validity(const PolylineFoil& pf);

/// Crossing count among non-adjacent outline segments. Open trailing edges
/// are bridged so the outline is treated as a cycle; touching endpoints of
/// non-adjacent segments count as intersections.
int count_self_intersections(const std::vector<Point2>& pts, bool closed);

/// Gaussian similarity kernel L(i,j) = k(x_i,x_j) * (q_i q_j)^gamma0 with
/// k = exp(-|x_i - x_j|^2 / (2 bandwidth^2)). gamma0 = 0 (or no q) gives the
/// pure geometry kernel with unit diagonal.
Eigen::MatrixXd similarity_kernel(const std::vector<Eigen::VectorXd>& xs,
                                  double bandwidth,
                                  const std::vector<double>* q = nullptr,
                                  double gamma0 = 0.0);

struct DiversityScore {
  std::vector<double> per_subset;   // log det(L_B)/|B|; -inf marks a singular subset
  double mean = 0.0;                // over finite subset scores
  double min = 0.0, max = 0.0;      // over all subset scores
  double kernel_bandwidth = 0.0;    // mean of the per-subset bandwidths
  std::vector<double> per_subset_bandwidth;
  double gamma0 = 0.0;
  std::vector<std::string> warnings;
};

/// Median pairwise Euclidean distance, the base of the default bandwidth.
double median_pairwise_distance(const std::vector<Eigen::VectorXd>& xs);

/// log det of a similarity matrix via Cholesky, falling back to the
/// eigenvalue sum when Cholesky refuses the matrix. Any eigenvalue at or
/// below n * 1e-14 * lambda_max marks the kernel singular (duplicate or
/// near-duplicate designs) and the result is -infinity.
double logdet_similarity(const Eigen::MatrixXd& L);

/// Shuffles the designs (seeded), splits them into subset_count subsets, and
/// scores each as log det(L_B)/|B| with gamma0 = 0; higher means more diverse
/// and 0 is the ceiling. bandwidth <= 0 selects the median heuristic per
/// subset (median pairwise distance / sqrt(2)). Singular kernels score as a
/// -inf sentinel with a warning and are excluded from the mean.
DiversityScore diversity_score(const std::vector<Eigen::VectorXd>& designs,
                               int subset_count, double bandwidth,
                               uint64_t seed);

struct PerfStats {
  double mean = 0.0;
  double q1 = 0.0, median = 0.0, q3 = 0.0;
  int evaluated = 0;   // designs handed to the evaluator
  int converged = 0;   // evaluations contributing to the statistics
  int failed = 0;      // non-converged or erroring evaluations, excluded
};

/// C_L/C_D statistics over the designs; quartiles by linear interpolation on
/// the sorted converged values.
PerfStats performance_stats(const std::vector<PolylineFoil>& designs,
                            const PerfEvaluator& eval);

struct KdeResult {
  std::vector<double> grid;     // 512 points spanning data range +- 3 bandwidths
  std::vector<double> density;  // normalized to unit trapezoid mass on the grid
  double bandwidth = 0.0;
  std::vector<std::string> warnings;
};

/// Gaussian kernel density estimate. bandwidth <= 0 selects Silverman's rule.
/// The discrete density is renormalized to integrate to exactly 1 on its grid.
KdeResult kde(const std::vector<double>& values, double bandwidth = 0.0);

struct AuditProtocol {
  int count = 10000;
  int subsets = 10;
  FlowCondition condition;
  uint64_t seed = 0;
};

/// Per-sample audit record; performance fields are meaningful only when
/// evaluated is true.
struct DesignRecord {
  std::string name;
  bool is_valid = false;
  int self_intersections = 0;
  int undulations_upper = 0;
  int undulations_lower = 0;
  bool evaluated = false;
  bool converged = false;
  double cl = 0.0, cd = 0.0, ld = 0.0;
};

struct QualityReport {
  double invalid_fraction = 0.0;  // in [0, 1]; multiply by 100 for percent
  DiversityScore diversity;
  PerfStats performance;
  KdeResult kde;
  AuditProtocol protocol;
  std::vector<DesignRecord> designs;  // one per sampled design, sample order
  double alpha = 0.0, beta = 0.0;
  std::string scheme;
  std::string variant;
  std::string evaluator;
  std::vector<std::string> errors;  // metrics that failed wholesale
};

/// Full audit: sample the latent box, check validity, then score diversity
/// (decoded geometry blocks only, so scores are comparable across SSV
/// variants), performance, and the performance KDE on the valid subset.
/// Metric-level failures are recorded in `errors` instead of aborting.
QualityReport audit_space(const LatentSpace& ls, const LatentBounds& lb,
                          const AuditProtocol& proto, const PerfEvaluator& eval,
                          const std::string& evaluator_name = "surrogate");

/// Report persistence for plotting and comparison.
std::string report_to_json(const QualityReport& r);
void write_report_json(const QualityReport& r, const std::string& path);
void write_kde_csv(const QualityReport& r, const std::string& path);
void write_designs_csv(const QualityReport& r, const std::string& path);

}  // namespace foilspace
