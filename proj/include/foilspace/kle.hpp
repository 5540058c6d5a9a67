#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "foilspace/ssv.hpp"
#include "foilspace/types.hpp"

namespace foilspace {

struct LatentSpace {
  Eigen::VectorXd mean;         // length n_p
  Eigen::MatrixXd basis;        // n_p x kappa, orthonormal columns
  Eigen::VectorXd eigenvalues;  // kappa entries, nonincreasing, >= 0
  double total_variance = 0.0;  // sum of ALL eigenvalues, truncated tail included
  SsvLayout layout;
  double beta = 0.95;           // retained-variance fraction used for truncation
  double alpha = 2.0;           // default bounds multiplier recorded with the space

  int kappa() const { return static_cast<int>(basis.cols()); }
  double retained_variance() const { return eigenvalues.sum(); }
};

/// Centers the design matrix and takes the thin singular value decomposition;
/// eigenvalues are lambda_i = s_i^2/(m-1), the sample-covariance spectrum.
/// kappa is the smallest count retaining beta of the total variance. Each
/// basis column is sign-fixed so its largest-magnitude component is positive.
LatentSpace fit_kle(const DesignMatrix& dm, double beta);

/// u_i = phi_i^T (v - mean). The vector length must match the layout.
Eigen::VectorXd encode(const LatentSpace& ls, const std::vector<double>& v);

/// v = mean + sum u_i phi_i, as a full SSV-length vector.
std::vector<double> decode_vector(const LatentSpace& ls,
                                  const Eigen::VectorXd& u);

/// decode_vector plus extraction of the geometry block into a polyline.
PolylineFoil decode_foil(const LatentSpace& ls, const Eigen::VectorXd& u,
                         const std::string& name = "decoded");

struct LatentBounds {
  Eigen::VectorXd low, high;  // low = -high, high_i = alpha*sqrt(lambda_i)
  double alpha = 0.0;
};

LatentBounds latent_bounds(const LatentSpace& ls, double alpha);

struct LatentSample {
  Eigen::VectorXd u;
  PolylineFoil foil;
};

/// Component-wise uniform draws inside the bounds, decoded to geometry.
/// Deterministic for a given seed.
std::vector<LatentSample> sample_latent(const LatentSpace& ls,
                                        const LatentBounds& lb, int count,
                                        uint64_t seed);

/// Persistence: `<base>.json` header (layout, kappa, beta, alpha, eigenvalues,
/// total variance) plus `<base>.mean.csv` and `<base>.basis.csv` at 17
/// significant digits. `path` may be the base or the .json file.
void save_latent_space(const LatentSpace& ls, const std::string& path);
LatentSpace load_latent_space(const std::string& path);

}  // namespace foilspace
