#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <vector>

#include "doctest.h"
#include "foilspace/curve.hpp"
#include "foilspace/discretize.hpp"
#include "foilspace/error.hpp"
#include "foilspace/ingest.hpp"
#include "foilspace/kle.hpp"
#include "foilspace/rng.hpp"
#include "foilspace/ssv.hpp"
#include "test_support.hpp"

using namespace foilspace;
using testsupport::random_params;

namespace {

DesignMatrix small_design(uint64_t seed, int bases, int n, AugKind aug) {
  Rng rng(seed, "kle-data");
  std::vector<ParamVector> bs;
  for (int i = 0; i < bases; ++i) bs.push_back(random_params(rng));
  const FoilDataset ds = build_dataset_d1(bs, Scheme::Cosine, n, seed);
  return assemble_design_matrix(ds, aug, 0.0);
}

// Sample covariance of the centered rows, computed straight from the
// definition as an oracle for the spectral identities.
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& rows) {
  const Eigen::RowVectorXd mean = rows.colwise().mean();
  const Eigen::MatrixXd c = rows.rowwise() - mean;
  return c.transpose() * c / static_cast<double>(rows.rows() - 1);
}

}  // namespace

TEST_CASE("basis columns are orthonormal") {
  const DesignMatrix dm = small_design(41, 4, 48, AugKind::R4);
  const LatentSpace ls = fit_kle(dm, 1.0);
  const Eigen::MatrixXd g =
      ls.basis.transpose() * ls.basis -
      Eigen::MatrixXd::Identity(ls.kappa(), ls.kappa());
  CHECK(g.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("eigenvalue total matches the covariance trace") {
  const DesignMatrix dm = small_design(42, 4, 40, AugKind::R23);
  const LatentSpace ls = fit_kle(dm, 1.0);
  const double trace = sample_covariance(dm.rows).trace();
  CHECK(ls.total_variance == doctest::Approx(trace).epsilon(1e-10));
  // At beta = 1 nothing is truncated.
  CHECK(ls.retained_variance() == doctest::Approx(trace).epsilon(1e-10));
  // Eigenvalues are nonincreasing and nonnegative.
  for (int i = 0; i + 1 < ls.kappa(); ++i)
    CHECK(ls.eigenvalues[i] >= ls.eigenvalues[i + 1]);
  CHECK(ls.eigenvalues[ls.kappa() - 1] >= 0.0);
}

TEST_CASE("eigenvalues match the covariance spectrum") {
  const DesignMatrix dm = small_design(43, 3, 32, AugKind::None);
  const LatentSpace ls = fit_kle(dm, 1.0);
  // Oracle: dense symmetric eigensolve of the explicit covariance.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      sample_covariance(dm.rows));
  REQUIRE(es.info() == Eigen::Success);
  Eigen::VectorXd want = es.eigenvalues().reverse();  // descending
  const double scale = want[0];
  for (int i = 0; i < ls.kappa(); ++i)
    CHECK(ls.eigenvalues[i] ==
          doctest::Approx(std::max(want[i], 0.0)).epsilon(1e-8).scale(scale));
}

TEST_CASE("encode then decode restores every training row at beta one") {
  const DesignMatrix dm = small_design(44, 4, 48, AugKind::R234);
  const LatentSpace ls = fit_kle(dm, 1.0);
  for (int r = 0; r < dm.count(); ++r) {
    std::vector<double> row(static_cast<size_t>(dm.rows.cols()));
    for (int c = 0; c < dm.rows.cols(); ++c)
      row[static_cast<size_t>(c)] = dm.rows(r, c);
    const Eigen::VectorXd u = encode(ls, row);
    const std::vector<double> back = decode_vector(ls, u);
    for (size_t c = 0; c < row.size(); ++c)
      CHECK(back[c] == doctest::Approx(row[c]).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("rank one data collapses to a single mode") {
  // Rows = mean + t_k * d for scalars t_k: one eigenvalue carries all the
  // variance and the basis aligns with d.
  const int n_p = 30, m = 12;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n_p);
  Rng rng(45, "kle-rank1");
  for (int i = 0; i < n_p; ++i) d[i] = rng.uniform(-1.0, 1.0);
  d.normalize();
  DesignMatrix dm;
  dm.layout = SsvLayout{n_p / 2, AugKind::None, 0, 1.0};
  dm.rows.resize(m, n_p);
  for (int r = 0; r < m; ++r) {
    const double t = rng.uniform(-2.0, 2.0);
    dm.rows.row(r) = (0.3 * Eigen::VectorXd::Ones(n_p) + t * d).transpose();
    dm.labels.push_back("r" + std::to_string(r));
  }
  const LatentSpace ls = fit_kle(dm, 0.99);
  CHECK(ls.kappa() == 1);
  const double cosine = std::fabs(ls.basis.col(0).dot(d));
  CHECK(cosine > 1.0 - 1e-10);
  CHECK(ls.eigenvalues[0] ==
        doctest::Approx(ls.total_variance).epsilon(1e-10));
}

TEST_CASE("truncation count grows with the retained fraction") {
  const DesignMatrix dm = small_design(46, 5, 40, AugKind::R4);
  int prev = 0;
  for (double beta : {0.5, 0.8, 0.95, 0.999, 1.0}) {
    const LatentSpace ls = fit_kle(dm, beta);
    CHECK(ls.kappa() >= prev);
    prev = ls.kappa();
    // kappa is minimal: one fewer mode retains less than beta.
    if (ls.kappa() > 1) {
      const double partial =
          ls.eigenvalues.head(ls.kappa() - 1).sum() / ls.total_variance;
      CHECK(partial < beta);
    }
    CHECK(ls.retained_variance() / ls.total_variance >= beta - 1e-9);
  }
  CHECK_THROWS_AS((void)fit_kle(dm, 0.0), Error);
  CHECK_THROWS_AS((void)fit_kle(dm, 1.5), Error);
}

TEST_CASE("latent bounds scale with the eigenvalue square roots") {
  const DesignMatrix dm = small_design(47, 3, 36, AugKind::R2);
  const LatentSpace ls = fit_kle(dm, 0.95);
  const LatentBounds lb = latent_bounds(ls, 2.0);
  REQUIRE(lb.high.size() == ls.kappa());
  for (int i = 0; i < ls.kappa(); ++i) {
    CHECK(lb.high[i] ==
          doctest::Approx(2.0 * std::sqrt(ls.eigenvalues[i])).epsilon(1e-14));
    CHECK(lb.low[i] == -lb.high[i]);
  }
  CHECK(lb.alpha == 2.0);
  CHECK_THROWS_AS((void)latent_bounds(ls, 0.0), Error);
}

TEST_CASE("latent samples stay inside the bounds and reproduce by seed") {
  const DesignMatrix dm = small_design(48, 3, 36, AugKind::R4);
  const LatentSpace ls = fit_kle(dm, 0.95);
  const LatentBounds lb = latent_bounds(ls, 2.0);
  const auto a = sample_latent(ls, lb, 50, 7);
  const auto b = sample_latent(ls, lb, 50, 7);
  const auto c = sample_latent(ls, lb, 50, 8);
  REQUIRE(a.size() == 50);
  bool any_diff = false;
  for (size_t k = 0; k < a.size(); ++k) {
    for (int i = 0; i < ls.kappa(); ++i) {
      CHECK(a[k].u[i] >= lb.low[i]);
      CHECK(a[k].u[i] <= lb.high[i]);
      CHECK(a[k].u[i] == b[k].u[i]);
      if (a[k].u[i] != c[k].u[i]) any_diff = true;
    }
    CHECK(a[k].foil.size() == dm.layout.n_points);
    CHECK(a[k].foil.provenance == Provenance::Decoded);
  }
  CHECK(any_diff);
  // Decoded geometry equals decode_foil of the same latent vector.
  const PolylineFoil direct = decode_foil(ls, a[0].u, a[0].foil.name);
  for (int i = 0; i < direct.size(); ++i) {
    CHECK(direct.points[static_cast<size_t>(i)].x ==
          a[0].foil.points[static_cast<size_t>(i)].x);
    CHECK(direct.points[static_cast<size_t>(i)].y ==
          a[0].foil.points[static_cast<size_t>(i)].y);
  }
}

TEST_CASE("latent space persists through save and load") {
  const DesignMatrix dm = small_design(49, 3, 30, AugKind::R23);
  const LatentSpace ls = fit_kle(dm, 0.9);
  const auto dir = std::filesystem::temp_directory_path() / "foilspace-kle";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string base = (dir / "space").string();
  save_latent_space(ls, base);
  for (const std::string& path : {base, base + ".json"}) {
    const LatentSpace back = load_latent_space(path);
    CHECK(back.layout == ls.layout);
    CHECK(back.beta == ls.beta);
    CHECK(back.alpha == ls.alpha);
    CHECK(back.total_variance == ls.total_variance);
    REQUIRE(back.kappa() == ls.kappa());
    CHECK((back.mean - ls.mean).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.basis - ls.basis).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.eigenvalues - ls.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS((void)load_latent_space((dir / "absent").string()), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("identical rows cannot span a latent space") {
  DesignMatrix dm;
  dm.layout = SsvLayout{8, AugKind::None, 0, 1.0};
  dm.rows.resize(5, 16);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 16; ++c) dm.rows(r, c) = 0.25 * c;
    dm.labels.push_back("same");
  }
  CHECK_THROWS_AS((void)fit_kle(dm, 0.95), Error);
}

TEST_CASE("sign convention pins the dominant component positive") {
  const DesignMatrix dm = small_design(50, 4, 40, AugKind::R4);
  const LatentSpace ls = fit_kle(dm, 1.0);
  for (int j = 0; j < ls.kappa(); ++j) {
    int arg = 0;
    ls.basis.col(j).cwiseAbs().maxCoeff(&arg);
    CHECK(ls.basis(arg, j) > 0.0);
  }
}

TEST_CASE("encode rejects mismatched vector lengths") {
  const DesignMatrix dm = small_design(51, 3, 30, AugKind::None);
  const LatentSpace ls = fit_kle(dm, 0.95);
  std::vector<double> wrong(7, 0.0);
  CHECK_THROWS_AS((void)encode(ls, wrong), Error);
  Eigen::VectorXd bad_u = Eigen::VectorXd::Zero(ls.kappa() + 3);
  CHECK_THROWS_AS((void)decode_vector(ls, bad_u), Error);
}
