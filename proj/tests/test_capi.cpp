#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "foilspace/foilspace.h"
#include "foilspace/rng.hpp"

namespace {

std::string fixture(const std::string& name) {
  return std::string(FOILSPACE_FIXTURE_DIR) + "/" + name;
}

std::array<double, 17> random17(uint64_t seed) {
  foilspace::Rng rng(seed, "capi");
  std::array<double, 17> a{};
  for (auto& v : a) v = rng.uniform();
  return a;
}

std::vector<double> base_params(int n_bases, uint64_t seed) {
  std::vector<double> flat;
  for (int i = 0; i < n_bases; ++i) {
    const auto a = random17(seed + static_cast<uint64_t>(i));
    flat.insert(flat.end(), a.begin(), a.end());
  }
  return flat;
}

fsp_fit_options default_fit(fsp_aug aug) {
  fsp_fit_options o{};
  o.aug = aug;
  o.weight = 0.0;
  o.beta = 0.95;
  o.evaluator = FSP_EVAL_NONE;
  o.flow = fsp_flow{500000.0, 0.0, 3.0, 200};
  o.xfoil_path = nullptr;
  o.timeout_sec = 0.0;
  o.xfoil_no_repanel = 0;
  return o;
}

}  // namespace

TEST_CASE("version and status names are stable strings") {
  CHECK(fsp_version() != nullptr);
  CHECK(std::strlen(fsp_version()) > 0);
  CHECK(std::string(fsp_status_name(FSP_OK)) == "ok");
  CHECK(std::string(fsp_status_name(FSP_ERR_INVALID_ARGUMENT)) ==
        "invalid-argument");
  CHECK(std::string(fsp_status_name(FSP_ERR_TIMEOUT)) == "timeout");
}

TEST_CASE("curve handles evaluate and report curvature") {
  const auto p = random17(1);
  fsp_curve* c = nullptr;
  REQUIRE(fsp_foil_from_params(p.data(), &c) == FSP_OK);
  REQUIRE(c != nullptr);
  double t0 = -1.0, t1 = -1.0;
  CHECK(fsp_curve_domain(c, &t0, &t1) == FSP_OK);
  CHECK(t0 == 0.0);
  CHECK(t1 == 1.0);
  double x = 0.0, y = 0.0;
  CHECK(fsp_curve_eval(c, 0.0, &x, &y) == FSP_OK);
  CHECK(x == doctest::Approx(1.0).epsilon(1e-12));
  double kappa = 0.0;
  CHECK(fsp_curve_curvature(c, 0.5, &kappa) == FSP_OK);
  CHECK(std::isfinite(kappa));
  double len = 0.0;
  CHECK(fsp_curve_arc_length(c, 0.0, 1.0, 1e-9, &len) == FSP_OK);
  CHECK(len > 2.0);
  // Domain violations surface as status codes with a message.
  CHECK(fsp_curve_eval(c, 7.0, &x, &y) == FSP_ERR_DOMAIN);
  CHECK(std::strlen(fsp_last_error()) > 0);
  fsp_curve_free(c);

  // A component outside [0, 1] is a domain violation; a null pointer is a
  // malformed argument. The two surface as different statuses.
  auto bad = p;
  bad[4] = 1.7;
  fsp_curve* nope = nullptr;
  CHECK(fsp_foil_from_params(bad.data(), &nope) == FSP_ERR_DOMAIN);
  CHECK(nope == nullptr);
  CHECK(fsp_foil_from_params(nullptr, &nope) == FSP_ERR_INVALID_ARGUMENT);
}

TEST_CASE("polylines flow from discretization through validity to moments") {
  const auto p = random17(2);
  fsp_curve* c = nullptr;
  REQUIRE(fsp_foil_from_params(p.data(), &c) == FSP_OK);
  fsp_polyline* pl = nullptr;
  REQUIRE(fsp_discretize(c, FSP_SCHEME_COSINE, 150, &pl) == FSP_OK);
  fsp_curve_free(c);
  CHECK(fsp_polyline_size(pl) == 150);
  CHECK(fsp_polyline_is_closed(pl) == 1);

  fsp_validity v{};
  CHECK(fsp_check_validity(pl, &v) == FSP_OK);
  CHECK(v.is_valid == 1);
  CHECK(v.self_intersections == 0);

  double mu = 0.0;
  CHECK(fsp_invariant_moment(pl, 2, 0, &mu) == FSP_OK);
  CHECK(std::isfinite(mu));
  const int orders[2] = {2, 4};
  double vec[8] = {};
  int written = 0;
  CHECK(fsp_moment_vector(pl, orders, 2, vec, 8, &written) == FSP_OK);
  CHECK(written == 8);
  CHECK(vec[0] == doctest::Approx(mu).epsilon(1e-14));
  CHECK(fsp_moment_vector(pl, orders, 2, vec, 3, &written) ==
        FSP_ERR_INVALID_ARGUMENT);

  fsp_polar polar{};
  const fsp_flow flow{500000.0, 0.0, 3.0, 200};
  CHECK(fsp_eval_surrogate(pl, &flow, &polar) == FSP_OK);
  CHECK(polar.converged == 1);
  CHECK(std::isfinite(polar.ld));
  fsp_polyline_free(pl);
}

TEST_CASE("polyline round trips through buffers and files") {
  // A parsed fixture already spans [0, 1] exactly, so the chord
  // normalization applied on every read is the identity and the write/read
  // cycle is bit-exact.
  fsp_polyline* pl = nullptr;
  REQUIRE(fsp_polyline_read(fixture("naca2410.dat").c_str(), &pl) == FSP_OK);
  const int n = fsp_polyline_size(pl);
  REQUIRE(n == 161);
  std::vector<double> xy(static_cast<size_t>(2 * n));
  REQUIRE(fsp_polyline_points(pl, xy.data(), 2 * n) == FSP_OK);
  CHECK(fsp_polyline_points(pl, xy.data(), 10) == FSP_ERR_INVALID_ARGUMENT);

  fsp_polyline* copy = nullptr;
  REQUIRE(fsp_polyline_create(xy.data(), n, "copy", &copy) == FSP_OK);
  CHECK(fsp_polyline_size(copy) == n);
  CHECK(std::string(fsp_polyline_name(copy)) == "copy");

  const auto dir = std::filesystem::temp_directory_path() / "foilspace-capi";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "foil.dat").string();
  REQUIRE(fsp_polyline_write(copy, path.c_str()) == FSP_OK);
  fsp_polyline* back = nullptr;
  REQUIRE(fsp_polyline_read(path.c_str(), &back) == FSP_OK);
  CHECK(fsp_polyline_size(back) == n);
  std::vector<double> xy2(static_cast<size_t>(2 * n));
  REQUIRE(fsp_polyline_points(back, xy2.data(), 2 * n) == FSP_OK);
  for (int i = 0; i < 2 * n; ++i)
    CHECK(xy2[static_cast<size_t>(i)] == xy[static_cast<size_t>(i)]);

  // A freshly discretized profile rarely samples the leading edge exactly,
  // so reading its file back renormalizes the chord: the span is pinned to
  // [0, 1] and the shape shift stays at the leading-edge sampling gap.
  const auto p = random17(3);
  fsp_curve* c = nullptr;
  REQUIRE(fsp_foil_from_params(p.data(), &c) == FSP_OK);
  fsp_polyline* disc = nullptr;
  REQUIRE(fsp_discretize(c, FSP_SCHEME_UNIFORM_POINT, 90, &disc) == FSP_OK);
  fsp_curve_free(c);
  REQUIRE(fsp_polyline_write(disc, path.c_str()) == FSP_OK);
  fsp_polyline* disc_back = nullptr;
  REQUIRE(fsp_polyline_read(path.c_str(), &disc_back) == FSP_OK);
  std::vector<double> da(180), db(180);
  REQUIRE(fsp_polyline_points(disc, da.data(), 180) == FSP_OK);
  REQUIRE(fsp_polyline_points(disc_back, db.data(), 180) == FSP_OK);
  double gap = 1e300, xmin = 1e300, xmax = -1e300, worst = 0.0;
  for (int i = 0; i < 90; ++i) {
    gap = std::min(gap, da[static_cast<size_t>(2 * i)]);
    xmin = std::min(xmin, db[static_cast<size_t>(2 * i)]);
    xmax = std::max(xmax, db[static_cast<size_t>(2 * i)]);
    worst = std::max(worst, std::fabs(da[static_cast<size_t>(2 * i)] -
                                      db[static_cast<size_t>(2 * i)]));
  }
  CHECK(xmin == 0.0);
  CHECK(xmax == 1.0);
  // With the trailing edge already at x = 1 the rescale moves any x by at
  // most the pre-write minimum, i.e. the leading-edge sampling gap.
  CHECK(gap > 0.0);
  CHECK(worst <= gap * (1.0 + 1e-12));
  CHECK(gap < 0.01);

  fsp_polyline* resampled = nullptr;
  double hd = -1.0;
  REQUIRE(fsp_polyline_resample(back, FSP_SCHEME_COSINE, 120, &resampled,
                                &hd) == FSP_OK);
  CHECK(fsp_polyline_size(resampled) == 120);
  CHECK(hd >= 0.0);
  CHECK(hd < 0.05);

  fsp_polyline_free(pl);
  fsp_polyline_free(copy);
  fsp_polyline_free(back);
  fsp_polyline_free(disc);
  fsp_polyline_free(disc_back);
  fsp_polyline_free(resampled);
  std::filesystem::remove_all(dir);

  CHECK(fsp_polyline_read("/nonexistent/nothing.dat", &back) == FSP_ERR_IO);
  CHECK(fsp_polyline_parse("garbage\n", &back) == FSP_ERR_PARSE);
}

TEST_CASE("datasets fit into latent spaces and audit end to end") {
  const auto flat = base_params(3, 40);
  fsp_dataset* ds = nullptr;
  REQUIRE(fsp_dataset_build_d1(flat.data(), 3, FSP_SCHEME_COSINE, 80, 9,
                               &ds) == FSP_OK);
  CHECK(fsp_dataset_size(ds) == 18);

  fsp_polyline* member = nullptr;
  REQUIRE(fsp_dataset_member(ds, 0, &member) == FSP_OK);
  CHECK(fsp_polyline_size(member) == 80);
  fsp_polyline_free(member);
  CHECK(fsp_dataset_member(ds, 99, &member) == FSP_ERR_INVALID_ARGUMENT);

  int dropped = -1;
  CHECK(fsp_dataset_dedupe(ds, 1e-4, &dropped) == FSP_OK);
  CHECK(dropped == 0);

  const fsp_fit_options fit = default_fit(FSP_AUG_R4);
  fsp_latent* ls = nullptr;
  REQUIRE(fsp_fit(ds, &fit, &ls) == FSP_OK);
  const int kappa = fsp_latent_kappa(ls);
  CHECK(kappa >= 1);
  CHECK(fsp_latent_dim(ls) == 165);
  CHECK(fsp_latent_retained_fraction(ls) >= 0.95);
  CHECK(fsp_latent_weight(ls) > 0.0);
  CHECK(fsp_latent_total_variance(ls) > 0.0);

  std::vector<double> ev(static_cast<size_t>(kappa));
  REQUIRE(fsp_latent_eigenvalues(ls, ev.data(), kappa) == FSP_OK);
  for (int i = 0; i + 1 < kappa; ++i)
    CHECK(ev[static_cast<size_t>(i)] >= ev[static_cast<size_t>(i + 1)]);

  std::vector<double> lo(static_cast<size_t>(kappa)),
      hi(static_cast<size_t>(kappa));
  REQUIRE(fsp_latent_bounds(ls, 2.0, lo.data(), hi.data(), kappa) == FSP_OK);
  for (int i = 0; i < kappa; ++i) {
    CHECK(hi[static_cast<size_t>(i)] ==
          doctest::Approx(2.0 * std::sqrt(ev[static_cast<size_t>(i)]))
              .epsilon(1e-12));
    CHECK(lo[static_cast<size_t>(i)] == -hi[static_cast<size_t>(i)]);
  }

  // Decode the latent origin: the dataset mean shape.
  std::vector<double> zero(static_cast<size_t>(kappa), 0.0);
  fsp_polyline* mean = nullptr;
  REQUIRE(fsp_decode(ls, zero.data(), kappa, &mean) == FSP_OK);
  CHECK(fsp_polyline_size(mean) == 80);
  fsp_polyline_free(mean);

  fsp_dataset* samples = nullptr;
  REQUIRE(fsp_sample(ls, 2.0, 25, 4, &samples) == FSP_OK);
  CHECK(fsp_dataset_size(samples) == 25);
  fsp_dataset_free(samples);

  // Persistence round trip.
  const auto dir = std::filesystem::temp_directory_path() / "foilspace-capi2";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string base = (dir / "latent").string();
  REQUIRE(fsp_latent_save(ls, base.c_str()) == FSP_OK);
  fsp_latent* loaded = nullptr;
  REQUIRE(fsp_latent_load(base.c_str(), &loaded) == FSP_OK);
  CHECK(fsp_latent_kappa(loaded) == kappa);
  CHECK(fsp_latent_total_variance(loaded) == fsp_latent_total_variance(ls));

  fsp_audit_options audit{};
  audit.alpha = 2.0;
  audit.count = 60;
  audit.subsets = 3;
  audit.seed = 12;
  audit.evaluator = FSP_EVAL_SURROGATE;
  audit.flow = fsp_flow{500000.0, 0.0, 3.0, 200};
  fsp_report* rep = nullptr;
  REQUIRE(fsp_audit(loaded, &audit, &rep) == FSP_OK);
  fsp_report_stats stats{};
  REQUIRE(fsp_report_get_stats(rep, &stats) == FSP_OK);
  CHECK(stats.invalid_fraction >= 0.0);
  CHECK(stats.invalid_fraction <= 1.0);
  CHECK(stats.diversity_mean <= 0.0);
  CHECK(stats.evaluated > 0);
  CHECK(stats.converged > 0);

  char* json = nullptr;
  REQUIRE(fsp_report_json(rep, &json) == FSP_OK);
  REQUIRE(json != nullptr);
  CHECK(std::string(json).find("invalid_fraction") != std::string::npos);
  fsp_string_free(json);

  const std::string jpath = (dir / "report.json").string();
  const std::string kpath = (dir / "kde.csv").string();
  REQUIRE(fsp_report_write_files(rep, jpath.c_str(), kpath.c_str(), nullptr) ==
          FSP_OK);
  CHECK(std::filesystem::exists(jpath));
  CHECK(std::filesystem::exists(kpath));

  fsp_report_free(rep);
  fsp_latent_free(loaded);
  fsp_latent_free(ls);
  fsp_dataset_free(ds);
  std::filesystem::remove_all(dir);
}

TEST_CASE("dataset directory loading and csv round trip work through the c api") {
  fsp_dataset* ds = nullptr;
  REQUIRE(fsp_dataset_load_dir(fixture("uiuc-sample").c_str(),
                               FSP_SCHEME_COSINE, 70, &ds) == FSP_OK);
  CHECK(fsp_dataset_size(ds) == 3);

  const auto dir = std::filesystem::temp_directory_path() / "foilspace-capi3";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string csv = (dir / "ds.csv").string();
  const std::string man = (dir / "ds-manifest.json").string();
  REQUIRE(fsp_dataset_write_csv(ds, csv.c_str(), man.c_str()) == FSP_OK);
  fsp_dataset* back = nullptr;
  REQUIRE(fsp_dataset_read_csv(csv.c_str(), man.c_str(), &back) == FSP_OK);
  CHECK(fsp_dataset_size(back) == 3);

  fsp_dataset* denser = nullptr;
  REQUIRE(fsp_dataset_resample(back, FSP_SCHEME_UNIFORM_POINT, 100,
                               &denser) == FSP_OK);
  fsp_polyline* m = nullptr;
  REQUIRE(fsp_dataset_member(denser, 0, &m) == FSP_OK);
  CHECK(fsp_polyline_size(m) == 100);
  fsp_polyline_free(m);

  fsp_dataset_free(ds);
  fsp_dataset_free(back);
  fsp_dataset_free(denser);
  std::filesystem::remove_all(dir);

  CHECK(fsp_dataset_load_dir("/nonexistent/dir", FSP_SCHEME_COSINE, 70,
                             &ds) != FSP_OK);
}

TEST_CASE("null handles are rejected rather than dereferenced") {
  CHECK(fsp_curve_domain(nullptr, nullptr, nullptr) ==
        FSP_ERR_INVALID_ARGUMENT);
  CHECK(fsp_polyline_size(nullptr) == 0);
  CHECK(fsp_dataset_size(nullptr) == 0);
  CHECK(fsp_latent_kappa(nullptr) == 0);
  fsp_validity v{};
  CHECK(fsp_check_validity(nullptr, &v) == FSP_ERR_INVALID_ARGUMENT);
  fsp_report_stats s{};
  CHECK(fsp_report_get_stats(nullptr, &s) == FSP_ERR_INVALID_ARGUMENT);
  // Frees tolerate null.
  fsp_curve_free(nullptr);
  fsp_polyline_free(nullptr);
  fsp_dataset_free(nullptr);
  fsp_latent_free(nullptr);
  fsp_report_free(nullptr);
  fsp_string_free(nullptr);
}

TEST_CASE("degenerate datasets fail with a clean numeric status") {
  // Six copies of the same base vector collapse after deduplication; fitting
  // identical rows must fail, not crash.
  std::array<double, 17> a{};
  a.fill(0.4);
  std::vector<double> flat(a.begin(), a.end());
  fsp_dataset* ds = nullptr;
  REQUIRE(fsp_dataset_build_d1(flat.data(), 1, FSP_SCHEME_COSINE, 60, 2,
                               &ds) == FSP_OK);
  // Overwrite all members with copies of member zero via dedupe threshold
  // large enough to drop everything but one...
  int dropped = 0;
  REQUIRE(fsp_dataset_dedupe(ds, 1.0, &dropped) == FSP_OK);
  CHECK(dropped == 5);
  const fsp_fit_options fit = default_fit(FSP_AUG_NONE);
  fsp_latent* ls = nullptr;
  CHECK(fsp_fit(ds, &fit, &ls) != FSP_OK);
  CHECK(ls == nullptr);
  CHECK(std::strlen(fsp_last_error()) > 0);
  fsp_dataset_free(ds);
}
