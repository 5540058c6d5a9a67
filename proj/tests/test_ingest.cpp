#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "foilspace/curve.hpp"
#include "foilspace/discretize.hpp"
#include "foilspace/error.hpp"
#include "foilspace/ingest.hpp"
#include "foilspace/rng.hpp"
#include "foilspace/types.hpp"

using namespace foilspace;

namespace {

std::string fixture(const std::string& name) {
  return std::string(FOILSPACE_FIXTURE_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::filesystem::path temp_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("foilspace-test-" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

ParamVector mid_params() {
  std::array<double, 17> a{};
  a.fill(0.5);
  return ParamVector::from(a);
}

}  // namespace

TEST_CASE("selig file parses with chord pinned to [0, 1]") {
  const PolylineFoil pf = read_dat(fixture("naca2410.dat"));
  CHECK(pf.name == "NACA 2410");
  CHECK(pf.size() == 161);
  CHECK(pf.provenance == Provenance::File);
  double xmin = 1e300, xmax = -1e300;
  for (const Point2& p : pf.points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
  }
  CHECK(xmin == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(xmax == doctest::Approx(1.0).epsilon(1e-12));
  // Selig traversal: starts and ends at the trailing edge.
  CHECK(pf.points.front().x == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(pf.points.back().x == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lednicer file reorders into the selig traversal") {
  const PolylineFoil led = read_dat(fixture("lednicer2410.dat"));
  const PolylineFoil sel = read_dat(fixture("naca2410.dat"));
  REQUIRE(led.size() == sel.size());
  for (int i = 0; i < led.size(); ++i) {
    CHECK(led.points[static_cast<size_t>(i)].x ==
          doctest::Approx(sel.points[static_cast<size_t>(i)].x).epsilon(1e-9));
    CHECK(led.points[static_cast<size_t>(i)].y ==
          doctest::Approx(sel.points[static_cast<size_t>(i)].y).epsilon(1e-9));
  }
}

TEST_CASE("second line holding small coordinates stays selig") {
  // A coordinate row like "0.99 0.002" must not be mistaken for Lednicer
  // surface counts: the counts rule requires both values > 1.
  const PolylineFoil pf = read_dat(fixture("second-line-edge.dat"));
  CHECK(pf.points.front().x == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(pf.size() >= 5);
}

TEST_CASE("malformed coordinate files are rejected") {
  CHECK_THROWS_AS((void)read_dat(fixture("corrupt.dat")), Error);
  CHECK_THROWS_AS((void)read_dat(fixture("missing-file.dat")), Error);
  CHECK_THROWS_AS((void)parse_dat("name only\n"), Error);
}

TEST_CASE("write then parse returns the same polyline") {
  const PolylineFoil pf = read_dat(fixture("naca2410.dat"));
  const PolylineFoil back = parse_dat(write_dat_string(pf));
  REQUIRE(back.size() == pf.size());
  CHECK(back.name == pf.name);
  for (int i = 0; i < pf.size(); ++i) {
    CHECK(back.points[static_cast<size_t>(i)].x ==
          doctest::Approx(pf.points[static_cast<size_t>(i)].x).epsilon(1e-14));
    CHECK(back.points[static_cast<size_t>(i)].y ==
          doctest::Approx(pf.points[static_cast<size_t>(i)].y).epsilon(1e-14));
  }
}

TEST_CASE("perturbation stays inside the component-wise band") {
  ParamVector p = mid_params();
  const double f = 0.05;
  const auto vs = perturb_params(p, 40, f, 77);
  REQUIRE(vs.size() == 40);
  for (const ParamVector& v : vs)
    for (int i = 0; i < ParamVector::kSize; ++i) {
      CHECK(v[i] >= p[i] * (1.0 - f) - 1e-12);
      CHECK(v[i] <= p[i] * (1.0 + f) + 1e-12);
      CHECK(v[i] >= 0.0);
      CHECK(v[i] <= 1.0);
    }
  // Deterministic: same seed, same draws.
  const auto again = perturb_params(p, 40, f, 77);
  for (size_t k = 0; k < vs.size(); ++k)
    for (int i = 0; i < ParamVector::kSize; ++i)
      CHECK(vs[k][i] == again[k][i]);
  // Components near 1 stay clamped inside [0, 1].
  std::array<double, 17> hi{};
  hi.fill(0.999);
  const auto top = perturb_params(ParamVector::from(hi), 40, f, 5);
  for (const ParamVector& v : top)
    for (int i = 0; i < ParamVector::kSize; ++i) CHECK(v[i] <= 1.0);
}

TEST_CASE("parametric dataset holds six members per base vector") {
  Rng rng(11, "ingest-d1");
  std::vector<ParamVector> bases;
  for (int i = 0; i < 4; ++i) {
    std::array<double, 17> a{};
    for (auto& v : a) v = rng.uniform();
    bases.push_back(ParamVector::from(a));
  }
  const FoilDataset ds = build_dataset_d1(bases, Scheme::Cosine, 120, 99);
  CHECK(ds.size() == 24);
  CHECK(ds.common_n == 120);
  CHECK(ds.scheme == Scheme::Cosine);
  for (const PolylineFoil& m : ds.members) {
    CHECK(m.size() == 120);
    CHECK(m.provenance == Provenance::Parametric);
    CHECK(m.has_scheme);
  }
  // Base foils appear unperturbed: every sixth member matches a direct build.
  const PolylineFoil direct = discretize(make_foil(bases[1]),
                                         Scheme::Cosine, 120, "check");
  const PolylineFoil& stored = ds.members[6];
  for (int i = 0; i < 120; ++i) {
    CHECK(stored.points[static_cast<size_t>(i)].x ==
          doctest::Approx(direct.points[static_cast<size_t>(i)].x)
              .epsilon(1e-13));
    CHECK(stored.points[static_cast<size_t>(i)].y ==
          doctest::Approx(direct.points[static_cast<size_t>(i)].y)
              .epsilon(1e-13));
  }
  // Same seed reproduces the dataset member for member.
  const FoilDataset ds2 = build_dataset_d1(bases, Scheme::Cosine, 120, 99);
  REQUIRE(ds2.size() == ds.size());
  for (int k = 0; k < ds.size(); ++k)
    for (int i = 0; i < 120; ++i) {
      const auto& a = ds.members[static_cast<size_t>(k)]
                          .points[static_cast<size_t>(i)];
      const auto& b = ds2.members[static_cast<size_t>(k)]
                          .points[static_cast<size_t>(i)];
      CHECK(a.x == b.x);
      CHECK(a.y == b.y);
    }
}

TEST_CASE("directory ingest skips bad files and keeps the label") {
  const FoilDataset ds =
      load_external_dataset(fixture("uiuc-sample"), Scheme::Cosine, 80);
  CHECK(ds.size() == 3);  // broken.dat is skipped
  CHECK(ds.source_label == "uiuc-sample");
  REQUIRE(!ds.warnings.empty());
  bool saw_broken = false;
  for (const auto& w : ds.warnings)
    if (w.member.find("broken.dat") != std::string::npos) saw_broken = true;
  CHECK(saw_broken);
  // Sorted by filename: naca0012 < naca2410 < naca4415.
  CHECK(ds.members[0].name == "NACA 0012");
  CHECK(ds.members[1].name == "NACA 2410");
  CHECK(ds.members[2].name == "NACA 4415");
  for (const PolylineFoil& m : ds.members) {
    CHECK(m.size() == 80);
    CHECK(m.has_scheme);
    CHECK(m.scheme == Scheme::Cosine);
  }
  CHECK_THROWS_AS(
      (void)load_external_dataset(fixture("does-not-exist"), Scheme::Cosine, 80),
      Error);
}

TEST_CASE("near duplicates are dropped with a warning trail") {
  Rng rng(12, "ingest-dup");
  std::array<double, 17> a{};
  for (auto& v : a) v = rng.uniform();
  const ParamVector base = ParamVector::from(a);
  FoilDataset ds = build_dataset_d1({base}, Scheme::Cosine, 100, 3);
  REQUIRE(ds.size() == 6);
  // Append an exact copy of member 0 and a slightly shifted copy.
  PolylineFoil dup = ds.members[0];
  dup.name = "clone";
  ds.members.push_back(dup);
  PolylineFoil near = ds.members[0];
  near.name = "near";
  for (Point2& p : near.points) p.y += 5e-5;
  ds.members.push_back(near);
  const size_t warnings_before = ds.warnings.size();
  const int dropped = drop_near_duplicates(ds, 1e-4);
  CHECK(dropped == 2);
  CHECK(ds.size() == 6);
  CHECK(ds.warnings.size() == warnings_before + 2);
  for (const PolylineFoil& m : ds.members) {
    CHECK(m.name != "clone");
    CHECK(m.name != "near");
  }
  // A shift past the threshold survives.
  PolylineFoil far = ds.members[0];
  far.name = "far";
  for (Point2& p : far.points) p.y += 5e-4;
  ds.members.push_back(far);
  CHECK(drop_near_duplicates(ds, 1e-4) == 0);
  CHECK(ds.size() == 7);
}

TEST_CASE("dataset csv and manifest round trip") {
  Rng rng(13, "ingest-csv");
  std::array<double, 17> a{};
  for (auto& v : a) v = rng.uniform();
  FoilDataset ds = build_dataset_d1({ParamVector::from(a)},
                                    Scheme::UniformPoint, 64, 21);
  ds.source_label = "round-trip";
  ds.warnings.push_back({"memberX", "synthetic warning"});
  const auto dir = temp_dir("csv");
  const std::string csv = (dir / "ds.csv").string();
  const std::string man = (dir / "ds-manifest.json").string();
  write_dataset_csv(ds, csv, man);
  const FoilDataset back = read_dataset_csv(csv, man);
  CHECK(back.size() == ds.size());
  CHECK(back.common_n == 64);
  CHECK(back.scheme == Scheme::UniformPoint);
  CHECK(back.source_label == "round-trip");
  REQUIRE(!back.warnings.empty());
  CHECK(back.warnings.back().member == "memberX");
  for (int k = 0; k < ds.size(); ++k) {
    const auto& ma = ds.members[static_cast<size_t>(k)];
    const auto& mb = back.members[static_cast<size_t>(k)];
    CHECK(ma.name == mb.name);
    CHECK(ma.provenance == mb.provenance);
    for (int i = 0; i < 64; ++i) {
      // 17 significant digits reproduce doubles exactly.
      CHECK(ma.points[static_cast<size_t>(i)].x ==
            mb.points[static_cast<size_t>(i)].x);
      CHECK(ma.points[static_cast<size_t>(i)].y ==
            mb.points[static_cast<size_t>(i)].y);
    }
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("params csv reads headerless 17-column rows") {
  const auto dir = temp_dir("params");
  const std::string path = (dir / "p.csv").string();
  {
    std::ofstream out(path);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 17; ++c)
        out << (c ? "," : "") << (0.01 * (r + 1) + 0.001 * c);
      out << "\n";
    }
  }
  const auto rows = read_params_csv(path);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0][0] == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(rows[2][16] == doctest::Approx(0.03 + 0.016).epsilon(1e-12));
  {
    std::ofstream out(path);
    out << "0.1,0.2\n";
  }
  CHECK_THROWS_AS((void)read_params_csv(path), Error);
  std::filesystem::remove_all(dir);
}
