#include "foilspace/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "json.hpp"

#include "foilspace/curve.hpp"
#include "foilspace/discretize.hpp"
#include "foilspace/error.hpp"
#include "foilspace/rng.hpp"

namespace fs = std::filesystem;

namespace foilspace {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

/// Splits a line into whitespace-separated numeric tokens; returns nothing if
/// any token fails to parse as a number.
std::optional<std::vector<double>> parse_numbers(const std::string& line) {
  std::istringstream is(line);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) {
    try {
      size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size() || !std::isfinite(v)) return std::nullopt;
      out.push_back(v);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (out.empty()) return std::nullopt;
  return out;
}

struct NumberedLine {
  int number;  // 1-based line number in the original content
  std::string text;
};

void rescale_chord(PolylineFoil& pf) {
  double xmin = pf.points.front().x, xmax = xmin;
  for (const Point2& p : pf.points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
  }
  const double span = xmax - xmin;
  if (span <= 0.0)
    throw_error(ErrorCode::Parse,
                "degenerate coordinates: zero chord extent (" + pf.name + ")");
  for (Point2& p : pf.points) p = {(p.x - xmin) / span, p.y / span};
}

}  // namespace

PolylineFoil parse_dat(const std::string& content) {
  std::vector<NumberedLine> lines;
  {
    std::istringstream is(content);
    std::string raw;
    int number = 0;
    while (std::getline(is, raw)) {
      ++number;
      const std::string t = trim(raw);
      if (!t.empty()) lines.push_back({number, t});
    }
  }
  if (lines.size() < 2)
    throw_error(ErrorCode::Parse, "malformed file: no coordinate data");

  PolylineFoil pf;
  pf.name = lines[0].text;
  pf.provenance = Provenance::File;
  pf.has_scheme = false;

  // Format detection: Lednicer files follow the name with the two surface
  // point counts, conventionally written like "37. 37." - two values > 1.
  // A Selig file's second line is a coordinate pair, whose x never exceeds 1.
  bool lednicer = false;
  if (const auto counts = parse_numbers(lines[1].text)) {
    lednicer = counts->size() == 2 && (*counts)[0] > 1.0 && (*counts)[1] > 1.0;
  }

  auto coord_at = [&](size_t idx) -> Point2 {
    const auto nums = parse_numbers(lines[idx].text);
    if (!nums || nums->size() != 2) {
      std::ostringstream os;
      os << "line " << lines[idx].number
         << ": expected an 'x y' coordinate pair, got \"" << lines[idx].text
         << "\"";
      throw_error(ErrorCode::Parse, os.str());
    }
    return {(*nums)[0], (*nums)[1]};
  };

  if (!lednicer) {
    for (size_t i = 1; i < lines.size(); ++i) pf.points.push_back(coord_at(i));
  } else {
    const auto counts = parse_numbers(lines[1].text);
    const auto n_up = static_cast<size_t>(std::llround((*counts)[0]));
    const auto n_lo = static_cast<size_t>(std::llround((*counts)[1]));
    if (lines.size() - 2 != n_up + n_lo) {
      std::ostringstream os;
      os << "surface counts " << n_up << " + " << n_lo << " do not match the "
         << (lines.size() - 2) << " coordinate lines present";
      throw_error(ErrorCode::Parse, os.str());
    }
    std::vector<Point2> upper, lower;
    for (size_t i = 0; i < n_up; ++i) upper.push_back(coord_at(2 + i));
    for (size_t i = 0; i < n_lo; ++i) lower.push_back(coord_at(2 + n_up + i));
    // Both surfaces run leading edge -> trailing edge. Reorder to the Selig
    // traversal: trailing edge -> upper -> leading edge -> lower -> trailing
    // edge, emitting a shared leading-edge point only once.
    std::reverse(upper.begin(), upper.end());
    pf.points = std::move(upper);
    size_t start = 0;
    if (!lower.empty() && dist(pf.points.back(), lower.front()) < 1e-12)
      start = 1;
    for (size_t i = start; i < lower.size(); ++i) pf.points.push_back(lower[i]);
  }

  if (pf.points.size() < 4)
    throw_error(ErrorCode::Parse, "malformed file: fewer than 4 points (" +
                                      pf.name + ")");
  rescale_chord(pf);
  validate_polyline(pf);
  return pf;
}

PolylineFoil read_dat(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::Io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dat(buf.str());
}

void write_dat(const PolylineFoil& pf, std::ostream& os, int precision) {
  os << (pf.name.empty() ? "unnamed" : pf.name) << "\n";
  char line[128];
  for (const Point2& p : pf.points) {
    std::snprintf(line, sizeof line, "%.*g %.*g\n", precision, p.x, precision,
                  p.y);
    os << line;
  }
}

std::string write_dat_string(const PolylineFoil& pf, int precision) {
  std::ostringstream os;
  write_dat(pf, os, precision);
  return os.str();
}

std::vector<ParamVector> perturb_params(const ParamVector& p, int count,
                                        double fraction, uint64_t seed) {
  if (count < 1)
    throw_error(ErrorCode::InvalidArgument, "perturbation count must be >= 1");
  if (!(fraction > 0.0 && fraction < 1.0))
    throw_error(ErrorCode::InvalidArgument,
                "perturbation fraction must lie in (0, 1)");
  Rng rng(seed, "perturb");
  std::vector<ParamVector> out;
  out.reserve(static_cast<size_t>(count));
  for (int k = 0; k < count; ++k) {
    std::array<double, ParamVector::kSize> q;
    for (int i = 0; i < ParamVector::kSize; ++i) {
      const double v = p[i];
      const double drawn = rng.uniform(v * (1.0 - fraction), v * (1.0 + fraction));
      q[static_cast<size_t>(i)] = std::clamp(drawn, 0.0, 1.0);
    }
    out.emplace_back(q);
  }
  return out;
}

FoilDataset build_dataset_d1(const std::vector<ParamVector>& bases,
                             Scheme scheme, int n, uint64_t seed) {
  if (bases.empty())
    throw_error(ErrorCode::InvalidArgument, "dataset needs at least one base vector");
  FoilDataset ds;
  ds.common_n = n;
  ds.scheme = scheme;
  ds.source_label = "D1";
  ds.members.reserve(bases.size() * 6);

  Rng stream_seeds(seed, "d1-bases");
  char label[64];
  for (size_t b = 0; b < bases.size(); ++b) {
    const uint64_t member_seed = stream_seeds.next_u64();
    try {
      std::vector<ParamVector> family{bases[b]};
      const auto perturbed = perturb_params(bases[b], 5, 0.05, member_seed);
      family.insert(family.end(), perturbed.begin(), perturbed.end());
      for (size_t j = 0; j < family.size(); ++j) {
        const NurbsCurve foil = make_foil(family[j]);
        if (j == 0)
          std::snprintf(label, sizeof label, "base-%04zu", b);
        else
          std::snprintf(label, sizeof label, "pert-%04zu-%zu", b, j);
        PolylineFoil pf = discretize(foil, scheme, n, label);
        ds.members.push_back(std::move(pf));
      }
    } catch (const Error& e) {
      std::ostringstream os;
      os << "member " << b << ": " << e.what();
      throw_error(e.code(), os.str());
    }
  }
  return ds;
}

FoilDataset load_external_dataset(const std::string& dir, Scheme scheme,
                                  int n) {
  if (!fs::is_directory(dir))
    throw_error(ErrorCode::Io, "not a directory: " + dir);

  std::string label = "custom";
  Provenance provenance = Provenance::File;
  const fs::path manifest = fs::path(dir) / "manifest.json";
  if (fs::exists(manifest)) {
    std::ifstream in(manifest);
    try {
      const auto j = nlohmann::json::parse(in);
      if (j.contains("label")) label = j["label"].get<std::string>();
      if (j.contains("provenance"))
        provenance = provenance_from_name(j["provenance"].get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw_error(ErrorCode::Parse,
                  "manifest.json: " + std::string(e.what()));
    }
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename() == "manifest.json") continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  FoilDataset ds;
  ds.common_n = n;
  ds.scheme = scheme;
  ds.source_label = label;
  for (const fs::path& f : files) {
    try {
      PolylineFoil raw = read_dat(f.string());
      ResampleResult rs = resample_polyline(raw, scheme, n);
      rs.foil.provenance = provenance;
      ds.members.push_back(std::move(rs.foil));
    } catch (const Error& e) {
      ds.warnings.push_back({f.filename().string(),
                             std::string("skipped: ") + e.what()});
    }
  }
  if (ds.members.empty())
    throw_error(ErrorCode::Parse, "no parseable coordinate files in " + dir);
  return ds;
}

int drop_near_duplicates(FoilDataset& ds, double threshold) {
  std::vector<PolylineFoil> kept;
  int dropped = 0;
  for (auto& m : ds.members) {
    bool duplicate = false;
    for (const auto& k : kept) {
      if (k.points.size() != m.points.size()) continue;
      double worst = 0.0;
      for (size_t i = 0; i < k.points.size() && worst < threshold; ++i)
        worst = std::max(worst, dist(k.points[i], m.points[i]));
      if (worst < threshold) {
        ds.warnings.push_back(
            {m.name, "dropped as near-duplicate of " + k.name});
        duplicate = true;
        ++dropped;
        break;
      }
    }
    if (!duplicate) kept.push_back(std::move(m));
  }
  ds.members = std::move(kept);
  return dropped;
}

void write_dataset_csv(const FoilDataset& ds, const std::string& csv_path,
                       const std::string& manifest_path) {
  std::ofstream out(csv_path);
  if (!out) throw_error(ErrorCode::Io, "cannot write " + csv_path);
  char num[64];
  for (const auto& m : ds.members) {
    std::string name = m.name;
    std::replace(name.begin(), name.end(), ',', ';');
    out << name << ',' << provenance_name(m.provenance);
    for (const Point2& p : m.points) {
      std::snprintf(num, sizeof num, ",%.17g,%.17g", p.x, p.y);
      out << num;
    }
    out << '\n';
  }
  out.close();
  if (!out) throw_error(ErrorCode::Io, "failed writing " + csv_path);

  nlohmann::json j;
  j["n"] = ds.common_n;
  j["scheme"] = scheme_name(ds.scheme);
  j["label"] = ds.source_label;
  j["members"] = ds.members.size();
  auto warn = nlohmann::json::array();
  for (const auto& w : ds.warnings)
    warn.push_back({{"member", w.member}, {"message", w.message}});
  j["warnings"] = warn;
  std::ofstream mout(manifest_path);
  if (!mout) throw_error(ErrorCode::Io, "cannot write " + manifest_path);
  mout << j.dump(2) << '\n';
}

FoilDataset read_dataset_csv(const std::string& csv_path,
                             const std::string& manifest_path) {
  nlohmann::json j;
  {
    std::ifstream in(manifest_path);
    if (!in) throw_error(ErrorCode::Io, "cannot open " + manifest_path);
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw_error(ErrorCode::Parse, manifest_path + ": " + e.what());
    }
  }
  FoilDataset ds;
  ds.common_n = j.at("n").get<int>();
  ds.scheme = scheme_from_name(j.at("scheme").get<std::string>());
  ds.source_label = j.at("label").get<std::string>();
  if (j.contains("warnings"))
    for (const auto& w : j["warnings"])
      ds.warnings.push_back({w.value("member", std::string{}),
                             w.value("message", std::string{})});

  std::ifstream in(csv_path);
  if (!in) throw_error(ErrorCode::Io, "cannot open " + csv_path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 2 + 2 * static_cast<size_t>(ds.common_n)) {
      std::ostringstream os;
      os << csv_path << " line " << line_no << ": expected "
         << 2 + 2 * ds.common_n << " cells, got " << cells.size();
      throw_error(ErrorCode::Parse, os.str());
    }
    PolylineFoil pf;
    pf.name = cells[0];
    pf.provenance = provenance_from_name(cells[1]);
    pf.scheme = ds.scheme;
    pf.has_scheme = true;
    pf.points.reserve(static_cast<size_t>(ds.common_n));
    for (int i = 0; i < ds.common_n; ++i) {
      try {
        pf.points.push_back({std::stod(cells[static_cast<size_t>(2 + 2 * i)]),
                             std::stod(cells[static_cast<size_t>(3 + 2 * i)])});
      } catch (const std::exception&) {
        std::ostringstream os;
        os << csv_path << " line " << line_no << ": bad numeric cell";
        throw_error(ErrorCode::Parse, os.str());
      }
    }
    pf.closed = dist(pf.points.front(), pf.points.back()) < 1e-6;
    ds.members.push_back(std::move(pf));
  }
  if (ds.members.empty())
    throw_error(ErrorCode::Parse, csv_path + ": empty dataset");
  return ds;
}

std::vector<ParamVector> read_params_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::Io, "cannot open " + path);
  std::vector<ParamVector> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<double> vals;
    std::istringstream ls(t);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        vals.push_back(std::stod(cell));
      } catch (const std::exception&) {
        std::ostringstream os;
        os << path << " line " << line_no << ": bad numeric cell \"" << cell
           << "\"";
        throw_error(ErrorCode::Parse, os.str());
      }
    }
    try {
      out.push_back(ParamVector::from(vals));
    } catch (const Error& e) {
      std::ostringstream os;
      os << path << " line " << line_no << ": " << e.what();
      throw_error(e.code(), os.str());
    }
  }
  if (out.empty())
    throw_error(ErrorCode::Parse, path + ": no design vectors found");
  return out;
}

}  // namespace foilspace
