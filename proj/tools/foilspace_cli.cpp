// Batch front-end for the foilspace shared library. Every subcommand reads
// its options from flags (or an INI config file via --config), runs one stage
// of the pipeline, and writes its outputs under --out-dir together with a
// run-manifest.json. The manifest is the only output that carries a
// timestamp; everything else is byte-stable for a fixed seed.

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "foilspace/foilspace.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// ---- small utilities -------------------------------------------------------

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_safe(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

std::string iso_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

int exit_code_for(fsp_status s) {
  switch (s) {
    case FSP_OK: return 0;
    case FSP_ERR_NUMERIC: return 4;
    case FSP_ERR_EXTERNAL:
    case FSP_ERR_TIMEOUT: return 5;
    default: return 3;  // invalid-argument / domain / parse / io
  }
}

int fail(fsp_status s, const std::string& doing) {
  std::cerr << "error [" << fsp_status_name(s) << "] while " << doing << ": "
            << fsp_last_error() << "\n";
  return exit_code_for(s);
}

#define RUN_OR_FAIL(call, doing)                            \
  do {                                                      \
    const fsp_status st_ = (call);                          \
    if (st_ != FSP_OK) return fail(st_, doing);             \
  } while (0)

// RAII wrappers around the C handles.
struct PolylineDel { void operator()(fsp_polyline* p) const { fsp_polyline_free(p); } };
struct DatasetDel { void operator()(fsp_dataset* d) const { fsp_dataset_free(d); } };
struct LatentDel { void operator()(fsp_latent* l) const { fsp_latent_free(l); } };
struct ReportDel { void operator()(fsp_report* r) const { fsp_report_free(r); } };
using PolylinePtr = std::unique_ptr<fsp_polyline, PolylineDel>;
using DatasetPtr = std::unique_ptr<fsp_dataset, DatasetDel>;
using LatentPtr = std::unique_ptr<fsp_latent, LatentDel>;
using ReportPtr = std::unique_ptr<fsp_report, ReportDel>;

const std::map<std::string, fsp_scheme> kSchemeNames{
    {"uniform-parametric", FSP_SCHEME_UNIFORM_PARAMETRIC},
    {"cosine", FSP_SCHEME_COSINE},
    {"curvature-based", FSP_SCHEME_CURVATURE},
    {"uniform-point", FSP_SCHEME_UNIFORM_POINT}};

const std::map<std::string, fsp_aug> kVariantNames{
    {"none", FSP_AUG_NONE}, {"r2", FSP_AUG_R2},     {"r3", FSP_AUG_R3},
    {"r4", FSP_AUG_R4},     {"r23", FSP_AUG_R23},   {"r234", FSP_AUG_R234},
    {"perf", FSP_AUG_PERF}};

const std::map<std::string, fsp_evaluator> kEvaluatorNames{
    {"none", FSP_EVAL_NONE},
    {"surrogate", FSP_EVAL_SURROGATE},
    {"xfoil", FSP_EVAL_XFOIL}};

template <typename T>
std::vector<std::string> keys_of(const std::map<std::string, T>& m) {
  std::vector<std::string> v;
  for (const auto& [k, _] : m) v.push_back(k);
  return v;
}

int ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    std::cerr << "error [io]: cannot create output directory " << dir << ": "
              << ec.message() << "\n";
    return 3;
  }
  return 0;
}

int write_run_manifest(const std::string& out_dir, const std::string& command,
                       const json& config) {
  json j;
  j["command"] = command;
  j["tool_version"] = fsp_version();
  j["timestamp_utc"] = iso_now();  // metadata only; primary outputs are stable
  j["config"] = config;
  std::ofstream out(out_dir + "/run-manifest.json");
  if (!out) {
    std::cerr << "error [io]: cannot write " << out_dir
              << "/run-manifest.json\n";
    return 3;
  }
  out << j.dump(2) << '\n';
  return 0;
}

// ---- shared option blocks --------------------------------------------------

struct FlowOpts {
  double reynolds = 500000.0;
  double mach = 0.0;
  double alpha_deg = 3.0;
  int iter_limit = 200;

  void attach(CLI::App* cmd) {
    cmd->add_option("--re", reynolds, "Reynolds number")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--mach", mach, "Mach number")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 0.99));
    cmd->add_option("--aoa", alpha_deg, "Angle of attack, degrees")
        ->capture_default_str()
        ->check(CLI::Range(-90.0, 90.0));
    cmd->add_option("--iter", iter_limit, "Solver iteration limit")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }

  fsp_flow to_c() const { return {reynolds, mach, alpha_deg, iter_limit}; }

  json to_json() const {
    return {{"re", reynolds},
            {"mach", mach},
            {"aoa", alpha_deg},
            {"iter", iter_limit}};
  }
};

struct EvalOpts {
  std::string evaluator = "surrogate";
  std::string xfoil_path;  // empty: FOILSPACE_XFOIL env, then "xfoil"
  double timeout_sec = 20.0;
  bool no_repanel = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--evaluator", evaluator,
                    "Performance evaluator: none|surrogate|xfoil")
        ->capture_default_str()
        ->check(CLI::IsMember(keys_of(kEvaluatorNames)));
    cmd->add_option("--xfoil-path", xfoil_path,
                    "XFOIL executable (default: FOILSPACE_XFOIL env or PATH)");
    cmd->add_option("--timeout", timeout_sec,
                    "External evaluation timeout, seconds")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--no-repanel", no_repanel,
                  "Skip XFOIL's PANE re-panel step");
  }

  fsp_evaluator kind() const { return kEvaluatorNames.at(evaluator); }
  const char* exe() const {
    return xfoil_path.empty() ? nullptr : xfoil_path.c_str();
  }

  json to_json() const {
    return {{"evaluator", evaluator},
            {"xfoil_path", xfoil_path},
            {"timeout", timeout_sec},
            {"no_repanel", no_repanel}};
  }
};

// ---- ingest ----------------------------------------------------------------

struct IngestOpts {
  std::string params_csv;
  std::string dat_dir;
  std::string scheme = "cosine";
  int n = 200;
  uint64_t seed = 1;
  bool no_dedupe = false;
  double dedupe_threshold = 1e-4;
  std::string out_dir = ".";
};

int run_ingest(const IngestOpts& o) {
  if (int rc = ensure_out_dir(o.out_dir)) return rc;

  fsp_dataset* raw = nullptr;
  if (!o.params_csv.empty()) {
    RUN_OR_FAIL(fsp_dataset_build_d1_csv(o.params_csv.c_str(),
                                         kSchemeNames.at(o.scheme), o.n,
                                         o.seed, &raw),
                "building the dataset from " + o.params_csv);
  } else {
    RUN_OR_FAIL(fsp_dataset_load_dir(o.dat_dir.c_str(),
                                     kSchemeNames.at(o.scheme), o.n, &raw),
                "loading coordinate files from " + o.dat_dir);
  }
  DatasetPtr ds(raw);

  int dropped = 0;
  if (!o.no_dedupe) {
    RUN_OR_FAIL(fsp_dataset_dedupe(ds.get(), o.dedupe_threshold, &dropped),
                "filtering near-duplicates");
  }

  const std::string csv = o.out_dir + "/dataset.csv";
  const std::string manifest = o.out_dir + "/dataset-manifest.json";
  RUN_OR_FAIL(fsp_dataset_write_csv(ds.get(), csv.c_str(), manifest.c_str()),
              "writing " + csv);

  const json config{{"params", o.params_csv}, {"dir", o.dat_dir},
                    {"scheme", o.scheme},     {"n", o.n},
                    {"seed", o.seed},         {"dedupe", !o.no_dedupe},
                    {"dedupe_threshold", o.dedupe_threshold}};
  if (int rc = write_run_manifest(o.out_dir, "ingest", config)) return rc;

  std::cout << "members=" << fsp_dataset_size(ds.get()) << " scheme="
            << o.scheme << " n=" << o.n << " dropped=" << dropped << "\n"
            << "wrote " << csv << "\n";
  return 0;
}

// ---- fit -------------------------------------------------------------------

std::string default_manifest_path(const std::string& dataset_csv) {
  std::string p = dataset_csv;
  const std::string suffix = ".csv";
  if (p.size() > suffix.size() &&
      p.compare(p.size() - suffix.size(), suffix.size(), suffix) == 0)
    p.resize(p.size() - suffix.size());
  return p + "-manifest.json";
}

struct FitOpts {
  std::string dataset_csv;
  std::string manifest;
  std::string variant = "r4";
  double weight = 0.0;  // <= 0: variance-equalizing default
  double beta = 0.95;
  std::string out_dir = ".";
  FlowOpts flow;
  EvalOpts eval;
};

int run_fit(const FitOpts& o) {
  if (int rc = ensure_out_dir(o.out_dir)) return rc;
  const std::string manifest =
      o.manifest.empty() ? default_manifest_path(o.dataset_csv) : o.manifest;

  fsp_dataset* raw = nullptr;
  RUN_OR_FAIL(fsp_dataset_read_csv(o.dataset_csv.c_str(), manifest.c_str(),
                                   &raw),
              "reading the dataset " + o.dataset_csv);
  DatasetPtr ds(raw);

  fsp_fit_options fo{};
  fo.aug = kVariantNames.at(o.variant);
  fo.weight = o.weight;
  fo.beta = o.beta;
  fo.evaluator = o.eval.kind();
  fo.flow = o.flow.to_c();
  fo.xfoil_path = o.eval.exe();
  fo.timeout_sec = o.eval.timeout_sec;
  fo.xfoil_no_repanel = o.eval.no_repanel ? 1 : 0;

  fsp_latent* lraw = nullptr;
  RUN_OR_FAIL(fsp_fit(ds.get(), &fo, &lraw), "fitting the latent space");
  LatentPtr latent(lraw);

  const std::string base = o.out_dir + "/latent";
  RUN_OR_FAIL(fsp_latent_save(latent.get(), base.c_str()),
              "saving the latent space to " + base + ".json");

  const json config{{"dataset", o.dataset_csv},
                    {"manifest", manifest},
                    {"variant", o.variant},
                    {"weight", o.weight},
                    {"beta", o.beta},
                    {"flow", o.flow.to_json()},
                    {"eval", o.eval.to_json()}};
  if (int rc = write_run_manifest(o.out_dir, "fit", config)) return rc;

  std::cout << "members=" << fsp_dataset_size(ds.get())
            << " ssv_length=" << fsp_latent_dim(latent.get())
            << " variant=" << o.variant
            << " weight=" << g17(fsp_latent_weight(latent.get())) << "\n"
            << "kappa=" << fsp_latent_kappa(latent.get())
            << " retained_fraction="
            << g17(fsp_latent_retained_fraction(latent.get())) << "\n"
            << "wrote " << base << ".json\n";
  return 0;
}

// ---- audit -----------------------------------------------------------------

struct AuditOpts {
  std::string latent_base;
  double alpha = 2.0;
  int count = 10000;
  int subsets = 10;
  uint64_t seed = 1;
  std::string out_dir = ".";
  FlowOpts flow;
  EvalOpts eval;
};

int run_audit(const AuditOpts& o) {
  if (int rc = ensure_out_dir(o.out_dir)) return rc;

  fsp_latent* lraw = nullptr;
  RUN_OR_FAIL(fsp_latent_load(o.latent_base.c_str(), &lraw),
              "loading the latent space " + o.latent_base);
  LatentPtr latent(lraw);

  fsp_audit_options ao{};
  ao.alpha = o.alpha;
  ao.count = o.count;
  ao.subsets = o.subsets;
  ao.seed = o.seed;
  ao.evaluator = o.eval.kind();
  ao.flow = o.flow.to_c();
  ao.xfoil_path = o.eval.exe();
  ao.timeout_sec = o.eval.timeout_sec;
  ao.xfoil_no_repanel = o.eval.no_repanel ? 1 : 0;

  fsp_report* rraw = nullptr;
  RUN_OR_FAIL(fsp_audit(latent.get(), &ao, &rraw), "auditing the space");
  ReportPtr report(rraw);

  const std::string report_path = o.out_dir + "/report.json";
  const std::string kde_path = o.out_dir + "/kde.csv";
  const std::string designs_path = o.out_dir + "/designs.csv";
  RUN_OR_FAIL(fsp_report_write_files(report.get(), report_path.c_str(),
                                     kde_path.c_str(), designs_path.c_str()),
              "writing the report files");

  const json config{{"latent", o.latent_base}, {"alpha", o.alpha},
                    {"count", o.count},        {"subsets", o.subsets},
                    {"seed", o.seed},          {"flow", o.flow.to_json()},
                    {"eval", o.eval.to_json()}};
  if (int rc = write_run_manifest(o.out_dir, "audit", config)) return rc;

  fsp_report_stats st{};
  fsp_report_get_stats(report.get(), &st);
  std::cout << "invalid_percent=" << g17(st.invalid_fraction * 100.0)
            << " diversity_mean=" << g17(st.diversity_mean)
            << " perf_mean=" << g17(st.perf_mean) << "\n"
            << "wrote " << report_path << "\n";
  return 0;
}

// ---- grid ------------------------------------------------------------------

struct GridOpts {
  std::string dataset_csv;
  std::string manifest;
  std::vector<std::string> variants{"none", "r4"};
  std::vector<std::string> schemes{"cosine", "uniform-point"};
  int n = 200;
  double weight = 0.0;
  double beta = 0.95;
  double alpha = 2.0;
  int count = 2000;
  int subsets = 10;
  uint64_t seed = 1;
  int jobs = 1;
  std::string out_dir = ".";
  FlowOpts flow;
  EvalOpts eval;
};

struct GridRow {
  std::string variant, scheme;
  bool ok = false;
  int ssv_length = 0;
  double weight = 0.0;
  int kappa = 0;
  double retained = 0.0;
  fsp_report_stats stats{};
  std::string error;
};

void run_grid_cell(const GridOpts& o, const fsp_dataset* base, GridRow& row) {
  const std::string cell_dir =
      o.out_dir + "/cell-" + row.variant + "-" + row.scheme;
  {
    std::error_code ec;
    fs::create_directories(cell_dir, ec);
    if (ec) {
      row.error = "cannot create " + cell_dir;
      return;
    }
  }

  fsp_dataset* dsraw = nullptr;
  if (fsp_dataset_resample(base, kSchemeNames.at(row.scheme), o.n, &dsraw) !=
      FSP_OK) {
    row.error = fsp_last_error();
    return;
  }
  DatasetPtr ds(dsraw);

  fsp_fit_options fo{};
  fo.aug = kVariantNames.at(row.variant);
  fo.weight = o.weight;
  fo.beta = o.beta;
  fo.evaluator = o.eval.kind();
  fo.flow = o.flow.to_c();
  fo.xfoil_path = o.eval.exe();
  fo.timeout_sec = o.eval.timeout_sec;
  fo.xfoil_no_repanel = o.eval.no_repanel ? 1 : 0;

  fsp_latent* lraw = nullptr;
  if (fsp_fit(ds.get(), &fo, &lraw) != FSP_OK) {
    row.error = fsp_last_error();
    return;
  }
  LatentPtr latent(lraw);
  row.ssv_length = fsp_latent_dim(latent.get());
  row.weight = fsp_latent_weight(latent.get());
  row.kappa = fsp_latent_kappa(latent.get());
  row.retained = fsp_latent_retained_fraction(latent.get());

  const std::string base_path = cell_dir + "/latent";
  if (fsp_latent_save(latent.get(), base_path.c_str()) != FSP_OK) {
    row.error = fsp_last_error();
    return;
  }

  fsp_audit_options ao{};
  ao.alpha = o.alpha;
  ao.count = o.count;
  ao.subsets = o.subsets;
  ao.seed = o.seed;
  ao.evaluator = o.eval.kind();
  ao.flow = o.flow.to_c();
  ao.xfoil_path = o.eval.exe();
  ao.timeout_sec = o.eval.timeout_sec;
  ao.xfoil_no_repanel = o.eval.no_repanel ? 1 : 0;

  fsp_report* rraw = nullptr;
  if (fsp_audit(latent.get(), &ao, &rraw) != FSP_OK) {
    row.error = fsp_last_error();
    return;
  }
  ReportPtr report(rraw);

  const std::string rj = cell_dir + "/report.json";
  const std::string rk = cell_dir + "/kde.csv";
  const std::string rd = cell_dir + "/designs.csv";
  if (fsp_report_write_files(report.get(), rj.c_str(), rk.c_str(),
                             rd.c_str()) != FSP_OK) {
    row.error = fsp_last_error();
    return;
  }
  fsp_report_get_stats(report.get(), &row.stats);
  row.ok = true;
}

int run_grid(const GridOpts& o) {
  if (int rc = ensure_out_dir(o.out_dir)) return rc;
  const std::string manifest =
      o.manifest.empty() ? default_manifest_path(o.dataset_csv) : o.manifest;

  fsp_dataset* raw = nullptr;
  RUN_OR_FAIL(fsp_dataset_read_csv(o.dataset_csv.c_str(), manifest.c_str(),
                                   &raw),
              "reading the dataset " + o.dataset_csv);
  DatasetPtr base(raw);

  // Grid index is variant-major; the summary preserves this order no matter
  // how the cells are scheduled.
  std::vector<GridRow> rows;
  for (const auto& v : o.variants)
    for (const auto& s : o.schemes) {
      GridRow r;
      r.variant = v;
      r.scheme = s;
      rows.push_back(std::move(r));
    }

  const int jobs = std::max(1, o.jobs);
  if (jobs == 1) {
    for (auto& row : rows) run_grid_cell(o, base.get(), row);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      while (true) {
        const size_t i = next.fetch_add(1);
        if (i >= rows.size()) break;
        run_grid_cell(o, base.get(), rows[i]);
      }
    };
    std::vector<std::thread> pool;
    const size_t n_threads =
        std::min<size_t>(static_cast<size_t>(jobs), rows.size());
    pool.reserve(n_threads);
    for (size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  const std::string summary_path = o.out_dir + "/summary.csv";
  {
    std::ofstream out(summary_path);
    if (!out) {
      std::cerr << "error [io]: cannot write " << summary_path << "\n";
      return 3;
    }
    out << "variant,scheme,n,count,status,ssv_length,weight,kappa,"
           "retained_fraction,invalid_percent,diversity_mean,diversity_min,"
           "diversity_max,perf_mean,perf_q1,perf_median,perf_q3,error\n";
    for (const auto& r : rows) {
      out << r.variant << ',' << r.scheme << ',' << o.n << ',' << o.count
          << ',';
      if (!r.ok) {
        out << "error,,,,,,,,,,,," << csv_safe(r.error) << "\n";
        continue;
      }
      out << "ok," << r.ssv_length << ',' << g17(r.weight) << ',' << r.kappa
          << ',' << g17(r.retained) << ','
          << g17(r.stats.invalid_fraction * 100.0) << ','
          << g17(r.stats.diversity_mean) << ',' << g17(r.stats.diversity_min)
          << ',' << g17(r.stats.diversity_max) << ',';
      if (r.stats.converged > 0) {
        out << g17(r.stats.perf_mean) << ',' << g17(r.stats.perf_q1) << ','
            << g17(r.stats.perf_median) << ',' << g17(r.stats.perf_q3);
      } else {
        out << ",,,";
      }
      out << ",\n";
    }
  }

  const json config{{"dataset", o.dataset_csv},
                    {"manifest", manifest},
                    {"variants", o.variants},
                    {"schemes", o.schemes},
                    {"n", o.n},
                    {"weight", o.weight},
                    {"beta", o.beta},
                    {"alpha", o.alpha},
                    {"count", o.count},
                    {"subsets", o.subsets},
                    {"seed", o.seed},
                    {"jobs", o.jobs},
                    {"flow", o.flow.to_json()},
                    {"eval", o.eval.to_json()}};
  if (int rc = write_run_manifest(o.out_dir, "grid", config)) return rc;

  int failed = 0;
  for (const auto& r : rows)
    if (!r.ok) ++failed;
  std::cout << "cells=" << rows.size() << " failed=" << failed << "\n"
            << "wrote " << summary_path << "\n";
  for (const auto& r : rows)
    if (!r.ok)
      std::cerr << "cell " << r.variant << "/" << r.scheme << " failed: "
                << r.error << "\n";
  return 0;  // per-cell failures are reported in the summary, not the exit code
}

// ---- export-plotdata -------------------------------------------------------

struct ExportOpts {
  std::string latent_base;
  int count = 10;
  uint64_t seed = 1;
  double alpha = 2.0;
  std::string out_dir = ".";
};

int run_export(const ExportOpts& o) {
  if (int rc = ensure_out_dir(o.out_dir)) return rc;

  fsp_latent* lraw = nullptr;
  RUN_OR_FAIL(fsp_latent_load(o.latent_base.c_str(), &lraw),
              "loading the latent space " + o.latent_base);
  LatentPtr latent(lraw);

  const int kappa = fsp_latent_kappa(latent.get());
  std::vector<double> ev(static_cast<size_t>(kappa));
  RUN_OR_FAIL(fsp_latent_eigenvalues(latent.get(), ev.data(), kappa),
              "reading the eigenvalue spectrum");
  const double total = fsp_latent_total_variance(latent.get());

  {
    std::ofstream out(o.out_dir + "/spectrum.csv");
    if (!out) return fail(FSP_ERR_IO, "writing spectrum.csv");
    out << "index,eigenvalue,fraction,cumulative_fraction\n";
    double cum = 0.0;
    for (int i = 0; i < kappa; ++i) {
      const double frac = total > 0.0 ? ev[static_cast<size_t>(i)] / total : 0.0;
      cum += frac;
      out << (i + 1) << ',' << g17(ev[static_cast<size_t>(i)]) << ','
          << g17(frac) << ',' << g17(cum) << "\n";
    }
  }

  {
    std::vector<double> low(static_cast<size_t>(kappa));
    std::vector<double> high(static_cast<size_t>(kappa));
    RUN_OR_FAIL(fsp_latent_bounds(latent.get(), o.alpha, low.data(),
                                  high.data(), kappa),
                "computing the latent bounds");
    std::ofstream out(o.out_dir + "/bounds.csv");
    if (!out) return fail(FSP_ERR_IO, "writing bounds.csv");
    out << "index,low,high\n";
    for (int i = 0; i < kappa; ++i)
      out << (i + 1) << ',' << g17(low[static_cast<size_t>(i)]) << ','
          << g17(high[static_cast<size_t>(i)]) << "\n";
  }

  {
    std::ofstream out(o.out_dir + "/foils.csv");
    if (!out) return fail(FSP_ERR_IO, "writing foils.csv");
    out << "name,point,x,y\n";

    auto dump = [&out](fsp_polyline* p) {
      const int n = fsp_polyline_size(p);
      std::vector<double> xy(static_cast<size_t>(2 * n));
      fsp_polyline_points(p, xy.data(), 2 * n);
      const std::string name = csv_safe(fsp_polyline_name(p));
      for (int i = 0; i < n; ++i)
        out << name << ',' << i << ',' << g17(xy[static_cast<size_t>(2 * i)])
            << ',' << g17(xy[static_cast<size_t>(2 * i + 1)]) << "\n";
    };

    // The decoded mean profile (u = 0), then the sampled designs.
    std::vector<double> zero(static_cast<size_t>(kappa), 0.0);
    fsp_polyline* mean_raw = nullptr;
    RUN_OR_FAIL(fsp_decode(latent.get(), zero.data(), kappa, &mean_raw),
                "decoding the mean profile");
    PolylinePtr mean(mean_raw);
    dump(mean.get());

    if (o.count > 0) {
      fsp_dataset* draw = nullptr;
      RUN_OR_FAIL(fsp_sample(latent.get(), o.alpha, o.count, o.seed, &draw),
                  "sampling designs");
      DatasetPtr samples(draw);
      for (int i = 0; i < fsp_dataset_size(samples.get()); ++i) {
        fsp_polyline* praw = nullptr;
        RUN_OR_FAIL(fsp_dataset_member(samples.get(), i, &praw),
                    "reading a sampled design");
        PolylinePtr p(praw);
        dump(p.get());
      }
    }
  }

  const json config{{"latent", o.latent_base},
                    {"count", o.count},
                    {"seed", o.seed},
                    {"alpha", o.alpha}};
  if (int rc = write_run_manifest(o.out_dir, "export-plotdata", config))
    return rc;

  std::cout << "kappa=" << kappa << " samples=" << o.count << "\n"
            << "wrote " << o.out_dir << "/spectrum.csv, bounds.csv, foils.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Latent design-space toolkit for foil profiles"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fsp_version()));
  app.set_config("--config", "",
                 "INI options file; one [section] per subcommand");

  IngestOpts ing;
  auto* c_ing = app.add_subcommand(
      "ingest", "Build the canonical dataset CSV from inputs");
  auto* opt_params =
      c_ing->add_option("--params", ing.params_csv,
                        "Design-vector CSV, 17 columns per row")
          ->check(CLI::ExistingFile);
  auto* opt_dir =
      c_ing->add_option("--dir", ing.dat_dir,
                        "Directory of coordinate (.dat) files")
          ->check(CLI::ExistingDirectory);
  opt_params->excludes(opt_dir);
  c_ing->add_option("--scheme", ing.scheme, "Spacing scheme")
      ->capture_default_str()
      ->check(CLI::IsMember(keys_of(kSchemeNames)));
  c_ing->add_option("--n", ing.n, "Points per profile")
      ->capture_default_str()
      ->check(CLI::Range(4, 100000));
  c_ing->add_option("--seed", ing.seed, "Random seed")->capture_default_str();
  c_ing->add_flag("--no-dedupe", ing.no_dedupe,
                  "Keep near-duplicate members");
  c_ing->add_option("--dedupe-threshold", ing.dedupe_threshold,
                    "Near-duplicate distance, chord units")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_ing->add_option("--out-dir", ing.out_dir, "Output directory")
      ->capture_default_str();

  FitOpts fit;
  auto* c_fit = app.add_subcommand(
      "fit", "Fit a latent space from a dataset CSV");
  c_fit->add_option("--dataset", fit.dataset_csv, "Dataset CSV")
      ->required()
      ->check(CLI::ExistingFile);
  c_fit->add_option("--manifest", fit.manifest,
                    "Dataset manifest JSON (default: <dataset>-manifest.json)");
  c_fit->add_option("--variant", fit.variant, "Signature-vector variant")
      ->capture_default_str()
      ->check(CLI::IsMember(keys_of(kVariantNames)));
  c_fit->add_option("--weight", fit.weight,
                    "Augmentation block weight; <=0 selects the "
                    "variance-equalizing default")
      ->capture_default_str();
  c_fit->add_option("--beta", fit.beta, "Retained-variance fraction")
      ->capture_default_str()
      ->check(CLI::Range(1e-9, 1.0));
  c_fit->add_option("--out-dir", fit.out_dir, "Output directory")
      ->capture_default_str();
  fit.flow.attach(c_fit);
  fit.eval.attach(c_fit);

  AuditOpts aud;
  auto* c_aud = app.add_subcommand(
      "audit", "Sample a latent space and score validity/diversity/performance");
  c_aud->add_option("--latent", aud.latent_base,
                    "Latent space base path (or its .json)")
      ->required();
  c_aud->add_option("--alpha", aud.alpha, "Latent box half-width multiplier")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_aud->add_option("--count", aud.count, "Sampled designs")
      ->capture_default_str()
      ->check(CLI::Range(2, 10000000));
  c_aud->add_option("--subsets", aud.subsets, "Diversity subsets")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_aud->add_option("--seed", aud.seed, "Random seed")->capture_default_str();
  c_aud->add_option("--out-dir", aud.out_dir, "Output directory")
      ->capture_default_str();
  aud.flow.attach(c_aud);
  aud.eval.attach(c_aud);

  GridOpts grid;
  auto* c_grid = app.add_subcommand(
      "grid", "Fit + audit across a variant x scheme grid");
  c_grid->add_option("--dataset", grid.dataset_csv, "Dataset CSV")
      ->required()
      ->check(CLI::ExistingFile);
  c_grid->add_option("--manifest", grid.manifest,
                     "Dataset manifest JSON (default: <dataset>-manifest.json)");
  c_grid->add_option("--variants", grid.variants, "Variants to cover")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::IsMember(keys_of(kVariantNames)));
  c_grid->add_option("--schemes", grid.schemes, "Schemes to cover")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::IsMember(keys_of(kSchemeNames)));
  c_grid->add_option("--n", grid.n, "Points per profile")
      ->capture_default_str()
      ->check(CLI::Range(4, 100000));
  c_grid->add_option("--weight", grid.weight, "Augmentation block weight")
      ->capture_default_str();
  c_grid->add_option("--beta", grid.beta, "Retained-variance fraction")
      ->capture_default_str()
      ->check(CLI::Range(1e-9, 1.0));
  c_grid->add_option("--alpha", grid.alpha, "Latent box half-width multiplier")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_grid->add_option("--count", grid.count, "Sampled designs per cell")
      ->capture_default_str()
      ->check(CLI::Range(2, 10000000));
  c_grid->add_option("--subsets", grid.subsets, "Diversity subsets")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_grid->add_option("--seed", grid.seed, "Random seed")->capture_default_str();
  c_grid->add_option("--jobs", grid.jobs, "Parallel grid cells")
      ->capture_default_str()
      ->check(CLI::Range(1, 256));
  c_grid->add_option("--out-dir", grid.out_dir, "Output directory")
      ->capture_default_str();
  grid.flow.attach(c_grid);
  grid.eval.attach(c_grid);

  ExportOpts exp;
  auto* c_exp = app.add_subcommand(
      "export-plotdata", "Write plot-ready CSVs for a latent space");
  c_exp->add_option("--latent", exp.latent_base,
                    "Latent space base path (or its .json)")
      ->required();
  c_exp->add_option("--count", exp.count, "Sampled designs to export")
      ->capture_default_str()
      ->check(CLI::Range(0, 1000000));
  c_exp->add_option("--seed", exp.seed, "Random seed")->capture_default_str();
  c_exp->add_option("--alpha", exp.alpha, "Latent box half-width multiplier")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c_exp->add_option("--out-dir", exp.out_dir, "Output directory")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // configuration / usage problem
  }

  if (c_ing->parsed()) {
    if (ing.params_csv.empty() && ing.dat_dir.empty()) {
      std::cerr << "error: ingest needs --params or --dir\n";
      return 2;
    }
    return run_ingest(ing);
  }
  if (c_fit->parsed()) return run_fit(fit);
  if (c_aud->parsed()) return run_audit(aud);
  if (c_grid->parsed()) return run_grid(grid);
  if (c_exp->parsed()) return run_export(exp);
  return 2;
}
