#include "foilspace/foilspace.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "foilspace/curve.hpp"
#include "foilspace/discretize.hpp"
#include "foilspace/error.hpp"
#include "foilspace/ingest.hpp"
#include "foilspace/kle.hpp"
#include "foilspace/moments.hpp"
#include "foilspace/perf.hpp"
#include "foilspace/quality.hpp"
#include "foilspace/ssv.hpp"
#include "foilspace/types.hpp"

namespace fsp = foilspace;

struct fsp_curve {
  std::unique_ptr<fsp::ParametricCurve> impl;
};
struct fsp_polyline {
  fsp::PolylineFoil impl;
};
struct fsp_dataset {
  fsp::FoilDataset impl;
};
struct fsp_latent {
  fsp::LatentSpace impl;
};
struct fsp_report {
  fsp::QualityReport impl;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

fsp_status map_code(fsp::ErrorCode c) {
  switch (c) {
    case fsp::ErrorCode::InvalidArgument: return FSP_ERR_INVALID_ARGUMENT;
    case fsp::ErrorCode::Domain: return FSP_ERR_DOMAIN;
    case fsp::ErrorCode::Parse: return FSP_ERR_PARSE;
    case fsp::ErrorCode::Io: return FSP_ERR_IO;
    case fsp::ErrorCode::Numeric: return FSP_ERR_NUMERIC;
    case fsp::ErrorCode::External: return FSP_ERR_EXTERNAL;
    case fsp::ErrorCode::Timeout: return FSP_ERR_TIMEOUT;
  }
  return FSP_ERR_NUMERIC;
}

template <typename F>
fsp_status wrap(F&& body) noexcept {
  try {
    body();
    return FSP_OK;
  } catch (const fsp::Error& e) {
    set_error(e.what());
    return map_code(e.code());
  } catch (const std::exception& e) {
    set_error(e.what());
    return FSP_ERR_NUMERIC;
  } catch (...) {
    set_error("unknown failure");
    return FSP_ERR_NUMERIC;
  }
}

fsp_status arg_error(const char* msg) {
  set_error(msg);
  return FSP_ERR_INVALID_ARGUMENT;
}

fsp::Scheme to_scheme(fsp_scheme s) {
  switch (s) {
    case FSP_SCHEME_UNIFORM_PARAMETRIC: return fsp::Scheme::UniformParametric;
    case FSP_SCHEME_COSINE: return fsp::Scheme::Cosine;
    case FSP_SCHEME_CURVATURE: return fsp::Scheme::CurvatureBased;
    case FSP_SCHEME_UNIFORM_POINT: return fsp::Scheme::UniformPoint;
  }
  fsp::throw_error(fsp::ErrorCode::InvalidArgument, "unknown scheme value");
}

fsp::AugKind to_aug(fsp_aug a) {
  switch (a) {
    case FSP_AUG_NONE: return fsp::AugKind::None;
    case FSP_AUG_R2: return fsp::AugKind::R2;
    case FSP_AUG_R3: return fsp::AugKind::R3;
    case FSP_AUG_R4: return fsp::AugKind::R4;
    case FSP_AUG_R23: return fsp::AugKind::R23;
    case FSP_AUG_R234: return fsp::AugKind::R234;
    case FSP_AUG_PERF: return fsp::AugKind::Performance;
  }
  fsp::throw_error(fsp::ErrorCode::InvalidArgument, "unknown variant value");
}

fsp::FlowCondition to_flow(const fsp_flow* f) {
  fsp::FlowCondition fc;
  if (f != nullptr) {
    fc.reynolds = f->reynolds;
    fc.mach = f->mach;
    fc.alpha_deg = f->alpha_deg;
    fc.iter_limit = f->iter_limit;
  }
  return fc;
}

std::string resolve_xfoil_path(const char* exe_path) {
  if (exe_path != nullptr && *exe_path != '\0') return exe_path;
  const char* env = std::getenv("FOILSPACE_XFOIL");
  if (env != nullptr && *env != '\0') return env;
  return "xfoil";
}

fsp::PerfEvaluator build_evaluator(fsp_evaluator kind,
                                   const fsp::FlowCondition& fc,
                                   const char* exe_path, double timeout_sec,
                                   int no_repanel) {
  switch (kind) {
    case FSP_EVAL_NONE:
      return {};
    case FSP_EVAL_SURROGATE:
      return fsp::make_surrogate_evaluator(fc);
    case FSP_EVAL_XFOIL: {
      fsp::XfoilOptions xo;
      xo.exe_path = resolve_xfoil_path(exe_path);
      if (timeout_sec > 0.0) xo.timeout_sec = timeout_sec;
      xo.repanel = no_repanel == 0;
      return fsp::make_xfoil_evaluator(fc, xo);
    }
  }
  fsp::throw_error(fsp::ErrorCode::InvalidArgument, "unknown evaluator value");
}

const char* evaluator_name(fsp_evaluator kind) {
  switch (kind) {
    case FSP_EVAL_NONE: return "none";
    case FSP_EVAL_SURROGATE: return "surrogate";
    case FSP_EVAL_XFOIL: return "xfoil";
  }
  return "unknown";
}

}  // namespace

extern "C" {

const char* fsp_version(void) { return "0.1.0"; }

const char* fsp_status_name(fsp_status s) {
  switch (s) {
    case FSP_OK: return "ok";
    case FSP_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case FSP_ERR_DOMAIN: return "domain";
    case FSP_ERR_PARSE: return "parse";
    case FSP_ERR_IO: return "io";
    case FSP_ERR_NUMERIC: return "numeric";
    case FSP_ERR_EXTERNAL: return "external";
    case FSP_ERR_TIMEOUT: return "timeout";
  }
  return "unknown";
}

const char* fsp_last_error(void) { return g_last_error.c_str(); }

void fsp_string_free(char* s) { std::free(s); }

fsp_status fsp_foil_from_params(const double* params17, fsp_curve** out) {
  if (params17 == nullptr || out == nullptr)
    return arg_error("null argument to fsp_foil_from_params");
  return wrap([&] {
    const auto p =
        fsp::ParamVector::from(std::span<const double>(params17, 17));
    auto c = std::make_unique<fsp_curve>();
    c->impl = std::make_unique<fsp::NurbsCurve>(fsp::make_foil(p));
    *out = c.release();
  });
}

fsp_status fsp_curve_domain(const fsp_curve* c, double* t0, double* t1) {
  if (c == nullptr || t0 == nullptr || t1 == nullptr)
    return arg_error("null argument to fsp_curve_domain");
  *t0 = c->impl->t_min();
  *t1 = c->impl->t_max();
  return FSP_OK;
}

fsp_status fsp_curve_eval(const fsp_curve* c, double t, double* x, double* y) {
  if (c == nullptr || x == nullptr || y == nullptr)
    return arg_error("null argument to fsp_curve_eval");
  return wrap([&] {
    const fsp::Point2 p = c->impl->eval(t);
    *x = p.x;
    *y = p.y;
  });
}

fsp_status fsp_curve_curvature(const fsp_curve* c, double t, double* kappa) {
  if (c == nullptr || kappa == nullptr)
    return arg_error("null argument to fsp_curve_curvature");
  return wrap([&] { *kappa = c->impl->curvature(t); });
}

fsp_status fsp_curve_arc_length(const fsp_curve* c, double t0, double t1,
                                double abs_tol, double* out) {
  if (c == nullptr || out == nullptr)
    return arg_error("null argument to fsp_curve_arc_length");
  return wrap([&] {
    *out = c->impl->arc_length(t0, t1, abs_tol > 0.0 ? abs_tol : 1e-9);
  });
}

void fsp_curve_free(fsp_curve* c) { delete c; }

fsp_status fsp_discretize(const fsp_curve* c, fsp_scheme scheme, int n,
                          fsp_polyline** out) {
  if (c == nullptr || out == nullptr)
    return arg_error("null argument to fsp_discretize");
  return wrap([&] {
    auto p = std::make_unique<fsp_polyline>();
    p->impl = fsp::discretize(*c->impl, to_scheme(scheme), n);
    *out = p.release();
  });
}

fsp_status fsp_polyline_create(const double* xy, int n, const char* name,
                               fsp_polyline** out) {
  if (xy == nullptr || out == nullptr)
    return arg_error("null argument to fsp_polyline_create");
  return wrap([&] {
    auto p = std::make_unique<fsp_polyline>();
    p->impl.name = name != nullptr ? name : "";
    p->impl.points.reserve(static_cast<size_t>(n > 0 ? n : 0));
    for (int i = 0; i < n; ++i)
      p->impl.points.push_back(
          {xy[static_cast<size_t>(2 * i)], xy[static_cast<size_t>(2 * i + 1)]});
    fsp::validate_polyline(p->impl);
    *out = p.release();
  });
}

fsp_status fsp_polyline_parse(const char* text, fsp_polyline** out) {
  if (text == nullptr || out == nullptr)
    return arg_error("null argument to fsp_polyline_parse");
  return wrap([&] {
    auto p = std::make_unique<fsp_polyline>();
    p->impl = fsp::parse_dat(text);
    *out = p.release();
  });
}

fsp_status fsp_polyline_read(const char* path, fsp_polyline** out) {
  if (path == nullptr || out == nullptr)
    return arg_error("null argument to fsp_polyline_read");
  return wrap([&] {
    auto p = std::make_unique<fsp_polyline>();
    p->impl = fsp::read_dat(path);
    *out = p.release();
  });
}

fsp_status fsp_polyline_write(const fsp_polyline* p, const char* path) {
  if (p == nullptr || path == nullptr)
    return arg_error("null argument to fsp_polyline_write");
  return wrap([&] {
    std::ofstream out(path);
    if (!out) fsp::throw_error(fsp::ErrorCode::Io, std::string("cannot write ") + path);
    fsp::write_dat(p->impl, out);
    out.close();
    if (!out)
      fsp::throw_error(fsp::ErrorCode::Io, std::string("failed writing ") + path);
  });
}

int fsp_polyline_size(const fsp_polyline* p) {
  return p != nullptr ? p->impl.size() : 0;
}

int fsp_polyline_is_closed(const fsp_polyline* p) {
  return p != nullptr && p->impl.closed ? 1 : 0;
}

const char* fsp_polyline_name(const fsp_polyline* p) {
  return p != nullptr ? p->impl.name.c_str() : "";
}

fsp_status fsp_polyline_points(const fsp_polyline* p, double* xy,
                               int capacity) {
  if (p == nullptr || xy == nullptr)
    return arg_error("null argument to fsp_polyline_points");
  const int need = 2 * p->impl.size();
  if (capacity < need) return arg_error("buffer too small for the polyline");
  for (int i = 0; i < p->impl.size(); ++i) {
    xy[static_cast<size_t>(2 * i)] = p->impl.points[static_cast<size_t>(i)].x;
    xy[static_cast<size_t>(2 * i + 1)] =
        p->impl.points[static_cast<size_t>(i)].y;
  }
  return FSP_OK;
}

void fsp_polyline_free(fsp_polyline* p) { delete p; }

fsp_status fsp_polyline_resample(const fsp_polyline* p, fsp_scheme scheme,
                                 int n, fsp_polyline** out, double* hausdorff) {
  if (p == nullptr || out == nullptr)
    return arg_error("null argument to fsp_polyline_resample");
  return wrap([&] {
    auto r = fsp::resample_polyline(p->impl, to_scheme(scheme), n);
    auto q = std::make_unique<fsp_polyline>();
    q->impl = std::move(r.foil);
    if (hausdorff != nullptr) *hausdorff = r.hausdorff;
    *out = q.release();
  });
}

fsp_status fsp_invariant_moment(const fsp_polyline* p, int px, int qy,
                                double* out) {
  if (p == nullptr || out == nullptr)
    return arg_error("null argument to fsp_invariant_moment");
  return wrap([&] { *out = fsp::invariant_moment(p->impl, px, qy); });
}

fsp_status fsp_moment_vector(const fsp_polyline* p, const int* orders,
                             int n_orders, double* out, int capacity,
                             int* written) {
  if (p == nullptr || orders == nullptr || out == nullptr)
    return arg_error("null argument to fsp_moment_vector");
  return wrap([&] {
    const auto spec = fsp::MomentSpec::of_orders(
        std::vector<int>(orders, orders + n_orders));
    if (capacity < spec.count())
      fsp::throw_error(fsp::ErrorCode::InvalidArgument,
                       "buffer too small for the moment vector");
    const auto v = fsp::moment_vector(p->impl, spec);
    std::memcpy(out, v.data(), v.size() * sizeof(double));
    if (written != nullptr) *written = static_cast<int>(v.size());
  });
}

fsp_status fsp_check_validity(const fsp_polyline* p, fsp_validity* out) {
  if (p == nullptr || out == nullptr)
    return arg_error("null argument to fsp_check_validity");
  return wrap([&] {
    const fsp::ValidityReport r = fsp::check_validity(p->impl);
    out->is_valid = r.is_valid ? 1 : 0;
    out->self_intersections = r.self_intersections;
    out->undulations_upper = r.undulations_upper;
    out->undulations_lower = r.undulations_lower;
  });
}

fsp_status fsp_eval_surrogate(const fsp_polyline* p, const fsp_flow* flow,
                              fsp_polar* out) {
  if (p == nullptr || out == nullptr)
    return arg_error("null argument to fsp_eval_surrogate");
  return wrap([&] {
    const fsp::PolarPoint pp = fsp::surrogate_eval(p->impl, to_flow(flow));
    out->cl = pp.cl;
    out->cd = pp.cd;
    out->ld = pp.ld;
    out->converged = pp.converged ? 1 : 0;
  });
}

fsp_status fsp_eval_xfoil(const fsp_polyline* p, const fsp_flow* flow,
                          const char* exe_path, double timeout_sec,
                          fsp_polar* out) {
  if (p == nullptr || out == nullptr)
    return arg_error("null argument to fsp_eval_xfoil");
  return wrap([&] {
    fsp::XfoilOptions xo;
    xo.exe_path = resolve_xfoil_path(exe_path);
    if (timeout_sec > 0.0) xo.timeout_sec = timeout_sec;
    const fsp::PolarPoint pp = fsp::xfoil_eval(p->impl, to_flow(flow), xo);
    out->cl = pp.cl;
    out->cd = pp.cd;
    out->ld = pp.ld;
    out->converged = pp.converged ? 1 : 0;
  });
}

fsp_status fsp_dataset_build_d1(const double* params, int n_bases,
                                fsp_scheme scheme, int n, uint64_t seed,
                                fsp_dataset** out) {
  if (params == nullptr || out == nullptr)
    return arg_error("null argument to fsp_dataset_build_d1");
  return wrap([&] {
    std::vector<fsp::ParamVector> bases;
    bases.reserve(static_cast<size_t>(n_bases > 0 ? n_bases : 0));
    for (int i = 0; i < n_bases; ++i)
      bases.push_back(fsp::ParamVector::from(std::span<const double>(
          params + static_cast<size_t>(i) * fsp::ParamVector::kSize,
          fsp::ParamVector::kSize)));
    auto d = std::make_unique<fsp_dataset>();
    d->impl = fsp::build_dataset_d1(bases, to_scheme(scheme), n, seed);
    *out = d.release();
  });
}

fsp_status fsp_dataset_build_d1_csv(const char* params_csv, fsp_scheme scheme,
                                    int n, uint64_t seed, fsp_dataset** out) {
  if (params_csv == nullptr || out == nullptr)
    return arg_error("null argument to fsp_dataset_build_d1_csv");
  return wrap([&] {
    const auto bases = fsp::read_params_csv(params_csv);
    auto d = std::make_unique<fsp_dataset>();
    d->impl = fsp::build_dataset_d1(bases, to_scheme(scheme), n, seed);
    *out = d.release();
  });
}

fsp_status fsp_dataset_load_dir(const char* dir, fsp_scheme scheme, int n,
                                fsp_dataset** out) {
  if (dir == nullptr || out == nullptr)
    return arg_error("null argument to fsp_dataset_load_dir");
  return wrap([&] {
    auto d = std::make_unique<fsp_dataset>();
    d->impl = fsp::load_external_dataset(dir, to_scheme(scheme), n);
    *out = d.release();
  });
}

fsp_status fsp_dataset_read_csv(const char* csv_path,
                                const char* manifest_path, fsp_dataset** out) {
  if (csv_path == nullptr || manifest_path == nullptr || out == nullptr)
    return arg_error("null argument to fsp_dataset_read_csv");
  return wrap([&] {
    auto d = std::make_unique<fsp_dataset>();
    d->impl = fsp::read_dataset_csv(csv_path, manifest_path);
    *out = d.release();
  });
}

fsp_status fsp_dataset_write_csv(const fsp_dataset* d, const char* csv_path,
                                 const char* manifest_path) {
  if (d == nullptr || csv_path == nullptr || manifest_path == nullptr)
    return arg_error("null argument to fsp_dataset_write_csv");
  return wrap([&] { fsp::write_dataset_csv(d->impl, csv_path, manifest_path); });
}

fsp_status fsp_dataset_resample(const fsp_dataset* d, fsp_scheme scheme, int n,
                                fsp_dataset** out) {
  if (d == nullptr || out == nullptr)
    return arg_error("null argument to fsp_dataset_resample");
  return wrap([&] {
    auto r = std::make_unique<fsp_dataset>();
    r->impl.scheme = to_scheme(scheme);
    r->impl.common_n = n;
    r->impl.source_label = d->impl.source_label;
    r->impl.members.reserve(d->impl.members.size());
    for (const auto& m : d->impl.members)
      r->impl.members.push_back(
          fsp::resample_polyline(m, to_scheme(scheme), n).foil);
    *out = r.release();
  });
}

fsp_status fsp_dataset_dedupe(fsp_dataset* d, double threshold, int* dropped) {
  if (d == nullptr) return arg_error("null argument to fsp_dataset_dedupe");
  return wrap([&] {
    const int k = fsp::drop_near_duplicates(
        d->impl, threshold > 0.0 ? threshold : 1e-4);
    if (dropped != nullptr) *dropped = k;
  });
}

int fsp_dataset_size(const fsp_dataset* d) {
  return d != nullptr ? d->impl.size() : 0;
}

fsp_status fsp_dataset_member(const fsp_dataset* d, int index,
                              fsp_polyline** out) {
  if (d == nullptr || out == nullptr)
    return arg_error("null argument to fsp_dataset_member");
  if (index < 0 || index >= d->impl.size())
    return arg_error("dataset member index out of range");
  return wrap([&] {
    auto p = std::make_unique<fsp_polyline>();
    p->impl = d->impl.members[static_cast<size_t>(index)];
    *out = p.release();
  });
}

void fsp_dataset_free(fsp_dataset* d) { delete d; }

fsp_status fsp_fit(const fsp_dataset* d, const fsp_fit_options* opt,
                   fsp_latent** out) {
  if (d == nullptr || opt == nullptr || out == nullptr)
    return arg_error("null argument to fsp_fit");
  return wrap([&] {
    const fsp::AugKind aug = to_aug(opt->aug);
    fsp::PerfEvaluator eval;
    if (aug == fsp::AugKind::Performance)
      eval = build_evaluator(opt->evaluator, to_flow(&opt->flow),
                             opt->xfoil_path, opt->timeout_sec,
                             opt->xfoil_no_repanel);
    const fsp::PerfEvaluator* eval_ptr = eval ? &eval : nullptr;
    const auto dm = fsp::assemble_design_matrix(d->impl, aug, opt->weight,
                                                eval_ptr,
                                                /*fail_fast=*/false);
    auto l = std::make_unique<fsp_latent>();
    l->impl = fsp::fit_kle(dm, opt->beta);
    *out = l.release();
  });
}

fsp_status fsp_latent_save(const fsp_latent* l, const char* base_path) {
  if (l == nullptr || base_path == nullptr)
    return arg_error("null argument to fsp_latent_save");
  return wrap([&] { fsp::save_latent_space(l->impl, base_path); });
}

fsp_status fsp_latent_load(const char* base_path, fsp_latent** out) {
  if (base_path == nullptr || out == nullptr)
    return arg_error("null argument to fsp_latent_load");
  return wrap([&] {
    auto l = std::make_unique<fsp_latent>();
    l->impl = fsp::load_latent_space(base_path);
    *out = l.release();
  });
}

int fsp_latent_kappa(const fsp_latent* l) {
  return l != nullptr ? l->impl.kappa() : 0;
}

int fsp_latent_dim(const fsp_latent* l) {
  return l != nullptr ? static_cast<int>(l->impl.mean.size()) : 0;
}

double fsp_latent_retained_fraction(const fsp_latent* l) {
  if (l == nullptr || !(l->impl.total_variance > 0.0)) return 0.0;
  return l->impl.retained_variance() / l->impl.total_variance;
}

double fsp_latent_total_variance(const fsp_latent* l) {
  return l != nullptr ? l->impl.total_variance : 0.0;
}

double fsp_latent_weight(const fsp_latent* l) {
  return l != nullptr ? l->impl.layout.weight : 0.0;
}

fsp_status fsp_latent_eigenvalues(const fsp_latent* l, double* out,
                                  int capacity) {
  if (l == nullptr || out == nullptr)
    return arg_error("null argument to fsp_latent_eigenvalues");
  if (capacity < l->impl.kappa())
    return arg_error("buffer too small for the eigenvalues");
  for (int i = 0; i < l->impl.kappa(); ++i)
    out[static_cast<size_t>(i)] = l->impl.eigenvalues(i);
  return FSP_OK;
}

fsp_status fsp_latent_bounds(const fsp_latent* l, double alpha, double* low,
                             double* high, int capacity) {
  if (l == nullptr || low == nullptr || high == nullptr)
    return arg_error("null argument to fsp_latent_bounds");
  return wrap([&] {
    const auto b = fsp::latent_bounds(l->impl, alpha);
    if (capacity < b.low.size())
      fsp::throw_error(fsp::ErrorCode::InvalidArgument,
                       "buffer too small for the bounds");
    for (Eigen::Index i = 0; i < b.low.size(); ++i) {
      low[static_cast<size_t>(i)] = b.low(i);
      high[static_cast<size_t>(i)] = b.high(i);
    }
  });
}

fsp_status fsp_decode(const fsp_latent* l, const double* u, int k,
                      fsp_polyline** out) {
  if (l == nullptr || u == nullptr || out == nullptr)
    return arg_error("null argument to fsp_decode");
  return wrap([&] {
    Eigen::VectorXd uv =
        Eigen::Map<const Eigen::VectorXd>(u, static_cast<Eigen::Index>(k));
    auto p = std::make_unique<fsp_polyline>();
    p->impl = fsp::decode_foil(l->impl, uv);
    *out = p.release();
  });
}

fsp_status fsp_sample(const fsp_latent* l, double alpha, int count,
                      uint64_t seed, fsp_dataset** out) {
  if (l == nullptr || out == nullptr)
    return arg_error("null argument to fsp_sample");
  return wrap([&] {
    const auto lb = fsp::latent_bounds(l->impl, alpha);
    const auto samples = fsp::sample_latent(l->impl, lb, count, seed);
    auto d = std::make_unique<fsp_dataset>();
    d->impl.common_n = l->impl.layout.n_points;
    d->impl.source_label = "sampled";
    d->impl.members.reserve(samples.size());
    for (const auto& s : samples) d->impl.members.push_back(s.foil);
    *out = d.release();
  });
}

void fsp_latent_free(fsp_latent* l) { delete l; }

fsp_status fsp_audit(const fsp_latent* l, const fsp_audit_options* opt,
                     fsp_report** out) {
  if (l == nullptr || opt == nullptr || out == nullptr)
    return arg_error("null argument to fsp_audit");
  return wrap([&] {
    const fsp::FlowCondition fc = to_flow(&opt->flow);
    const fsp::PerfEvaluator eval = build_evaluator(
        opt->evaluator, fc, opt->xfoil_path, opt->timeout_sec,
        opt->xfoil_no_repanel);
    const auto lb = fsp::latent_bounds(l->impl, opt->alpha);
    fsp::AuditProtocol proto;
    proto.count = opt->count;
    proto.subsets = opt->subsets;
    proto.condition = fc;
    proto.seed = opt->seed;
    auto r = std::make_unique<fsp_report>();
    r->impl = fsp::audit_space(l->impl, lb, proto, eval,
                               evaluator_name(opt->evaluator));
    *out = r.release();
  });
}

fsp_status fsp_report_get_stats(const fsp_report* r, fsp_report_stats* out) {
  if (r == nullptr || out == nullptr)
    return arg_error("null argument to fsp_report_get_stats");
  const auto& q = r->impl;
  out->invalid_fraction = q.invalid_fraction;
  out->diversity_mean = q.diversity.mean;
  out->diversity_min = q.diversity.min;
  out->diversity_max = q.diversity.max;
  out->kernel_bandwidth = q.diversity.kernel_bandwidth;
  out->perf_mean = q.performance.mean;
  out->perf_q1 = q.performance.q1;
  out->perf_median = q.performance.median;
  out->perf_q3 = q.performance.q3;
  out->evaluated = q.performance.evaluated;
  out->converged = q.performance.converged;
  out->failed = q.performance.failed;
  out->kde_bandwidth = q.kde.bandwidth;
  return FSP_OK;
}

fsp_status fsp_report_json(const fsp_report* r, char** out) {
  if (r == nullptr || out == nullptr)
    return arg_error("null argument to fsp_report_json");
  return wrap([&] {
    const std::string s = fsp::report_to_json(r->impl);
    char* buf = static_cast<char*>(std::malloc(s.size() + 1));
    if (buf == nullptr)
      fsp::throw_error(fsp::ErrorCode::Numeric, "out of memory");
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
  });
}

fsp_status fsp_report_write_files(const fsp_report* r, const char* json_path,
                                  const char* kde_csv_path,
                                  const char* designs_csv_path) {
  if (r == nullptr) return arg_error("null argument to fsp_report_write_files");
  return wrap([&] {
    if (json_path != nullptr) fsp::write_report_json(r->impl, json_path);
    if (kde_csv_path != nullptr) fsp::write_kde_csv(r->impl, kde_csv_path);
    if (designs_csv_path != nullptr)
      fsp::write_designs_csv(r->impl, designs_csv_path);
  });
}

void fsp_report_free(fsp_report* r) { delete r; }

}  // extern "C"
