/* C interface to the foilspace shared library.
 *
 * Every function that can fail returns fsp_status; FSP_OK is 0. On failure
 * fsp_last_error() returns a thread-local message describing what went wrong.
 * Objects returned through fsp_*_create/load/fit calls are owned by the
 * caller and released with the matching fsp_*_free. Strings returned through
 * char** out-parameters are released with fsp_string_free.
 */
#ifndef FOILSPACE_FOILSPACE_H
#define FOILSPACE_FOILSPACE_H

#include <stdint.h>

#ifndef FSP_API
#if defined(_WIN32)
#define FSP_API
#else
#define FSP_API __attribute__((visibility("default")))
#endif
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fsp_status {
  FSP_OK = 0,
  FSP_ERR_INVALID_ARGUMENT = 1,
  FSP_ERR_DOMAIN = 2,
  FSP_ERR_PARSE = 3,
  FSP_ERR_IO = 4,
  FSP_ERR_NUMERIC = 5,
  FSP_ERR_EXTERNAL = 6,
  FSP_ERR_TIMEOUT = 7
} fsp_status;

typedef enum fsp_scheme {
  FSP_SCHEME_UNIFORM_PARAMETRIC = 0,
  FSP_SCHEME_COSINE = 1,
  FSP_SCHEME_CURVATURE = 2,
  FSP_SCHEME_UNIFORM_POINT = 3
} fsp_scheme;

/* Shape-signature-vector variants: plain geometry, five invariant-moment
 * augmentations, or the lift-to-drag augmentation. */
typedef enum fsp_aug {
  FSP_AUG_NONE = 0,
  FSP_AUG_R2 = 1,
  FSP_AUG_R3 = 2,
  FSP_AUG_R4 = 3,
  FSP_AUG_R23 = 4,
  FSP_AUG_R234 = 5,
  FSP_AUG_PERF = 6
} fsp_aug;

typedef enum fsp_evaluator {
  FSP_EVAL_NONE = 0,
  FSP_EVAL_SURROGATE = 1,
  FSP_EVAL_XFOIL = 2
} fsp_evaluator;

typedef struct fsp_curve fsp_curve;
typedef struct fsp_polyline fsp_polyline;
typedef struct fsp_dataset fsp_dataset;
typedef struct fsp_latent fsp_latent;
typedef struct fsp_report fsp_report;

typedef struct fsp_flow {
  double reynolds;   /* > 0 */
  double mach;       /* [0, 1) */
  double alpha_deg;  /* [-90, 90] */
  int iter_limit;    /* >= 1 */
} fsp_flow;

typedef struct fsp_polar {
  double cl;
  double cd;
  double ld;
  int converged;
} fsp_polar;

typedef struct fsp_validity {
  int is_valid;
  int self_intersections;
  int undulations_upper;
  int undulations_lower;
} fsp_validity;

typedef struct fsp_fit_options {
  fsp_aug aug;
  double weight;  /* <= 0 selects the variance-equalizing default */
  double beta;    /* retained-variance fraction, (0, 1] */
  fsp_evaluator evaluator;  /* needed only for FSP_AUG_PERF */
  fsp_flow flow;
  const char* xfoil_path;   /* NULL: "xfoil" / FOILSPACE_XFOIL env */
  double timeout_sec;       /* <= 0: 20 s default */
  int xfoil_no_repanel;     /* nonzero skips the PANE re-panel step */
} fsp_fit_options;

typedef struct fsp_audit_options {
  double alpha;   /* latent box half-width in standard deviations, > 0 */
  int count;      /* sampled designs, >= 2 */
  int subsets;    /* diversity subsets, >= 1 */
  uint64_t seed;
  fsp_evaluator evaluator;
  fsp_flow flow;
  const char* xfoil_path;
  double timeout_sec;
  int xfoil_no_repanel;
} fsp_audit_options;

typedef struct fsp_report_stats {
  double invalid_fraction;
  double diversity_mean;
  double diversity_min;
  double diversity_max;
  double kernel_bandwidth;
  double perf_mean;
  double perf_q1;
  double perf_median;
  double perf_q3;
  int evaluated;
  int converged;
  int failed;
  double kde_bandwidth;
} fsp_report_stats;

FSP_API const char* fsp_version(void);
FSP_API const char* fsp_status_name(fsp_status s);

/* Message for the most recent failing call on this thread. */
FSP_API const char* fsp_last_error(void);
FSP_API void fsp_string_free(char* s);

/* Parametric foil curves. params17 holds 17 values in [0, 1]. */
FSP_API fsp_status fsp_foil_from_params(const double* params17,
                                        fsp_curve** out);
FSP_API fsp_status fsp_curve_domain(const fsp_curve* c, double* t0,
                                    double* t1);
FSP_API fsp_status fsp_curve_eval(const fsp_curve* c, double t, double* x,
                                  double* y);
FSP_API fsp_status fsp_curve_curvature(const fsp_curve* c, double t,
                                       double* kappa);
FSP_API fsp_status fsp_curve_arc_length(const fsp_curve* c, double t0,
                                        double t1, double abs_tol,
                                        double* out);
FSP_API void fsp_curve_free(fsp_curve* c);

/* Discretization and polylines. xy is x1,y1,...,xN,yN. */
FSP_API fsp_status fsp_discretize(const fsp_curve* c, fsp_scheme scheme, int n,
                                  fsp_polyline** out);
FSP_API fsp_status fsp_polyline_create(const double* xy, int n,
                                       const char* name, fsp_polyline** out);
FSP_API fsp_status fsp_polyline_parse(const char* text, fsp_polyline** out);
FSP_API fsp_status fsp_polyline_read(const char* path, fsp_polyline** out);
FSP_API fsp_status fsp_polyline_write(const fsp_polyline* p, const char* path);
FSP_API fsp_status fsp_polyline_resample(const fsp_polyline* p,
                                         fsp_scheme scheme, int n,
                                         fsp_polyline** out,
                                         double* hausdorff);
FSP_API int fsp_polyline_size(const fsp_polyline* p);
FSP_API int fsp_polyline_is_closed(const fsp_polyline* p);
FSP_API const char* fsp_polyline_name(const fsp_polyline* p);
FSP_API fsp_status fsp_polyline_points(const fsp_polyline* p, double* xy,
                                       int capacity);
FSP_API void fsp_polyline_free(fsp_polyline* p);

/* Scale- and translation-normalized region moments of the closed outline.
 * fsp_moment_vector writes the stacked vector for the given orders (each in
 * 2..8), ordered by ascending order then descending first index. */
FSP_API fsp_status fsp_invariant_moment(const fsp_polyline* p, int px, int qy,
                                        double* out);
FSP_API fsp_status fsp_moment_vector(const fsp_polyline* p, const int* orders,
                                     int n_orders, double* out, int capacity,
                                     int* written);

/* Validity and performance. */
FSP_API fsp_status fsp_check_validity(const fsp_polyline* p,
                                      fsp_validity* out);
FSP_API fsp_status fsp_eval_surrogate(const fsp_polyline* p,
                                      const fsp_flow* flow, fsp_polar* out);
FSP_API fsp_status fsp_eval_xfoil(const fsp_polyline* p, const fsp_flow* flow,
                                  const char* exe_path, double timeout_sec,
                                  fsp_polar* out);

/* Datasets. */
FSP_API fsp_status fsp_dataset_build_d1(const double* params, int n_bases,
                                        fsp_scheme scheme, int n,
                                        uint64_t seed, fsp_dataset** out);
FSP_API fsp_status fsp_dataset_build_d1_csv(const char* params_csv,
                                            fsp_scheme scheme, int n,
                                            uint64_t seed, fsp_dataset** out);
FSP_API fsp_status fsp_dataset_load_dir(const char* dir, fsp_scheme scheme,
                                        int n, fsp_dataset** out);
FSP_API fsp_status fsp_dataset_read_csv(const char* csv_path,
                                        const char* manifest_path,
                                        fsp_dataset** out);
FSP_API fsp_status fsp_dataset_write_csv(const fsp_dataset* d,
                                         const char* csv_path,
                                         const char* manifest_path);
FSP_API fsp_status fsp_dataset_resample(const fsp_dataset* d,
                                        fsp_scheme scheme, int n,
                                        fsp_dataset** out);
FSP_API fsp_status fsp_dataset_dedupe(fsp_dataset* d, double threshold,
                                      int* dropped);
FSP_API int fsp_dataset_size(const fsp_dataset* d);
FSP_API fsp_status fsp_dataset_member(const fsp_dataset* d, int index,
                                      fsp_polyline** out);
FSP_API void fsp_dataset_free(fsp_dataset* d);

/* Latent spaces. */
FSP_API fsp_status fsp_fit(const fsp_dataset* d, const fsp_fit_options* opt,
                           fsp_latent** out);
FSP_API fsp_status fsp_latent_save(const fsp_latent* l, const char* base_path);
FSP_API fsp_status fsp_latent_load(const char* base_path, fsp_latent** out);
FSP_API int fsp_latent_kappa(const fsp_latent* l);
FSP_API int fsp_latent_dim(const fsp_latent* l);
FSP_API double fsp_latent_retained_fraction(const fsp_latent* l);
FSP_API double fsp_latent_total_variance(const fsp_latent* l);
FSP_API double fsp_latent_weight(const fsp_latent* l);
FSP_API fsp_status fsp_latent_eigenvalues(const fsp_latent* l, double* out,
                                          int capacity);
FSP_API fsp_status fsp_latent_bounds(const fsp_latent* l, double alpha,
                                     double* low, double* high, int capacity);
FSP_API fsp_status fsp_decode(const fsp_latent* l, const double* u, int k,
                              fsp_polyline** out);
FSP_API fsp_status fsp_sample(const fsp_latent* l, double alpha, int count,
                              uint64_t seed, fsp_dataset** out);
FSP_API void fsp_latent_free(fsp_latent* l);

/* Latent-space audits. */
FSP_API fsp_status fsp_audit(const fsp_latent* l,
                             const fsp_audit_options* opt, fsp_report** out);
FSP_API fsp_status fsp_report_get_stats(const fsp_report* r,
                                        fsp_report_stats* out);
FSP_API fsp_status fsp_report_json(const fsp_report* r, char** out);
/* Any of the three paths may be NULL to skip that file. */
FSP_API fsp_status fsp_report_write_files(const fsp_report* r,
                                          const char* json_path,
                                          const char* kde_csv_path,
                                          const char* designs_csv_path);
FSP_API void fsp_report_free(fsp_report* r);

#ifdef __cplusplus
}
#endif

#endif /* FOILSPACE_FOILSPACE_H */
