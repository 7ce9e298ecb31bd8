/* C interface to the pbf safety-filter and level-set certification library.
 *
 * Every function returning pbf_status reports failure through the status code
 * and leaves a message retrievable with pbf_last_error() on the calling
 * thread. Objects are opaque handles released with the matching _free call;
 * the free functions accept NULL.
 */
#ifndef PBF_PBF_H
#define PBF_PBF_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(PBF_BUILDING_LIBRARY)
#define PBF_API __attribute__((visibility("default")))
#else
#define PBF_API
#endif

typedef enum pbf_status {
  PBF_OK = 0,
  PBF_ERR_INVALID_ARGUMENT = 1,
  PBF_ERR_VALIDATION = 2,
  PBF_ERR_INFEASIBLE = 3,
  PBF_ERR_INTEGRATION = 4,
  PBF_ERR_CERTIFICATE_UNAVAILABLE = 5,
  PBF_ERR_INVARIANT = 6,
  PBF_ERR_IO = 7,
  PBF_ERR_INTERNAL = 8
} pbf_status;

typedef enum pbf_equation {
  PBF_EQ_RCBF_UNDER = 0,
  PBF_EQ_RCBF_OVER = 1,
  PBF_EQ_ISSF = 2,
  PBF_EQ_ISSF_PBF = 3
} pbf_equation;

typedef struct pbf_scenario pbf_scenario;
typedef struct pbf_trajectory pbf_trajectory;
typedef struct pbf_certificate_set pbf_certificate_set;

#define PBF_NOTE_CAPACITY 256

typedef struct pbf_certificate {
  pbf_equation equation;
  int available; /* 0: note holds the reason */
  double h_star;
  double residual;
  int conditions_ok;
  int regular;
  char note[PBF_NOTE_CAPACITY]; /* annotation or error, truncated */
} pbf_certificate;

typedef struct pbf_sample {
  double t;
  double x1;
  double x2;
  double u;
  double F;
  double h;
  double sigma;
  double constraint_residual;
} pbf_sample;

typedef struct pbf_filter_result {
  double u;
  int active;
  int feasible;
  double slack;
} pbf_filter_result;

typedef struct pbf_monitor_result {
  double min_h;
  double min_h_time;
  double h_star_ref;
  int violated;
} pbf_monitor_result;

typedef struct pbf_criterion {
  int id;
  const char* name;
  int passed;
  const char* detail;
} pbf_criterion;

typedef void (*pbf_criterion_callback)(const pbf_criterion* result, void* user);

PBF_API const char* pbf_version(void);
PBF_API const char* pbf_status_string(pbf_status status);
PBF_API const char* pbf_last_error(void);
/* Field and line of the last validation error ("" and 0 if not applicable). */
PBF_API const char* pbf_last_error_field(void);
PBF_API int pbf_last_error_line(void);

/* Scenarios. Keys use the configuration file syntax, e.g. "sim.dt". */
PBF_API pbf_status pbf_scenario_new_default(pbf_scenario** out);
PBF_API pbf_status pbf_scenario_parse(const char* text, pbf_scenario** out);
PBF_API pbf_status pbf_scenario_load(const char* path, pbf_scenario** out);
PBF_API pbf_status pbf_scenario_set(pbf_scenario* scenario, const char* key,
                                    const char* value);
/* String outputs follow snprintf conventions: at most cap bytes including the
 * terminator are written and *needed (if non-NULL) receives the full length. */
PBF_API pbf_status pbf_scenario_get(const pbf_scenario* scenario, const char* key,
                                    char* buf, size_t cap, size_t* needed);
PBF_API pbf_status pbf_scenario_to_text(const pbf_scenario* scenario, char* buf,
                                        size_t cap, size_t* needed);
PBF_API void pbf_scenario_free(pbf_scenario* scenario);

/* Certificates. */
PBF_API pbf_status pbf_certify(const pbf_scenario* scenario,
                               pbf_certificate_set** out);
PBF_API size_t pbf_certificate_set_size(const pbf_certificate_set* set);
PBF_API pbf_status pbf_certificate_set_get(const pbf_certificate_set* set,
                                           size_t index, pbf_certificate* out);
/* Tightest available certificate; PBF_ERR_CERTIFICATE_UNAVAILABLE if none. */
PBF_API pbf_status pbf_certificate_set_reference(const pbf_certificate_set* set,
                                                 pbf_certificate* out);
PBF_API pbf_status pbf_certificate_set_write_csv(const pbf_certificate_set* set,
                                                 const char* path);
PBF_API pbf_status pbf_certificate_set_read_csv(const char* path,
                                                pbf_certificate_set** out);
PBF_API pbf_status pbf_certificate_set_to_text(const pbf_certificate_set* set,
                                               char* buf, size_t cap,
                                               size_t* needed);
PBF_API void pbf_certificate_set_free(pbf_certificate_set* set);

PBF_API pbf_status pbf_solve_hstar_rcbf(double alpha_c, double q1, double q2,
                                        double p_hat, double p,
                                        pbf_certificate* out);
PBF_API pbf_status pbf_solve_hstar_issf(double alpha_c, double eps0,
                                        double lambda, double p,
                                        pbf_certificate* out);
PBF_API pbf_status pbf_solve_hstar_issf_pbf(double alpha_c, double q1, double q2,
                                            double eps0, double lambda, double p,
                                            pbf_certificate* out);

/* Safety filter for the scenario's plant, barrier and compensation term.
 * Returns PBF_ERR_INFEASIBLE (with out->feasible = 0) when no input exists. */
PBF_API pbf_status pbf_safety_filter(const pbf_scenario* scenario, double t,
                                     const double x[2], double u_des,
                                     pbf_filter_result* out);

/* Closed-loop simulation. On PBF_ERR_INFEASIBLE or PBF_ERR_INTEGRATION *out
 * still receives the partial trajectory up to the failure. */
PBF_API pbf_status pbf_simulate(const pbf_scenario* scenario,
                                pbf_trajectory** out);
PBF_API size_t pbf_trajectory_size(const pbf_trajectory* traj);
PBF_API pbf_status pbf_trajectory_sample(const pbf_trajectory* traj, size_t index,
                                         pbf_sample* out);
PBF_API pbf_status pbf_trajectory_monitor(const pbf_trajectory* traj,
                                          double h_star, double tol,
                                          pbf_monitor_result* out);
PBF_API pbf_status pbf_trajectory_write_csv(const pbf_trajectory* traj,
                                            const char* path);
PBF_API void pbf_trajectory_free(pbf_trajectory* traj);

/* Parameter sweep; param is one of "p_hat", "eps0", "lambda", "F_bar". Writes
 * per-entry trajectories to out_dir (if non-NULL) and the aggregate table to
 * aggregate_path (if non-NULL). */
PBF_API pbf_status pbf_sweep(const pbf_scenario* scenario, const char* param,
                             const double* values, size_t count,
                             const char* out_dir, const char* aggregate_path);

/* Acceptance suite. *all_passed is set to 1 iff every criterion passed. */
PBF_API pbf_status pbf_verify(pbf_criterion_callback callback, void* user,
                              int* all_passed);

#ifdef __cplusplus
}
#endif

#endif /* PBF_PBF_H */
