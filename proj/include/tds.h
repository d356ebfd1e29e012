/* C API for the time-delay stability toolkit.
 *
 * All functions return tds_status; TDS_OK means success.  Objects are opaque
 * handles released with the matching *_free function.  Error details for the
 * calling thread are available from tds_last_error().
 */
#ifndef TDS_H
#define TDS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tds_status {
  TDS_OK = 0,
  TDS_ERR_INVALID_ARGUMENT = 1,
  TDS_ERR_PARSE = 2,
  TDS_ERR_IO = 3,
  TDS_ERR_NOT_STABLE = 4,
  TDS_ERR_AMBIGUOUS = 5,
  TDS_ERR_DIVERGED = 6,
  TDS_ERR_INTERNAL = 7
} tds_status;

typedef enum tds_theorem {
  TDS_THEOREM_41 = 0,
  TDS_THEOREM_42 = 1,
  TDS_COROLLARY_41 = 2
} tds_theorem;

typedef enum tds_verdict {
  TDS_FEASIBLE = 0,
  TDS_INFEASIBLE = 1,
  TDS_INCONCLUSIVE = 2
} tds_verdict;

typedef struct tds_system tds_system;

/* Thread-local message describing the most recent failure. */
const char* tds_last_error(void);

/* ---- system configuration -------------------------------------------- */

tds_status tds_system_from_json(const char* text, tds_system** out);
tds_status tds_system_from_file(const char* path, tds_system** out);
void tds_system_free(tds_system* sys);

/* JSON text of the system; caller frees with tds_string_free. */
tds_status tds_system_to_json(const tds_system* sys, char** out);

/* Bundled example configs "5.1".."5.4"; returns NULL for unknown names.
 * The pointer is owned by the library and stays valid. */
const char* tds_builtin_config(const char* name);

/* Delay overrides (constant-delay h, or interval bounds h1 <= h2). */
tds_status tds_system_set_delay(tds_system* sys, double h);
tds_status tds_system_set_delay_bounds(tds_system* sys, double h1, double h2);

/* ---- LMI feasibility analysis ----------------------------------------- */

typedef struct tds_analysis {
  tds_verdict verdict;
  double margin;          /* optimal slack variable of the feasibility SDP */
  int decision_variables; /* scalar decision-parameter count */
  int iterations;
  double wall_seconds;
} tds_analysis;

/* alpha is ignored for TDS_COROLLARY_41. */
tds_status tds_analyze(const tds_system* sys, tds_theorem theorem, double alpha,
                       tds_analysis* out);

/* Writes the feasibility problem in the sparse SDPA ".dat-s" format. */
tds_status tds_export_sdpa(const tds_system* sys, tds_theorem theorem,
                           double alpha, const char* path);

/* ---- searches ---------------------------------------------------------- */

typedef enum tds_search_mode {
  TDS_SEARCH_DECAY = 0,    /* max sigma = alpha/2 (Thm 4.1 or Thm 4.2)  */
  TDS_SEARCH_H2 = 1,       /* max upper delay bound (Corollary 4.1)     */
  TDS_SEARCH_INTERVAL = 2  /* feasible constant-delay interval (Thm 4.1) */
} tds_search_mode;

typedef struct tds_search_params {
  double tol;       /* bisection width */
  double alpha;     /* fixed alpha for interval mode */
  double alpha_hi;  /* decay-mode bracket ceiling */
  double lo, hi;    /* scan range: h for interval mode, h2 ceiling for h2 mode */
} tds_search_params;

/* Defaults: tol per mode (1e-4 decay, 1e-3 delays), alpha_hi 4, range [0.01, 10]. */
void tds_search_params_init(tds_search_params* params);

/* On success *report_json holds a JSON report
 * {"mode","status","result","bracket":[lo,hi],"checks":{...}}; caller frees
 * it with tds_string_free.  A NotStable outcome returns TDS_ERR_NOT_STABLE
 * and still fills the report. */
tds_status tds_search(const tds_system* sys, tds_search_mode mode,
                      const tds_search_params* params, char** report_json);

/* ---- simulation -------------------------------------------------------- */

/* Simulates with constant initial function phi (length n); writes a CSV
 * "t,x1,...,xn,env" when csv_path is non-NULL, and reports the envelope
 * supremum of e^{sigma t}|x(t)| and where it is attained. */
tds_status tds_simulate(const tds_system* sys, const double* phi, size_t phi_len,
                        double sigma, double horizon, double step,
                        const char* csv_path, double* sup_env, double* argmax_t);

void tds_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* TDS_H */
