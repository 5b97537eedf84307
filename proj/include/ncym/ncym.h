/* C interface to the ncym library. All functions are thread-safe on distinct handles;
 * ncym_last_error() is per thread. Strings returned through char** are freed with ncym_string_free. */
#ifndef NCYM_H
#define NCYM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NCYM_BUILDING_LIBRARY)
#    define NCYM_API __declspec(dllexport)
#  else
#    define NCYM_API __declspec(dllimport)
#  endif
#else
#  define NCYM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  NCYM_OK = 0,
  NCYM_ERR_NULL = 1,      /* required pointer argument was NULL */
  NCYM_ERR_DIMENSION = 2, /* algebra sizes disagree or are unsupported */
  NCYM_ERR_GRADE = 3,     /* wrong form degree */
  NCYM_ERR_DOMAIN = 4,    /* argument outside the operation's domain */
  NCYM_ERR_CONFIG = 5,    /* malformed run configuration */
  NCYM_ERR_IO = 6,
  NCYM_ERR_INTERNAL = 7
} ncym_status;

typedef enum { NCYM_LEFT = 0, NCYM_RIGHT = 1 } ncym_side;
typedef enum { NCYM_PROBLEM_YM = 0, NCYM_PROBLEM_SM = 1, NCYM_PROBLEM_YMSM = 2 } ncym_problem;
typedef enum { NCYM_STEP_GRADIENT_DESCENT = 0, NCYM_STEP_GAUSS_NEWTON = 1 } ncym_step_rule;

typedef struct ncym_form ncym_form;
typedef struct ncym_config ncym_config;

NCYM_API const char* ncym_version(void);
NCYM_API const char* ncym_ledger_id(void);
/* Message for the last failing call on this thread; "" if none. */
NCYM_API const char* ncym_last_error(void);
NCYM_API void ncym_string_free(char* s);

/* ---- differential forms on M_N, N = 2..4 ----
 * Coefficients are N×N matrices passed as 2N² doubles: row-major, (re, im) pairs.
 * Index strings list generator numbers: "" (grade 0), "1", "23", "123"; comma separated when N ≥ 4. */
NCYM_API ncym_status ncym_form_create(int n, ncym_form** out);
NCYM_API void ncym_form_destroy(ncym_form* f);
NCYM_API ncym_status ncym_form_clone(const ncym_form* f, ncym_form** out);
NCYM_API ncym_status ncym_form_algebra_size(const ncym_form* f, int* out);
NCYM_API ncym_status ncym_form_set(ncym_form* f, const char* index, const double* entries);
NCYM_API ncym_status ncym_form_get(const ncym_form* f, const char* index, double* entries);
/* −1 for the zero form; NCYM_ERR_GRADE for mixed degrees. */
NCYM_API ncym_status ncym_form_grade(const ncym_form* f, int* out);
NCYM_API ncym_status ncym_form_add(const ncym_form* a, const ncym_form* b, ncym_form** out);
NCYM_API ncym_status ncym_form_scale(const ncym_form* a, double re, double im, ncym_form** out);
NCYM_API ncym_status ncym_form_wedge(const ncym_form* a, const ncym_form* b, ncym_form** out);
NCYM_API ncym_status ncym_form_differential(const ncym_form* a, ncym_form** out);
NCYM_API ncym_status ncym_form_star(const ncym_form* a, ncym_form** out);
NCYM_API ncym_status ncym_form_hodge(const ncym_form* a, ncym_side side, ncym_form** out);
NCYM_API ncym_status ncym_form_hodge_inverse(const ncym_form* a, ncym_side side, ncym_form** out);
NCYM_API ncym_status ncym_form_codifferential(const ncym_form* a, ncym_side side, ncym_form** out);
NCYM_API ncym_status ncym_form_laplacian(const ncym_form* a, ncym_side side, ncym_form** out);
/* out[0] + i·out[1] = ∫⟨a, b⟩ dvol. */
NCYM_API ncym_status ncym_form_hodge_inner(const ncym_form* a, const ncym_form* b, ncym_side side, double out[2]);
NCYM_API ncym_status ncym_form_to_json(const ncym_form* f, char** out);

/* ---- field configurations: gauge potential A, charge n, sections q1 (charge n) and q2 (charge −n), V ---- */
NCYM_API ncym_status ncym_config_create(const ncym_form* a, int charge, const double* q1, const double* q2,
                                        const double* potential, size_t n_coefficients, ncym_config** out);
NCYM_API void ncym_config_destroy(ncym_config* c);
/* ym: real; gsm: (re, im). */
NCYM_API ncym_status ncym_config_actions(const ncym_config* c, double* ym, double gsm[2]);
/* Connection residual of the coupled equations (the Yang–Mills residual when n = 0). */
NCYM_API ncym_status ncym_config_connection_residual(const ncym_config* c, ncym_form** out);
NCYM_API ncym_status ncym_config_ym_residual(const ncym_config* c, ncym_form** out);
/* Section residuals as 2N² doubles each. */
NCYM_API ncym_status ncym_config_section_residuals(const ncym_config* c, double* left, double* right);
NCYM_API ncym_status ncym_config_continuity_norm(const ncym_config* c, double* out);
/* FieldReport JSON for the given problem with `samples` seeded gradient checks per equation. */
NCYM_API ncym_status ncym_config_evaluate(const ncym_config* c, ncym_problem problem, uint64_t seed, int samples,
                                          char** report_json);
NCYM_API ncym_status ncym_config_to_json(const ncym_config* c, char** out);

/* Stationary-point search. `out` and `report_json` may be NULL. *converged is 0 or 1. */
NCYM_API ncym_status ncym_solve(const ncym_config* start, ncym_problem problem, ncym_step_rule rule, double tolerance,
                                long max_iterations, uint64_t seed, ncym_config** out, char** report_json,
                                int* converged);

/* Eigenvalues of the Laplace–de Rham operator on grade-k forms, ascending. Writes at most `capacity`
 * values and the full count into *count. */
NCYM_API ncym_status ncym_spectrum(int n, int grade, ncym_side side, double* eigenvalues, size_t capacity,
                                   size_t* count);

/* Runs verify/solve/spectrum from a JSON config (may be "" or NULL) with JSON overrides (may be NULL).
 * *exit_code receives 0, 1 or 2; *message (optional) a one-line summary or diagnostic.
 * Returns NCYM_ERR_CONFIG when the configuration is rejected (exit code 2). */
NCYM_API ncym_status ncym_run(const char* config_json, const char* source_name, const char* overrides_json,
                              int* exit_code, char** message);

#ifdef __cplusplus
}
#endif

#endif /* NCYM_H */
