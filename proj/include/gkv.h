/* C API of the gkv toolkit: opaque handles, integer status codes, JSON in
 * and out. The CLI is built exclusively on this surface. */
#ifndef GKV_H
#define GKV_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct gkv_spec gkv_spec;
typedef struct gkv_report gkv_report;

typedef enum gkv_status {
  GKV_OK = 0,
  GKV_E_SPEC = 2,      /* malformed spec / usage error */
  GKV_E_AMBIGUOUS = 3, /* ambiguous eigenvalue clustering */
  GKV_E_RUNTIME = 4,   /* evaluation failure (domain, singular metric, ...) */
} gkv_status;

typedef struct gkv_options {
  double tol_algebraic;  /* <= 0 keeps the default 1e-10 */
  double tol_derivative; /* <= 0 keeps the default 1e-8 */
  double cluster_tol;    /* <= 0 keeps the default 1e-6 */
  int grid_per_axis;     /* <= 0 keeps the spec's plan */
  int random_count;      /* <  0 keeps the spec's plan */
  long long seed;        /* <  0 keeps the spec's plan */
  int workers;           /* <= 0: GKV_WORKERS env or hardware */
} gkv_options;

void gkv_options_init(gkv_options* opt);

const char* gkv_version(void);

/* Message of the last failing call on this thread. */
const char* gkv_last_error(void);

gkv_status gkv_spec_load_file(const char* path, gkv_spec** out);
gkv_status gkv_spec_parse(const char* json_text, gkv_spec** out);

/* params: "key=value" strings, may be NULL when nparams == 0. */
gkv_status gkv_zoo_generate(const char* name, const char* const* params, size_t nparams,
                            gkv_spec** out);

/* Returns a malloc'd JSON string; free with gkv_string_free. */
gkv_status gkv_spec_to_json(const gkv_spec* spec, char** out);

void gkv_spec_free(gkv_spec* spec);

/* suite: validate | gk | identities | gauge | courant | eigendist | theorem |
 * fourdim | all */
gkv_status gkv_run_suite(const gkv_spec* spec, const char* suite, const gkv_options* opt,
                         gkv_report** out);

/* sections_json: {"pairs": [[section, section], ...]}, see the repo docs. */
gkv_status gkv_run_courant_sections(const gkv_spec* spec, const char* sections_json,
                                    const gkv_options* opt, gkv_report** out);

/* 1 when every executed check passed. */
int gkv_report_passed(const gkv_report* report);

gkv_status gkv_report_to_json(const gkv_report* report, char** out);
gkv_status gkv_report_summary(const gkv_report* report, char** out);

void gkv_report_free(gkv_report* report);
void gkv_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* GKV_H */
