#ifndef PQGEOM_H
#define PQGEOM_H

/*
 * C interface to libpqgeom.
 *
 * Every function that can fail returns a pqg_status; on failure the message is
 * available from pqg_last_error() until the next call on the same thread.
 * Strings returned through char** are owned by the caller and released with
 * pqg_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pqg_status {
    PQG_OK = 0,
    PQG_ERR_PARSE = 1,      /* malformed expression */
    PQG_ERR_SPEC = 2,       /* spec text or file rejected */
    PQG_ERR_ARGUMENT = 3,   /* unknown name, bad option, wrong dimension */
    PQG_ERR_EVAL = 4,       /* pole or non-finite value */
    PQG_ERR_DEGENERATE = 5, /* singular metric or wrong signature */
    PQG_ERR_INTERNAL = 6
} pqg_status;

typedef struct pqg_spec pqg_spec;

typedef struct pqg_run_options {
    const char* checks; /* comma-separated names, NULL or "" for the default set */
    size_t points;      /* 0: the spec's sample_points */
    uint64_t seed;
    double tol_scale;
} pqg_run_options;

const char* pqg_version(void);
const char* pqg_last_error(void);

void pqg_run_options_init(pqg_run_options* opts);

pqg_status pqg_spec_load_file(const char* path, pqg_spec** out);
pqg_status pqg_spec_parse(const char* text, pqg_spec** out);
pqg_status pqg_catalog_get(const char* name, pqg_spec** out);
void pqg_spec_free(pqg_spec* spec);

size_t pqg_spec_dimension(const pqg_spec* spec);
pqg_status pqg_spec_emit(const pqg_spec* spec, char** text_out);

size_t pqg_catalog_count(void);
/* NULL when index is out of range. The pointer stays valid for the process lifetime. */
const char* pqg_catalog_name(size_t index);
pqg_status pqg_catalog_note(const char* name, char** text_out);

/* Comma-separated stable check names. */
const char* pqg_check_names(void);

/*
 * Runs checks and writes the report-v1 JSON document. exit_code receives
 * 0 (all hold), 1 (some check fails) or 2 (otherwise inconclusive).
 */
pqg_status pqg_run_checks(const pqg_spec* spec, const pqg_run_options* opts, char** json_out, int* exit_code);

/* Jet versus central finite differences; writes an oracle-v1 JSON record. */
pqg_status pqg_run_oracle(const pqg_spec* spec, const char* quantity, const double* point, size_t n, double step,
                          char** json_out);

void pqg_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
