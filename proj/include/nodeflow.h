/* C interface to the node flow solver. All objects are opaque handles owned
 * by the library; every function that can fail returns an nf_status, with a
 * human-readable message available from nf_last_error() (thread-local).
 * Strings returned as char* must be released with nf_string_free(). */

#ifndef NODEFLOW_H
#define NODEFLOW_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nf_status {
  NF_OK = 0,
  NF_ERROR_PARSE = 1,
  NF_ERROR_VALIDATION = 2,
  NF_ERROR_DIMENSION = 3,
  NF_ERROR_ARGUMENT = 4,
  NF_ERROR_INTERNAL = 5
} nf_status;

typedef enum nf_automaton {
  NF_AUTOMATON_AUTO = 0,
  NF_AUTOMATON_GENERAL = 1,
  NF_AUTOMATON_MERGE = 2,
  NF_AUTOMATON_DIVERGE = 3
} nf_automaton;

typedef struct nf_spec nf_spec;     /* junction snapshot */
typedef struct nf_result nf_result; /* flows plus trajectory */
typedef struct nf_report nf_report; /* verification report */

typedef struct nf_fuzz_config {
  uint64_t seed;
  int max_inputs;
  int max_outputs;
  int max_classes;
  double demand_max;
  double priority_min;
  double priority_max;
  double supply_factor;
  double relax_probability;
} nf_fuzz_config;

/* Last error message for the calling thread; empty string when none. */
const char* nf_last_error(void);
void nf_string_free(char* s);

/* --- specs ------------------------------------------------------------- */

nf_status nf_spec_parse(const char* text, nf_spec** out);
void nf_spec_free(nf_spec* spec);
int nf_spec_inputs(const nf_spec* spec);
int nf_spec_outputs(const nf_spec* spec);
int nf_spec_classes(const nf_spec* spec);
double nf_spec_supply(const nf_spec* spec, int output);
/* Scenario document for the spec (round-trips through nf_spec_parse). */
char* nf_spec_write(const nf_spec* spec);

/* Source text of a built-in scenario (static storage, do not free), or NULL
 * for an unknown name. */
const char* nf_builtin_scenario(const char* name);

void nf_fuzz_config_default(nf_fuzz_config* config);
nf_status nf_spec_random(const nf_fuzz_config* config, uint64_t index, nf_spec** out);

/* --- solving ----------------------------------------------------------- */

nf_status nf_solve(const nf_spec* spec, nf_result** out);
nf_status nf_solve_automaton(const nf_spec* spec, nf_automaton automaton, nf_result** out);
/* Dense fixed-step integration; max_time <= 0 selects the default horizon. */
nf_status nf_oracle(const nf_spec* spec, double dt, double max_time, nf_result** out);

void nf_result_free(nf_result* result);
double nf_result_flow(const nf_result* result, int input, int output, int cls);
/* Copies the flattened flow matrix (input-major, then output, then class);
 * len must equal inputs*outputs*classes. */
nf_status nf_result_flows(const nf_result* result, double* out, size_t len);
size_t nf_result_breakpoint_count(const nf_result* result);
/* Max-norm distance between two results' flows; negative on mismatch. */
double nf_flow_distance(const nf_result* a, const nf_result* b);

/* Flow document (JSON) including trajectory breakpoints. */
char* nf_result_flows_text(const nf_spec* spec, const nf_result* result, int pretty);
/* Delimited trajectory rows: t, mode bitmask, flattened state. */
char* nf_result_trajectory_csv(const nf_result* result);

/* --- verification ------------------------------------------------------ */

/* Parses a flow document against the spec's dimensions into out
 * (inputs*outputs*classes entries). */
nf_status nf_flows_parse(const nf_spec* spec, const char* text, double* out, size_t len);
/* Certifies a flow matrix against every constraint applicable to the spec. */
nf_status nf_certify(const nf_spec* spec, const double* flows, size_t len, nf_report** out);

int nf_report_passed(const nf_report* report);
char* nf_report_text(const nf_report* report);
void nf_report_free(nf_report* report);

#ifdef __cplusplus
}
#endif

#endif /* NODEFLOW_H */
