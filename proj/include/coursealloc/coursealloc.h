/*
Copyright 2026 The coursealloc Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

/*
 * C interface to the course allocation library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every call returns a ca_status; on failure ca_last_error() describes the
 * problem (per thread, valid until the next call on that thread). Strings
 * returned through char** outputs are heap allocated and released with
 * ca_string_free. Documents are exchanged as JSON text.
 */

#ifndef COURSEALLOC_COURSEALLOC_H_
#define COURSEALLOC_COURSEALLOC_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CA_API __declspec(dllexport)
#else
#define CA_API __attribute__((visibility("default")))
#endif

typedef enum ca_status {
  CA_OK = 0,
  CA_ERR_ARGUMENT = 1,        /* null pointer or invalid option */
  CA_ERR_DATA = 3,            /* malformed or inconsistent input data */
  CA_ERR_NOT_CONVERGED = 4,   /* result produced, but a limit was hit */
  CA_ERR_INTERNAL = 5,
  CA_ERR_NO_MEMORY = 6
} ca_status;

typedef struct ca_instance ca_instance;
typedef struct ca_profile ca_profile;
typedef struct ca_assignment ca_assignment;
typedef struct ca_lottery ca_lottery;

CA_API const char* ca_version(void);
CA_API const char* ca_last_error(void);
CA_API void ca_string_free(char* s);

/* Instances. */
CA_API ca_status ca_instance_load(const char* json, ca_instance** out);
CA_API ca_status ca_instance_to_json(const ca_instance* instance, char** out);
CA_API int ca_instance_num_students(const ca_instance* instance);
CA_API int ca_instance_num_classes(const ca_instance* instance);
CA_API int ca_instance_num_groups(const ca_instance* instance);
CA_API void ca_instance_free(ca_instance* instance);

/* Generator: config JSON to an instance and per-student parameters. */
CA_API ca_status ca_generate(const char* config_json, ca_instance** instance,
                             char** params_json);

/* Elicitation: one ranking per student. summary_json (optional) reports
 * list lengths, empty rankings and distinct bundles. */
CA_API ca_status ca_elicit(const ca_instance* instance, const char* params_json,
                           int threads, ca_profile** out, char** summary_json);

/* Preference profiles. */
CA_API ca_status ca_profile_load(const ca_instance* instance, const char* json,
                                 ca_profile** out);
CA_API ca_status ca_profile_to_json(const ca_instance* instance,
                                    const ca_profile* profile, char** out);
CA_API void ca_profile_free(ca_profile* profile);

/* Mechanisms. trace_json (optional) receives the eating events. */
CA_API ca_status ca_match_bps(const ca_instance* instance, const ca_profile* profile,
                              ca_assignment** out, char** trace_json);
CA_API ca_status ca_match_brsd_estimate(const ca_instance* instance,
                                        const ca_profile* profile, uint64_t reps,
                                        uint64_t seed, int threads,
                                        ca_assignment** out);
CA_API ca_status ca_match_brsd_exact(const ca_instance* instance,
                                     const ca_profile* profile, ca_assignment** out);

/* Fractional assignments. decimal != 0 writes probabilities as numbers. */
CA_API ca_status ca_assignment_load(const ca_instance* instance, const char* json,
                                    ca_assignment** out);
CA_API ca_status ca_assignment_to_json(const ca_instance* instance,
                                       const ca_assignment* assignment, int decimal,
                                       char** out);
CA_API ca_status ca_assignment_check(const ca_instance* instance,
                                     const ca_assignment* assignment, char** report_json);
CA_API void ca_assignment_free(ca_assignment* assignment);

/* Lottery decomposition. config_json keys: epsilon, delta, alpha,
 * maxIterations, arithmetic ("auto", "exact", "float"), strictProbe. Returns
 * CA_ERR_NOT_CONVERGED with *out set when a limit was hit. */
CA_API ca_status ca_lottery_decompose(const ca_instance* instance,
                                      const ca_assignment* assignment,
                                      const char* config_json, ca_lottery** out,
                                      char** report_json);
CA_API ca_status ca_lottery_load(const ca_instance* instance, const char* json,
                                 ca_lottery** out);
CA_API ca_status ca_lottery_to_json(const ca_instance* instance,
                                    const ca_lottery* lottery, char** out);
/* profile may be null; the average-rank column is then empty. */
CA_API ca_status ca_lottery_support_csv(const ca_lottery* lottery,
                                        const ca_profile* profile, char** out);
CA_API ca_status ca_lottery_stats(const ca_instance* instance, const ca_lottery* lottery,
                                  char** report_json);
CA_API ca_status ca_lottery_draw(const ca_instance* instance, const ca_lottery* lottery,
                                 uint64_t seed, uint64_t index, size_t* support_index,
                                 char** matching_json);
CA_API void ca_lottery_free(ca_lottery* lottery);

/* Metrics. against may be null. options_json keys: topK (list), ranks,
 * envy (bool). csv (optional) receives the rank profile table. */
CA_API ca_status ca_metrics(const ca_instance* instance, const ca_profile* profile,
                            const ca_assignment* assignment,
                            const ca_assignment* against, const char* options_json,
                            char** report_json, char** csv);

/* Revealed-preference test on a single ranking (profile document).
 * student may be null when the document holds one ranking; gamma is a
 * decimal or fraction string. */
CA_API ca_status ca_rev(const char* ranking_json, const char* student, const char* gamma,
                        int exact, char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* COURSEALLOC_COURSEALLOC_H_ */
