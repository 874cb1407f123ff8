/* geocut — approximate Euclidean max-cut engines behind a C interface.
 *
 * All objects are opaque handles created and destroyed by this library.
 * Functions return GEOCUT_OK on success; on any other status the handle
 * outputs are untouched and geocut_last_error() describes the failure for
 * the calling thread.
 */

#ifndef GEOCUT_GEOCUT_H_
#define GEOCUT_GEOCUT_H_

#include <stddef.h>

#if defined(_WIN32)
#define GEOCUT_API __declspec(dllexport)
#else
#define GEOCUT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum geocut_status {
  GEOCUT_OK = 0,
  GEOCUT_ERR_INVALID_ARGUMENT = 1,
  GEOCUT_ERR_IO = 2,
  GEOCUT_ERR_PARSE = 3,
  GEOCUT_ERR_DEGENERATE = 4,   /* e.g. all points equal */
  GEOCUT_ERR_TOO_LARGE = 5,    /* brute-force cap or desk-scale ceiling */
  GEOCUT_ERR_STATE = 6,        /* call sequence violation */
  GEOCUT_ERR_INTERNAL = 7
} geocut_status;

typedef struct geocut_dataset geocut_dataset;
typedef struct geocut_result geocut_result;

GEOCUT_API const char* geocut_status_name(geocut_status status);

/* Thread-local message for the most recent failure. */
GEOCUT_API const char* geocut_last_error(void);

/* ---- datasets ---------------------------------------------------------- */

/* Loads "one point per line" text with an optional "# d=.. p=.. delta=.."
 * header. */
GEOCUT_API geocut_status geocut_dataset_load(const char* path,
                                             geocut_dataset** out);

GEOCUT_API geocut_status geocut_dataset_parse(const char* text,
                                              geocut_dataset** out);

/* Deterministic generators: "uniform-grid:<delta>:<d>:<n>",
 * "gaussian-clusters:<k>:<sigma>:<n>", "simplex:<n>". key_hex may be NULL for
 * OS entropy. */
GEOCUT_API geocut_status geocut_dataset_generate(const char* spec,
                                                 const char* key_hex,
                                                 geocut_dataset** out);

GEOCUT_API geocut_status geocut_dataset_save(const geocut_dataset* ds,
                                             const char* path);

GEOCUT_API size_t geocut_dataset_size(const geocut_dataset* ds);
GEOCUT_API size_t geocut_dataset_dim(const geocut_dataset* ds);

GEOCUT_API void geocut_dataset_free(geocut_dataset* ds);

/* ---- experiments ------------------------------------------------------- */

/* config_json keys: backend ("ref"|"mpc"|"stream-insert"|"stream-dynamic"|
 * "oracle"), epsilon, weights ("exact"|"sketched:<e>:<d>"|"dynamic:<D>"),
 * repetitions, seed (hex), machines, words, D, eps_pr, n_hint,
 * oracle_compare, query_all, brute_cap, seed_cap. */
GEOCUT_API geocut_status geocut_run_dataset(const geocut_dataset* ds,
                                            const char* config_json,
                                            geocut_result** out);

/* Stream text: lines "+ c1 .. cd" / "- c1 .. cd" with the same optional
 * header; needed by the stream-insert and stream-dynamic backends. */
GEOCUT_API geocut_status geocut_run_stream(const char* stream_text,
                                           const char* config_json,
                                           geocut_result** out);

/* Borrowed pointers, valid until geocut_result_free. */
GEOCUT_API const char* geocut_result_json(const geocut_result* result);
GEOCUT_API const char* geocut_result_csv(const geocut_result* result);

GEOCUT_API void geocut_result_free(geocut_result* result);

/* Merges the "rows" arrays of several result JSONs into one CSV; the caller
 * frees the returned buffer with geocut_string_free. */
GEOCUT_API geocut_status geocut_merge_reports(const char* const* report_jsons,
                                              size_t count, char** out_csv);

GEOCUT_API void geocut_string_free(char* text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GEOCUT_GEOCUT_H_ */
