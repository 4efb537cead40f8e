/* SPDX-License-Identifier: Apache-2.0
 *
 * C API for the bnproxy structure-learning library. All functions return a
 * bnp_status; on any nonzero status, bnp_last_error() holds a message for
 * the calling thread. Objects are opaque handles owned by the caller and
 * released with the matching *_free function.
 */
#ifndef BNPROXY_H
#define BNPROXY_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bnp_status {
  BNP_OK = 0,
  BNP_ERR_IO = 1,      /* file missing or unwritable */
  BNP_ERR_PARSE = 2,   /* malformed CSV/JSON input */
  BNP_ERR_INVALID = 3, /* invalid argument or contract violation */
  BNP_ERR_NUMERIC = 4, /* numerical failure (e.g. factorization) */
  BNP_ERR_INTERNAL = 5
} bnp_status;

typedef struct bnp_dataset bnp_dataset;
typedef struct bnp_graph bnp_graph;
typedef struct bnp_model bnp_model;

const char* bnp_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* bnp_last_error(void);

/* ---- datasets ------------------------------------------------------- */

/* CSV with a header row of names and integer-coded rows. arity_json_path
 * may be NULL; otherwise it names a JSON object {"name": arity, ...}. */
bnp_status bnp_dataset_load_csv(const char* csv_path, const char* arity_json_path,
                                bnp_dataset** out);
void bnp_dataset_free(bnp_dataset* d);
int64_t bnp_dataset_rows(const bnp_dataset* d);
int bnp_dataset_cols(const bnp_dataset* d);
int bnp_dataset_arity(const bnp_dataset* d, int col);
const char* bnp_dataset_name(const bnp_dataset* d, int col);
/* Writes the per-category counts of one column into out_counts (capacity
 * must be at least the column arity). */
bnp_status bnp_dataset_column_marginal(const bnp_dataset* d, int col, int64_t* out_counts,
                                       int capacity);

/* ---- graphs --------------------------------------------------------- */

bnp_status bnp_graph_create(int n, bnp_graph** out);
/* JSON document {"n": int, "edges": [[u, v], ...]}. */
bnp_status bnp_graph_load_json(const char* path, bnp_graph** out);
bnp_status bnp_graph_save_json(const bnp_graph* g, const char* path);
void bnp_graph_free(bnp_graph* g);
int bnp_graph_nodes(const bnp_graph* g);
int bnp_graph_edge_count(const bnp_graph* g);
/* Rejects duplicate edges and edges that would create a cycle. */
bnp_status bnp_graph_add_edge(bnp_graph* g, int u, int v);

/* ---- exact scores --------------------------------------------------- */

bnp_status bnp_score_bde(const bnp_dataset* d, const bnp_graph* g, double ess, double* out);
bnp_status bnp_score_bic(const bnp_dataset* d, const bnp_graph* g, double* out);

/* ---- proxy ----------------------------------------------------------- */

/* Samples ns random DAGs (edge probability p; p < 0 selects the default
 * min(0.5, 4/n)), scores them exactly, tunes the kernel weights by marginal
 * likelihood ascent, and fits the kriging model. */
bnp_status bnp_model_train(const bnp_dataset* d, int ns, double p, uint64_t seed, double ess,
                           bnp_model** out);
bnp_status bnp_model_save_json(const bnp_model* m, const char* path);
bnp_status bnp_model_load_json(const char* path, bnp_model** out);
bnp_status bnp_model_predict(const bnp_model* m, const bnp_graph* g, double* out);
void bnp_model_free(bnp_model* m);

/* ---- search ---------------------------------------------------------- */

/* Greedy hill climbing from the empty graph. mode is "exact" or "proxy";
 * proxy mode requires a model. max_steps < 0 selects the default bound.
 * When out_dir is non-NULL, trajectory.csv, final_graph.json, and
 * search.json are written there. record_exact additionally logs the exact
 * score after every step (proxy mode). The final graph's exact score is
 * stored in *out_exact_score, and the final graph in *out_final when
 * non-NULL. */
bnp_status bnp_search_greedy(const bnp_dataset* d, const char* mode, const bnp_model* model,
                             double ess, uint64_t seed, int max_steps, int record_exact,
                             const char* out_dir, bnp_graph** out_final, double* out_exact_score);

/* ---- smoothness sweeps ----------------------------------------------- */

/* pattern is "uniform" or "correspondence". Evaluates the extremal score
 * change at each grid size, fits |delta| ~ a ln N + b, and writes sweep.csv
 * and summary.json into out_dir when non-NULL. */
bnp_status bnp_smooth_sweep(const char* pattern, double lambda, const double* n_grid,
                            size_t n_grid_len, const char* out_dir, double* out_slope,
                            double* out_intercept, double* out_r2);

/* ---- benchmark -------------------------------------------------------- */

/* Runs the exact-vs-proxy benchmark described by a JSON config file and
 * writes result.json plus trajectories into out_dir. */
bnp_status bnp_bench_run(const char* config_json_path, const char* out_dir);

/* run_benchmark per n_s value taken from a comma-free int array; writes
 * ns_sweep.csv / ns_sweep.json into out_dir. */
bnp_status bnp_bench_ns_sweep(const char* config_json_path, const int* ns_values,
                              size_t ns_values_len, const char* out_dir);

/* Sign-agreement rate between proxy and exact single-edge score changes
 * over all legal moves from the empty graph plus probe_count sampled
 * graphs. */
bnp_status bnp_gradient_agreement(const bnp_dataset* d, const bnp_model* m, double ess,
                                  uint64_t seed, int probe_count, double* out_rate,
                                  int64_t* out_moves);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BNPROXY_H */
