/* Copyright (c) 2026 the litefocus authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C API of the litefocus shared library.
 *
 * litefocus implements focus-set-restricted self-attention over time x
 * frequency token grids: each query attends to the tokens of its own
 * frequency band plus a globally shared random cross-frequency sample,
 * instead of the full quadratic key set. The library ships the sparse
 * kernels (a grouped fast path and a per-query reference path), a dense
 * baseline, a token-merging baseline, an attention-pattern analyzer and an
 * instrumented toy transformer pipeline for scaling benchmarks.
 *
 * Conventions:
 *   - every fallible call returns lf_status; LF_OK is 0
 *   - lf_last_error() describes the most recent failure on this thread
 *   - objects returned through lf_tensor** are owned by the caller and
 *     released with lf_tensor_free
 *   - tensors are dense row-major float32
 */

#ifndef LITEFOCUS_H
#define LITEFOCUS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LF_API __declspec(dllexport)
#else
#define LF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct lf_tensor lf_tensor; /* opaque */

typedef enum lf_status {
    LF_OK = 0,
    LF_ERR_VALIDATION = 1,
    LF_ERR_FORMAT = 2,
    LF_ERR_TRUNCATED = 3,
    LF_ERR_IO = 4,
    LF_ERR_DEGENERATE_FOCUS = 5,
    LF_ERR_NULL_ARG = 6,
    LF_ERR_INTERNAL = 7
} lf_status;

LF_API const char* lf_status_name(lf_status status);

/* message for the last failing call on the current thread; never NULL */
LF_API const char* lf_last_error(void);

/* ---- tensors ----------------------------------------------------------- */

typedef enum lf_dist {
    LF_DIST_STANDARD_NORMAL = 0,
    LF_DIST_UNIFORM01 = 1
} lf_dist;

LF_API lf_status lf_tensor_create(const uint64_t* dims, uint32_t rank,
                                  const float* data /* nullable: zeros */,
                                  lf_tensor** out);
LF_API lf_status lf_tensor_random(const uint64_t* dims, uint32_t rank,
                                  uint64_t seed, lf_dist dist, lf_tensor** out);

/* LFTN container: "LFTN" | u32 LE version=1 | u32 LE rank | rank x u64 LE
 * dims | row-major float32 LE payload. Bit-exact across platforms. */
LF_API lf_status lf_tensor_read(const char* path, lf_tensor** out);
LF_API lf_status lf_tensor_write(const lf_tensor* t, const char* path);

LF_API uint32_t lf_tensor_rank(const lf_tensor* t);
LF_API uint64_t lf_tensor_dim(const lf_tensor* t, uint32_t axis);
LF_API uint64_t lf_tensor_size(const lf_tensor* t);
LF_API const float* lf_tensor_data(const lf_tensor* t);
LF_API void lf_tensor_free(lf_tensor* t);

/* largest |a-b| over the largest magnitude in either tensor */
LF_API lf_status lf_relative_deviation(const lf_tensor* a, const lf_tensor* b,
                                       double* out);

/* ---- attention --------------------------------------------------------- */

typedef struct lf_grid {
    uint32_t n_t; /* time steps */
    uint32_t n_f; /* frequency bands; token (a,b) flattens to a*n_f + b */
} lf_grid;

typedef enum lf_mode {
    LF_MODE_DENSE = 0,
    LF_MODE_LITEFOCUS = 1,
    LF_MODE_SAMEFREQ = 2,
    LF_MODE_COMPONLY = 3,
    LF_MODE_TOKENMERGE = 4
} lf_mode;

typedef enum lf_impl {
    LF_IMPL_GROUPED = 0,  /* fast path */
    LF_IMPL_REFERENCE = 1 /* per-query oracle */
} lf_impl;

typedef struct lf_attention_opts {
    lf_mode mode;
    double r;            /* compensation fraction, litefocus / componly */
    uint64_t seed;       /* compensation sampling seed */
    double merge_ratio;  /* tokenmerge */
    lf_impl impl;
    int threads;         /* <= 1 means single-threaded */
} lf_attention_opts;

LF_API lf_attention_opts lf_attention_opts_default(lf_mode mode);

/* q, k, v: N x d_k with N == n_t * n_f. score_evals may be NULL. */
LF_API lf_status lf_attention(const lf_tensor* q, const lf_tensor* k,
                              const lf_tensor* v, lf_grid grid,
                              const lf_attention_opts* opts, lf_tensor** out,
                              uint64_t* score_evals);

/* (query, key) score evaluations the mode performs on this grid */
LF_API lf_status lf_attended_pair_count(lf_grid grid,
                                        const lf_attention_opts* opts,
                                        uint64_t* out);

/* analytic E|focus set| = n_t + floor(r*N) - floor(r*N) * n_t / N */
LF_API lf_status lf_expected_focus_size(lf_grid grid, double r, double* out);

/* ---- pattern analysis -------------------------------------------------- */

/* softmax(q k^T / sqrt(d_k)); materializes N x N, analysis-sized inputs */
LF_API lf_status lf_attention_map(const lf_tensor* q, const lf_tensor* k,
                                  lf_tensor** out);

typedef struct lf_lift_stats {
    double mean_lift; /* mean same-frequency mass times n_f */
    double ci_low;    /* 95% bootstrap interval */
    double ci_high;
} lf_lift_stats;

LF_API lf_status lf_frequency_lift(const lf_tensor* attn, lf_grid grid,
                                   uint32_t bootstrap_replicates, uint64_t seed,
                                   lf_lift_stats* out);

/* random logits (scaled by logit_scale; 0 = constant) with a same-frequency
 * bonus of `bias`, softmaxed per row */
LF_API lf_status lf_synthesize_biased_attention(lf_grid grid, double bias,
                                                double logit_scale,
                                                uint64_t seed, lf_tensor** out);

typedef enum lf_heatmap_format {
    LF_HEATMAP_PGM = 0, /* binary P5, min-max normalized */
    LF_HEATMAP_CSV = 1  /* full-precision RFC 4180 */
} lf_heatmap_format;

LF_API lf_status lf_export_heatmap(const lf_tensor* attn, const char* path,
                                   lf_heatmap_format format);

/* reorder columns so tokens of one frequency band become contiguous */
LF_API lf_status lf_reshape_by_frequency(const lf_tensor* attn, lf_grid grid,
                                         lf_tensor** out);

/* ---- toy pipeline ------------------------------------------------------ */

typedef struct lf_pipeline_opts {
    lf_grid grid;
    uint32_t channels;
    uint32_t heads;
    uint32_t n_blocks;
    uint32_t steps;
    uint64_t seed;
    lf_attention_opts sparse; /* mode of the sparse-assigned blocks */
    /* per-block flags, n_blocks entries; NULL selects the default subset
     * (blocks tagged down-2/up-2 when present, otherwise all blocks) */
    const uint8_t* sparse_blocks;
    int threads;
} lf_pipeline_opts;

LF_API lf_pipeline_opts lf_pipeline_opts_default(lf_grid grid);

typedef struct lf_timing_report {
    double attention_seconds;
    double projections_seconds;
    double mlp_seconds;
    double other_seconds;
    double total_seconds;
    double attention_share; /* attention / sum of stages */
    uint64_t attention_score_evals;
    uint64_t projection_macs;
    uint64_t mlp_macs;
} lf_timing_report;

/* initial/final state may be NULL; *final_state is caller-owned */
LF_API lf_status lf_run_pipeline(const lf_pipeline_opts* opts,
                                 const lf_tensor* initial_state,
                                 lf_tensor** final_state,
                                 lf_timing_report* report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LITEFOCUS_H */
