// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#include "litefocus/litefocus.h"

#include <cstring>
#include <new>
#include <string>

#include "attention.hpp"
#include "error.hpp"
#include "focus_set.hpp"
#include "pattern.hpp"
#include "pipeline.hpp"
#include "sparse_attention.hpp"
#include "tensor.hpp"

using namespace litefocus;

extern "C" {
struct lf_tensor {
    Tensor value;
};
}

namespace {

thread_local std::string g_last_error;

lf_status set_error(lf_status status, const std::string& msg) {
    g_last_error = msg;
    return status;
}

lf_status from_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::validation: return LF_ERR_VALIDATION;
        case ErrorCode::format: return LF_ERR_FORMAT;
        case ErrorCode::truncated: return LF_ERR_TRUNCATED;
        case ErrorCode::io: return LF_ERR_IO;
        case ErrorCode::degenerate_focus: return LF_ERR_DEGENERATE_FOCUS;
    }
    return LF_ERR_INTERNAL;
}

template <typename Fn>
lf_status guarded(Fn&& fn) {
    try {
        fn();
        return LF_OK;
    } catch (const Error& e) {
        return set_error(from_code(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(LF_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(LF_ERR_INTERNAL, e.what());
    }
}

lf_status make_tensor(Tensor&& value, lf_tensor** out) {
    *out = new lf_tensor{std::move(value)};
    return LF_OK;
}

std::vector<size_t> dims_vec(const uint64_t* dims, uint32_t rank) {
    LF_REQUIRE(dims != nullptr && rank >= 1, validation, "dims must be non-empty");
    return std::vector<size_t>(dims, dims + rank);
}

AttentionMode to_mode(const lf_attention_opts& opts) {
    switch (opts.mode) {
        case LF_MODE_DENSE: return AttentionMode::dense();
        case LF_MODE_LITEFOCUS: return AttentionMode::litefocus(opts.r, opts.seed);
        case LF_MODE_SAMEFREQ: return AttentionMode::same_freq_only();
        case LF_MODE_COMPONLY: return AttentionMode::comp_only(opts.r, opts.seed);
        case LF_MODE_TOKENMERGE: return AttentionMode::token_merge(opts.merge_ratio);
    }
    fail(ErrorCode::validation, "unknown mode");
}

Spectrogrid to_grid(lf_grid grid) { return Spectrogrid(grid.n_t, grid.n_f); }

}  // namespace

const char* lf_status_name(lf_status status) {
    switch (status) {
        case LF_OK: return "ok";
        case LF_ERR_VALIDATION: return "validation";
        case LF_ERR_FORMAT: return "format";
        case LF_ERR_TRUNCATED: return "truncated";
        case LF_ERR_IO: return "io";
        case LF_ERR_DEGENERATE_FOCUS: return "degenerate_focus";
        case LF_ERR_NULL_ARG: return "null_arg";
        case LF_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* lf_last_error(void) { return g_last_error.c_str(); }

#define LF_NONNULL(p) \
    if ((p) == nullptr) return set_error(LF_ERR_NULL_ARG, #p " is NULL")

lf_status lf_tensor_create(const uint64_t* dims, uint32_t rank,
                           const float* data, lf_tensor** out) {
    LF_NONNULL(out);
    return guarded([&] {
        auto d = dims_vec(dims, rank);
        Tensor t(d);
        if (data) std::memcpy(t.data(), data, t.size() * sizeof(float));
        LF_REQUIRE(t.all_finite(), validation, "payload must be finite");
        make_tensor(std::move(t), out);
    });
}

lf_status lf_tensor_random(const uint64_t* dims, uint32_t rank, uint64_t seed,
                           lf_dist dist, lf_tensor** out) {
    LF_NONNULL(out);
    return guarded([&] {
        make_tensor(random_tensor(dims_vec(dims, rank), seed,
                                  dist == LF_DIST_UNIFORM01 ? Dist::uniform01
                                                            : Dist::standard_normal),
                    out);
    });
}

lf_status lf_tensor_read(const char* path, lf_tensor** out) {
    LF_NONNULL(path);
    LF_NONNULL(out);
    return guarded([&] { make_tensor(read_tensor(path), out); });
}

lf_status lf_tensor_write(const lf_tensor* t, const char* path) {
    LF_NONNULL(t);
    LF_NONNULL(path);
    return guarded([&] { write_tensor(t->value, path); });
}

uint32_t lf_tensor_rank(const lf_tensor* t) {
    return t ? uint32_t(t->value.rank()) : 0;
}

uint64_t lf_tensor_dim(const lf_tensor* t, uint32_t axis) {
    if (!t || axis >= t->value.rank()) return 0;
    return t->value.dims()[axis];
}

uint64_t lf_tensor_size(const lf_tensor* t) { return t ? t->value.size() : 0; }

const float* lf_tensor_data(const lf_tensor* t) {
    return t ? t->value.data() : nullptr;
}

void lf_tensor_free(lf_tensor* t) { delete t; }

lf_status lf_relative_deviation(const lf_tensor* a, const lf_tensor* b,
                                double* out) {
    LF_NONNULL(a);
    LF_NONNULL(b);
    LF_NONNULL(out);
    return guarded([&] { *out = relative_deviation(a->value, b->value); });
}

lf_attention_opts lf_attention_opts_default(lf_mode mode) {
    lf_attention_opts opts;
    opts.mode = mode;
    opts.r = 0.1;
    opts.seed = 0;
    opts.merge_ratio = 0.25;
    opts.impl = LF_IMPL_GROUPED;
    opts.threads = 1;
    return opts;
}

lf_status lf_attention(const lf_tensor* q, const lf_tensor* k,
                       const lf_tensor* v, lf_grid grid,
                       const lf_attention_opts* opts, lf_tensor** out,
                       uint64_t* score_evals) {
    LF_NONNULL(q);
    LF_NONNULL(k);
    LF_NONNULL(v);
    LF_NONNULL(opts);
    LF_NONNULL(out);
    return guarded([&] {
        const auto path =
            opts->impl == LF_IMPL_REFERENCE ? KernelPath::reference : KernelPath::grouped;
        uint64_t evals = 0;
        Tensor result = run_attention(q->value, k->value, v->value, to_grid(grid),
                                      to_mode(*opts), path, opts->threads, &evals);
        if (score_evals) *score_evals = evals;
        make_tensor(std::move(result), out);
    });
}

lf_status lf_attended_pair_count(lf_grid grid, const lf_attention_opts* opts,
                                 uint64_t* out) {
    LF_NONNULL(opts);
    LF_NONNULL(out);
    return guarded([&] { *out = attended_pair_count(to_grid(grid), to_mode(*opts)); });
}

lf_status lf_expected_focus_size(lf_grid grid, double r, double* out) {
    LF_NONNULL(out);
    return guarded([&] {
        LF_REQUIRE(r >= 0.0 && r <= 1.0, validation, "r must be in [0, 1]");
        *out = expected_focus_size(to_grid(grid), r);
    });
}

lf_status lf_attention_map(const lf_tensor* q, const lf_tensor* k,
                           lf_tensor** out) {
    LF_NONNULL(q);
    LF_NONNULL(k);
    LF_NONNULL(out);
    return guarded([&] { make_tensor(attention_map(q->value, k->value), out); });
}

lf_status lf_frequency_lift(const lf_tensor* attn, lf_grid grid,
                            uint32_t bootstrap_replicates, uint64_t seed,
                            lf_lift_stats* out) {
    LF_NONNULL(attn);
    LF_NONNULL(out);
    return guarded([&] {
        const LiftStats stats =
            bootstrap_lift(attn->value, to_grid(grid), bootstrap_replicates, seed);
        out->mean_lift = stats.mean_lift;
        out->ci_low = stats.ci_low;
        out->ci_high = stats.ci_high;
    });
}

lf_status lf_synthesize_biased_attention(lf_grid grid, double bias,
                                         double logit_scale, uint64_t seed,
                                         lf_tensor** out) {
    LF_NONNULL(out);
    return guarded([&] {
        make_tensor(synthesize_biased_attention(to_grid(grid), bias, seed, logit_scale),
                    out);
    });
}

lf_status lf_export_heatmap(const lf_tensor* attn, const char* path,
                            lf_heatmap_format format) {
    LF_NONNULL(attn);
    LF_NONNULL(path);
    return guarded([&] {
        export_heatmap(attn->value, path,
                       format == LF_HEATMAP_CSV ? HeatmapFormat::csv
                                                : HeatmapFormat::pgm);
    });
}

lf_status lf_reshape_by_frequency(const lf_tensor* attn, lf_grid grid,
                                  lf_tensor** out) {
    LF_NONNULL(attn);
    LF_NONNULL(out);
    return guarded([&] {
        make_tensor(reshape_by_frequency(attn->value, to_grid(grid)), out);
    });
}

lf_pipeline_opts lf_pipeline_opts_default(lf_grid grid) {
    lf_pipeline_opts opts;
    opts.grid = grid;
    opts.channels = 32;
    opts.heads = 1;
    opts.n_blocks = 4;
    opts.steps = 8;
    opts.seed = 0;
    opts.sparse = lf_attention_opts_default(LF_MODE_LITEFOCUS);
    opts.sparse_blocks = nullptr;
    opts.threads = 1;
    return opts;
}

lf_status lf_run_pipeline(const lf_pipeline_opts* opts,
                          const lf_tensor* initial_state,
                          lf_tensor** final_state, lf_timing_report* report) {
    LF_NONNULL(opts);
    return guarded([&] {
        std::vector<uint8_t> mask;
        if (opts->sparse_blocks)
            mask.assign(opts->sparse_blocks, opts->sparse_blocks + opts->n_blocks);
        PipelineConfig cfg = make_pipeline(
            to_grid(opts->grid), opts->channels, opts->heads, opts->n_blocks,
            opts->steps, opts->seed, to_mode(opts->sparse), std::move(mask));
        cfg.path = opts->sparse.impl == LF_IMPL_REFERENCE ? KernelPath::reference
                                                          : KernelPath::grouped;
        cfg.threads = opts->threads;

        PipelineResult result =
            run_pipeline(cfg, initial_state ? &initial_state->value : nullptr);
        if (report) {
            report->attention_seconds = result.report.stage.attention;
            report->projections_seconds = result.report.stage.projections;
            report->mlp_seconds = result.report.stage.mlp;
            report->other_seconds = result.report.stage.other;
            report->total_seconds = result.report.total_seconds;
            report->attention_share = result.report.attention_share();
            report->attention_score_evals = result.report.attention_score_evals;
            report->projection_macs = result.report.projection_macs;
            report->mlp_macs = result.report.mlp_macs;
        }
        if (final_state) make_tensor(std::move(result.final_state), final_state);
    });
}
