// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#include "pipeline.hpp"

#include <chrono>
#include <cmath>

#include "error.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "sparse_attention.hpp"

namespace litefocus {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Tensor scaled_normal(std::vector<size_t> dims, uint64_t seed, double scale) {
    Tensor t = random_tensor(dims, seed, Dist::standard_normal);
    for (size_t i = 0; i < t.size(); ++i)
        t.data()[i] = float(double(t.data()[i]) * scale);
    return t;
}

Tensor rms_norm(const Tensor& x, int threads) {
    const size_t n = x.rows(), d = x.cols();
    Tensor out({n, d});
    parallel_for(threads, n, [&](size_t r0, size_t r1) {
        for (size_t i = r0; i < r1; ++i) {
            const float* xi = x.row(i);
            double sq = 0.0;
            for (size_t c = 0; c < d; ++c) sq += double(xi[c]) * double(xi[c]);
            const double inv = 1.0 / std::sqrt(sq / double(d) + 1e-6);
            float* oi = out.row(i);
            for (size_t c = 0; c < d; ++c) oi[c] = float(double(xi[c]) * inv);
        }
    });
    return out;
}

void add_inplace(Tensor& x, const Tensor& y) {
    for (size_t i = 0; i < x.size(); ++i) x.data()[i] += y.data()[i];
}

void silu_inplace(Tensor& x) {
    for (size_t i = 0; i < x.size(); ++i) {
        const double v = double(x.data()[i]);
        x.data()[i] = float(v / (1.0 + std::exp(-v)));
    }
}

}  // namespace

BlockParams init_block_params(size_t channels, size_t heads, uint64_t seed) {
    LF_REQUIRE(channels >= 1 && heads >= 1, validation,
               "channels and heads must be positive");
    LF_REQUIRE(channels % heads == 0, validation,
               "heads must divide channels");
    const size_t hidden = 4 * channels;
    const double proj_scale = 1.0 / std::sqrt(double(channels));
    const double out_scale = 1.0 / std::sqrt(double(hidden));

    BlockParams p;
    p.projections.w_q = scaled_normal({channels, channels}, Rng::derive(seed, 1, 0), proj_scale);
    p.projections.w_k = scaled_normal({channels, channels}, Rng::derive(seed, 2, 0), proj_scale);
    p.projections.w_v = scaled_normal({channels, channels}, Rng::derive(seed, 3, 0), proj_scale);
    p.projections.heads = heads;
    p.mlp_w1 = scaled_normal({channels, hidden}, Rng::derive(seed, 4, 0), proj_scale);
    p.mlp_w2 = scaled_normal({hidden, channels}, Rng::derive(seed, 5, 0), out_scale);
    return p;
}

std::vector<BreakdownRow> timing_breakdown(const TimingReport& report) {
    const double total = report.stage.sum();
    const auto share = [&](double s) { return total > 0.0 ? s / total : 0.0; };
    return {
        {"attention", report.stage.attention, share(report.stage.attention)},
        {"projections", report.stage.projections, share(report.stage.projections)},
        {"mlp", report.stage.mlp, share(report.stage.mlp)},
        {"other", report.stage.other, share(report.stage.other)},
    };
}

void PipelineConfig::validate() const {
    LF_REQUIRE(steps >= 1, validation, "steps must be at least 1");
    LF_REQUIRE(!blocks.empty(), validation, "pipeline needs at least one block");
    LF_REQUIRE(channels >= 1 && heads >= 1 && channels % heads == 0, validation,
               "channels must be a positive multiple of heads");
    for (const auto& b : blocks) {
        b.projections.validate();
        LF_REQUIRE(b.projections.channels() == channels &&
                       b.projections.d_model() == channels,
                   validation, "block weights must be channels x channels");
        b.mode.validate();
    }
}

PipelineConfig make_pipeline(const Spectrogrid& grid, size_t channels,
                             size_t heads, size_t n_blocks, size_t steps,
                             uint64_t seed, const AttentionMode& sparse_mode,
                             std::vector<uint8_t> sparse_mask) {
    LF_REQUIRE(n_blocks >= 1, validation, "need at least one block");
    LF_REQUIRE(sparse_mask.empty() || sparse_mask.size() == n_blocks, validation,
               "sparse mask must cover every block");

    std::vector<std::string> tags(n_blocks);
    for (size_t b = 0; b < n_blocks; ++b) {
        if (b < n_blocks / 2)
            tags[b] = "down-" + std::to_string(b + 1);
        else if (n_blocks - 1 - b < n_blocks / 2)
            tags[b] = "up-" + std::to_string(n_blocks - b);
        else
            tags[b] = "mid";
    }
    if (sparse_mask.empty()) {
        sparse_mask.assign(n_blocks, 0);
        bool any = false;
        for (size_t b = 0; b < n_blocks; ++b) {
            if (tags[b] == "down-2" || tags[b] == "up-2") {
                sparse_mask[b] = 1;
                any = true;
            }
        }
        if (!any) sparse_mask.assign(n_blocks, 1);
    }

    PipelineConfig cfg;
    cfg.grid = grid;
    cfg.channels = channels;
    cfg.heads = heads;
    cfg.steps = steps;
    cfg.seed = seed;
    for (size_t b = 0; b < n_blocks; ++b) {
        BlockParams p = init_block_params(channels, heads, Rng::derive(seed, 100, b));
        p.tag = tags[b];
        p.mode = sparse_mask[b] ? sparse_mode : AttentionMode::dense();
        cfg.blocks.push_back(std::move(p));
    }
    return cfg;
}

Tensor run_block(const Tensor& x, const BlockParams& params,
                 const Spectrogrid& grid, KernelPath path, int threads,
                 TimingReport* report) {
    params.projections.validate();
    params.mode.validate();
    LF_REQUIRE(x.rank() == 2 && x.rows() == grid.tokens(), validation,
               "state must have one row per grid token");
    LF_REQUIRE(x.cols() == params.projections.channels(), validation,
               "state width must match block channels");
    const size_t n = x.rows(), d_model = params.projections.d_model();
    const size_t heads = params.projections.heads, d_k = d_model / heads;

    TimingReport scratch;
    TimingReport& rep = report ? *report : scratch;

    auto t0 = Clock::now();
    const Tensor normed = rms_norm(x, threads);
    rep.stage.other += seconds_since(t0);

    t0 = Clock::now();
    const Qkv qkv = project_qkv(normed, params.projections, threads);
    rep.stage.projections += seconds_since(t0);
    rep.projection_macs += 3 * uint64_t(n) * x.cols() * d_model;

    t0 = Clock::now();
    Tensor attn_out({n, d_model});
    for (size_t h = 0; h < heads; ++h) {
        Tensor qh({n, d_k}), kh({n, d_k}), vh({n, d_k});
        for (size_t i = 0; i < n; ++i) {
            for (size_t c = 0; c < d_k; ++c) {
                qh.at(i, c) = qkv.q.at(i, h * d_k + c);
                kh.at(i, c) = qkv.k.at(i, h * d_k + c);
                vh.at(i, c) = qkv.v.at(i, h * d_k + c);
            }
        }
        const Tensor oh = run_attention(qh, kh, vh, grid, params.mode, path,
                                        threads, &rep.attention_score_evals);
        for (size_t i = 0; i < n; ++i)
            for (size_t c = 0; c < d_k; ++c) attn_out.at(i, h * d_k + c) = oh.at(i, c);
    }
    rep.stage.attention += seconds_since(t0);

    t0 = Clock::now();
    Tensor state = x;
    add_inplace(state, attn_out);
    const Tensor normed2 = rms_norm(state, threads);
    rep.stage.other += seconds_since(t0);

    t0 = Clock::now();
    Tensor hidden = matmul(normed2, params.mlp_w1, threads);
    silu_inplace(hidden);
    const Tensor mlp_out = matmul(hidden, params.mlp_w2, threads);
    rep.stage.mlp += seconds_since(t0);
    rep.mlp_macs += 2 * uint64_t(n) * d_model * hidden.cols();

    t0 = Clock::now();
    add_inplace(state, mlp_out);
    rep.stage.other += seconds_since(t0);
    return state;
}

PipelineResult run_pipeline(const PipelineConfig& cfg, const Tensor* initial) {
    cfg.validate();
    const size_t n = cfg.grid.tokens();

    Tensor state;
    if (initial) {
        LF_REQUIRE(initial->rank() == 2 && initial->rows() == n &&
                       initial->cols() == cfg.channels,
                   validation, "initial state has the wrong shape");
        state = *initial;
    } else {
        state = random_tensor({n, cfg.channels}, Rng::derive(cfg.seed, 9, 9),
                              Dist::standard_normal);
    }

    PipelineResult result;
    const auto start = Clock::now();
    for (size_t step = 0; step < cfg.steps; ++step) {
        for (size_t b = 0; b < cfg.blocks.size(); ++b) {
            BlockParams effective = cfg.blocks[b];
            if (effective.mode.uses_compensation())
                effective.mode.seed = Rng::derive(cfg.blocks[b].mode.seed, b, step);
            state = run_block(state, effective, cfg.grid, cfg.path, cfg.threads,
                              &result.report);
        }
    }
    result.report.total_seconds = seconds_since(start);
    result.final_state = std::move(state);
    return result;
}

}  // namespace litefocus
