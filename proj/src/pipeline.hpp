// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "attention.hpp"
#include "tensor.hpp"

namespace litefocus {

// Pre-norm residual transformer block: x + attn(norm(x)), then
// x + mlp(norm(x)) with a SiLU-gated hidden layer of width 4*d_model.
struct BlockParams {
    ProjectionWeights projections;
    Tensor mlp_w1;  // d_model x 4*d_model
    Tensor mlp_w2;  // 4*d_model x d_model
    AttentionMode mode = AttentionMode::dense();
    std::string tag;
};

// deterministic weights scaled by 1/sqrt(fan_in) so activations stay O(1)
BlockParams init_block_params(size_t channels, size_t heads, uint64_t seed);

struct StageSeconds {
    double attention = 0.0;
    double projections = 0.0;
    double mlp = 0.0;
    double other = 0.0;
    double sum() const { return attention + projections + mlp + other; }
};

struct TimingReport {
    StageSeconds stage;
    double total_seconds = 0.0;
    uint64_t attention_score_evals = 0;
    uint64_t projection_macs = 0;
    uint64_t mlp_macs = 0;

    double attention_share() const {
        const double s = stage.sum();
        return s > 0.0 ? stage.attention / s : 0.0;
    }
};

struct BreakdownRow {
    std::string stage;
    double seconds = 0.0;
    double share = 0.0;
};

// fixed order: attention, projections, mlp, other; shares sum to 1
std::vector<BreakdownRow> timing_breakdown(const TimingReport& report);

struct PipelineConfig {
    Spectrogrid grid{1, 1};
    size_t channels = 32;
    size_t heads = 1;
    std::vector<BlockParams> blocks;
    size_t steps = 8;
    uint64_t seed = 0;
    KernelPath path = KernelPath::grouped;
    int threads = 1;

    void validate() const;
};

// Standard stack builder. Blocks are tagged down-1.. / up-..1 (odd middle
// block "mid"); `sparse_mask[b]` switches block b to sparse_mode. An empty
// mask selects down-2 and up-2 when the stack has them, otherwise every block.
PipelineConfig make_pipeline(const Spectrogrid& grid, size_t channels,
                             size_t heads, size_t n_blocks, size_t steps,
                             uint64_t seed, const AttentionMode& sparse_mode,
                             std::vector<uint8_t> sparse_mask = {});

Tensor run_block(const Tensor& x, const BlockParams& params,
                 const Spectrogrid& grid, KernelPath path = KernelPath::grouped,
                 int threads = 1, TimingReport* report = nullptr);

struct PipelineResult {
    Tensor final_state;
    TimingReport report;
};

// Applies all blocks in order for `steps` iterations. The compensation seed
// of every sparse block is re-derived per (block, step). `initial` defaults
// to a seeded standard-normal state.
PipelineResult run_pipeline(const PipelineConfig& cfg,
                            const Tensor* initial = nullptr);

}  // namespace litefocus
