// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tensor.hpp"

namespace litefocus {

// full softmax(q k^T / sqrt(d_k)) matrix; meant for analysis-sized inputs
Tensor attention_map(const Tensor& q, const Tensor& k, int threads = 1);

// Fraction of each query row's attention mass that lands on tokens of the
// query's own frequency band, plus the mean over queries.
struct SameFrequencyMass {
    std::vector<double> per_query;
    double mean = 0.0;
};

SameFrequencyMass same_frequency_mass(const Tensor& attn, const Spectrogrid& grid);

// mean same-frequency mass normalized by its uniform-attention value 1/n_f;
// lift > 1 means attention concentrates inside frequency bands
double frequency_lift(const Tensor& attn, const Spectrogrid& grid);

struct LiftStats {
    double mean_lift = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

// percentile bootstrap over the per-query fractions (95% interval)
LiftStats bootstrap_lift(const Tensor& attn, const Spectrogrid& grid,
                         size_t replicates, uint64_t seed);

// Test fixture: random logits (scaled by logit_scale; 0 gives constant
// logits) with a bonus of `bias` on same-frequency entries, then softmax.
Tensor synthesize_biased_attention(const Spectrogrid& grid, double bias,
                                   uint64_t seed, double logit_scale = 1.0);

enum class HeatmapFormat { pgm, csv };

// PGM: binary 8-bit grayscale, min-max normalized per matrix.
// CSV: full-precision values (%.9g), RFC 4180 (CRLF line ends).
void export_heatmap(const Tensor& attn, const std::string& path, HeatmapFormat fmt);

// Column order that groups equal-frequency tokens into contiguous blocks:
// column a*n_f + b moves to b*n_t + a. Makes the repeating band structure
// visible as solid horizontal runs.
Tensor reshape_by_frequency(const Tensor& attn, const Spectrogrid& grid);

}  // namespace litefocus
