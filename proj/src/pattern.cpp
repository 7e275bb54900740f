// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#include "pattern.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "attention.hpp"
#include "error.hpp"
#include "rng.hpp"

namespace litefocus {

Tensor attention_map(const Tensor& q, const Tensor& k, int threads) {
    LF_REQUIRE(q.rank() == 2 && k.rank() == 2, validation, "rank-2 inputs required");
    LF_REQUIRE(q.cols() == k.cols(), validation, "q and k must share d_k");
    const size_t n_q = q.rows(), n_k = k.rows(), d = q.cols();
    const double inv_sqrt_dk = 1.0 / std::sqrt(double(d));
    Tensor scores({n_q, n_k});
    (void)threads;
    for (size_t i = 0; i < n_q; ++i)
        for (size_t j = 0; j < n_k; ++j)
            scores.at(i, j) =
                float(detail::dot_f32(q.row(i), k.row(j), d) * inv_sqrt_dk);
    return stable_row_softmax(scores);
}

SameFrequencyMass same_frequency_mass(const Tensor& attn, const Spectrogrid& grid) {
    LF_REQUIRE(attn.rank() == 2, validation, "rank-2 map required");
    const size_t n = grid.tokens();
    LF_REQUIRE(attn.rows() == n && attn.cols() == n, validation,
               "map shape must be N x N for the grid");

    SameFrequencyMass out;
    out.per_query.resize(n);
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const float* row = attn.row(i);
        double row_sum = 0.0, band_sum = 0.0;
        const size_t band = i % grid.n_f;
        for (size_t j = 0; j < n; ++j) {
            row_sum += double(row[j]);
            if (j % grid.n_f == band) band_sum += double(row[j]);
        }
        LF_REQUIRE(std::abs(row_sum - 1.0) <= 1e-4, validation,
                   "attention rows must sum to 1");
        out.per_query[i] = band_sum / row_sum;
        total += out.per_query[i];
    }
    out.mean = total / double(n);
    return out;
}

double frequency_lift(const Tensor& attn, const Spectrogrid& grid) {
    return same_frequency_mass(attn, grid).mean * double(grid.n_f);
}

LiftStats bootstrap_lift(const Tensor& attn, const Spectrogrid& grid,
                         size_t replicates, uint64_t seed) {
    const SameFrequencyMass mass = same_frequency_mass(attn, grid);
    const size_t n = mass.per_query.size();
    LiftStats stats;
    stats.mean_lift = mass.mean * double(grid.n_f);
    if (replicates == 0) {
        stats.ci_low = stats.ci_high = stats.mean_lift;
        return stats;
    }

    Rng rng(seed);
    std::vector<double> lifts(replicates);
    for (size_t rep = 0; rep < replicates; ++rep) {
        double sum = 0.0;
        for (size_t s = 0; s < n; ++s)
            sum += mass.per_query[size_t(rng.next_below(uint64_t(n)))];
        lifts[rep] = sum / double(n) * double(grid.n_f);
    }
    std::sort(lifts.begin(), lifts.end());
    const auto pick = [&](double quantile) {
        const double pos = quantile * double(replicates - 1);
        return lifts[size_t(std::llround(pos))];
    };
    stats.ci_low = pick(0.025);
    stats.ci_high = pick(0.975);
    return stats;
}

Tensor synthesize_biased_attention(const Spectrogrid& grid, double bias,
                                   uint64_t seed, double logit_scale) {
    LF_REQUIRE(std::isfinite(bias) && bias >= 0.0, validation,
               "bias must be finite and non-negative");
    LF_REQUIRE(std::isfinite(logit_scale), validation, "logit_scale must be finite");
    const size_t n = grid.tokens();
    Rng rng(seed);
    Tensor logits({n, n});
    for (size_t i = 0; i < n; ++i) {
        const size_t band = i % grid.n_f;
        float* row = logits.row(i);
        for (size_t j = 0; j < n; ++j) {
            double v = logit_scale * double(rng.next_standard_normal());
            if (j % grid.n_f == band) v += bias;
            row[j] = float(v);
        }
    }
    return stable_row_softmax(logits);
}

namespace {

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    LF_REQUIRE(f.good(), io, "cannot open for writing: " + path);
    f.write(bytes.data(), std::streamsize(bytes.size()));
    f.flush();
    LF_REQUIRE(f.good(), io, "write failed: " + path);
}

}  // namespace

void export_heatmap(const Tensor& attn, const std::string& path, HeatmapFormat fmt) {
    LF_REQUIRE(attn.rank() == 2, validation, "rank-2 map required");
    LF_REQUIRE(attn.all_finite(), validation, "map must be finite");
    const size_t rows = attn.rows(), cols = attn.cols();

    std::string out;
    if (fmt == HeatmapFormat::pgm) {
        float lo = attn.data()[0], hi = attn.data()[0];
        for (size_t i = 0; i < attn.size(); ++i) {
            lo = std::min(lo, attn.data()[i]);
            hi = std::max(hi, attn.data()[i]);
        }
        const double span = double(hi) - double(lo);
        char header[64];
        std::snprintf(header, sizeof header, "P5\n%zu %zu\n255\n", cols, rows);
        out = header;
        for (size_t i = 0; i < attn.size(); ++i) {
            const double norm =
                span > 0.0 ? (double(attn.data()[i]) - double(lo)) / span : 0.0;
            out.push_back(char(uint8_t(std::lround(norm * 255.0))));
        }
    } else {
        char cell[40];
        for (size_t i = 0; i < rows; ++i) {
            for (size_t j = 0; j < cols; ++j) {
                std::snprintf(cell, sizeof cell, "%.9g", double(attn.at(i, j)));
                if (j) out.push_back(',');
                out += cell;
            }
            out += "\r\n";
        }
    }
    write_file(path, out);
}

Tensor reshape_by_frequency(const Tensor& attn, const Spectrogrid& grid) {
    LF_REQUIRE(attn.rank() == 2, validation, "rank-2 map required");
    const size_t n = grid.tokens();
    LF_REQUIRE(attn.rows() == n && attn.cols() == n, validation,
               "map shape must be N x N for the grid");
    Tensor out({n, n});
    for (size_t i = 0; i < n; ++i) {
        const float* src = attn.row(i);
        float* dst = out.row(i);
        for (size_t j = 0; j < n; ++j) {
            const size_t a = j / grid.n_f, b = j % grid.n_f;
            dst[b * grid.n_t + a] = src[j];
        }
    }
    return out;
}

}  // namespace litefocus
