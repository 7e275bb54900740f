// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#include "sparse_attention.hpp"

#include <cmath>
#include <cstring>

#include "error.hpp"
#include "parallel.hpp"
#include "tome.hpp"

namespace litefocus {

namespace {

void check_sparse_inputs(const Tensor& q, const Tensor& k, const Tensor& v,
                         const Spectrogrid& grid, const AttentionMode& mode) {
    mode.validate();
    LF_REQUIRE(mode.kind == AttentionKind::litefocus ||
                   mode.kind == AttentionKind::same_freq_only ||
                   mode.kind == AttentionKind::comp_only,
               validation, "sparse kernel needs a focus-set mode");
    LF_REQUIRE(q.rank() == 2 && k.rank() == 2 && v.rank() == 2, validation,
               "attention inputs must be rank-2");
    LF_REQUIRE(q.dims() == k.dims() && q.dims() == v.dims(), validation,
               "q, k, v must share one shape");
    LF_REQUIRE(q.rows() == grid.tokens(), validation,
               "row count must equal grid token count");
}

CompensationSet sample_compensation(const Spectrogrid& grid,
                                    const AttentionMode& mode) {
    CompensationSet comp;
    if (mode.uses_compensation())
        comp = cross_frequency_sample(grid.tokens(), mode.r, mode.seed);
    if (mode.kind == AttentionKind::comp_only)
        LF_REQUIRE(!comp.indices.empty(), degenerate_focus,
                   "componly with floor(r*N) == 0 leaves every focus set empty");
    return comp;
}

void gather_into(const Tensor& src, std::span<const size_t> idx, float* dst) {
    const size_t d = src.cols();
    for (size_t j = 0; j < idx.size(); ++j)
        std::memcpy(dst + j * d, src.row(idx[j]), d * sizeof(float));
}

}  // namespace

Tensor gather_rows(const Tensor& t, std::span<const size_t> idx) {
    const size_t n = t.rows(), d = t.cols();
    for (size_t j : idx)
        LF_REQUIRE(j < n, validation, "gather index out of range");
    Tensor out({idx.size(), d});
    gather_into(t, idx, out.data());
    return out;
}

Tensor litefocus_attention_reference(const Tensor& q, const Tensor& k,
                                     const Tensor& v, const Spectrogrid& grid,
                                     const AttentionMode& mode,
                                     uint64_t* score_evals) {
    check_sparse_inputs(q, k, v, grid, mode);
    const CompensationSet comp = sample_compensation(grid, mode);

    const size_t n = grid.tokens(), d_k = q.cols();
    const double inv_sqrt_dk = 1.0 / std::sqrt(double(d_k));
    Tensor out({n, d_k});
    std::vector<float> keys, vals;
    std::vector<double> scores, accum;
    uint64_t evals = 0;
    for (size_t i = 0; i < n; ++i) {
        const FocusSet fs =
            build_focus_set(grid, i, comp, mode.uses_same_frequency());
        LF_REQUIRE(!fs.indices.empty(), degenerate_focus, "empty focus set");
        keys.resize(fs.indices.size() * d_k);
        vals.resize(fs.indices.size() * d_k);
        gather_into(k, fs.indices, keys.data());
        gather_into(v, fs.indices, vals.data());
        detail::attend_row(q.row(i), keys.data(), vals.data(), fs.indices.size(),
                           d_k, d_k, inv_sqrt_dk, out.row(i), scores, accum);
        evals += fs.indices.size();
    }
    if (score_evals) *score_evals += evals;
    return out;
}

Tensor litefocus_attention_grouped(const Tensor& q, const Tensor& k,
                                   const Tensor& v, const Spectrogrid& grid,
                                   const AttentionMode& mode, int threads,
                                   uint64_t* score_evals) {
    check_sparse_inputs(q, k, v, grid, mode);
    const CompensationSet comp = sample_compensation(grid, mode);

    const size_t n_t = grid.n_t, n_f = grid.n_f, d_k = q.cols();
    const double inv_sqrt_dk = 1.0 / std::sqrt(double(d_k));
    Tensor out({grid.tokens(), d_k});
    std::vector<uint64_t> band_evals(n_f, 0);

    parallel_for(threads, n_f, [&](size_t b0, size_t b1) {
        std::vector<float> keys, vals;
        std::vector<double> scores, accum;
        for (size_t band = b0; band < b1; ++band) {
            // every query of this band shares one focus set
            const FocusSet fs = build_focus_set(grid, band, comp,
                                                mode.uses_same_frequency());
            LF_REQUIRE(!fs.indices.empty(), degenerate_focus, "empty focus set");
            keys.resize(fs.indices.size() * d_k);
            vals.resize(fs.indices.size() * d_k);
            gather_into(k, fs.indices, keys.data());
            gather_into(v, fs.indices, vals.data());
            for (size_t a = 0; a < n_t; ++a) {
                const size_t i = a * n_f + band;
                detail::attend_row(q.row(i), keys.data(), vals.data(),
                                   fs.indices.size(), d_k, d_k, inv_sqrt_dk,
                                   out.row(i), scores, accum);
            }
            band_evals[band] = uint64_t(n_t) * fs.indices.size();
        }
    });
    if (score_evals)
        for (uint64_t e : band_evals) *score_evals += e;
    return out;
}

uint64_t attended_pair_count(const Spectrogrid& grid, const AttentionMode& mode) {
    mode.validate();
    const uint64_t n = grid.tokens();
    switch (mode.kind) {
        case AttentionKind::dense:
            return n * n;
        case AttentionKind::same_freq_only:
            return n * uint64_t(grid.n_t);
        case AttentionKind::comp_only:
            return n * uint64_t(floor_fraction(mode.r, grid.tokens()));
        case AttentionKind::token_merge: {
            const uint64_t kept = n - floor_fraction(mode.merge_ratio, grid.tokens());
            return kept * kept;
        }
        case AttentionKind::litefocus: {
            const CompensationSet comp =
                cross_frequency_sample(grid.tokens(), mode.r, mode.seed);
            uint64_t total = 0;
            for (size_t band = 0; band < grid.n_f; ++band) {
                const FocusSet fs = build_focus_set(grid, band, comp, true);
                total += uint64_t(grid.n_t) * fs.indices.size();
            }
            return total;
        }
    }
    fail(ErrorCode::validation, "unknown attention mode");
}

Tensor run_attention(const Tensor& q, const Tensor& k, const Tensor& v,
                     const Spectrogrid& grid, const AttentionMode& mode,
                     KernelPath path, int threads, uint64_t* score_evals) {
    switch (mode.kind) {
        case AttentionKind::dense:
            return dense_attention(q, k, v, threads, score_evals);
        case AttentionKind::token_merge:
            return tome_attention(q, k, v, mode.merge_ratio, threads, score_evals);
        default:
            if (path == KernelPath::reference)
                return litefocus_attention_reference(q, k, v, grid, mode, score_evals);
            return litefocus_attention_grouped(q, k, v, grid, mode, threads,
                                               score_evals);
    }
}

}  // namespace litefocus
