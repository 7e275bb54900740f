// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tensor.hpp"

namespace litefocus {

enum class AttentionKind { dense, litefocus, same_freq_only, comp_only, token_merge };

// Sparse kernels come in two numerically equivalent flavors: a per-query
// reference path (the correctness oracle) and a grouped fast path.
enum class KernelPath { grouped, reference };

// One experiment point: the kernel family plus its parameters. r and seed
// matter for litefocus/comp_only, merge_ratio for token_merge.
struct AttentionMode {
    AttentionKind kind = AttentionKind::dense;
    double r = 0.1;
    uint64_t seed = 0;
    double merge_ratio = 0.25;

    static AttentionMode dense();
    static AttentionMode litefocus(double r, uint64_t seed);
    static AttentionMode same_freq_only();
    static AttentionMode comp_only(double r, uint64_t seed);
    static AttentionMode token_merge(double ratio);

    bool uses_compensation() const {
        return kind == AttentionKind::litefocus || kind == AttentionKind::comp_only;
    }
    bool uses_same_frequency() const {
        return kind == AttentionKind::litefocus || kind == AttentionKind::same_freq_only;
    }
    void validate() const;
    std::string to_string() const;  // canonical CLI syntax, e.g. "litefocus:r=0.1"
};

struct ProjectionWeights {
    Tensor w_q, w_k, w_v;  // channels x d_model each
    size_t heads = 1;

    size_t channels() const { return w_q.rows(); }
    size_t d_model() const { return w_q.cols(); }
    size_t d_k() const { return d_model() / heads; }
    void validate() const;
};

struct Qkv {
    Tensor q, k, v;
};

// plain a(N x K) * b(K x M); binary32 inputs, binary64 accumulation
Tensor matmul(const Tensor& a, const Tensor& b, int threads = 1);

Qkv project_qkv(const Tensor& x, const ProjectionWeights& w, int threads = 1);

// Row-wise softmax with row-max subtraction; safe for inputs up to ~1e4.
Tensor stable_row_softmax(const Tensor& m);

// softmax(q k^T / sqrt(d_k)) v without materializing the score matrix;
// v may be wider than d_k (e.g. an identity matrix to recover the weights)
Tensor dense_attention(const Tensor& q, const Tensor& k, const Tensor& v,
                       int threads = 1, uint64_t* score_evals = nullptr);

using AttentionKernel =
    std::function<Tensor(const Tensor& q, const Tensor& k, const Tensor& v)>;

// Splits d_model into `heads` contiguous slices of width d_k, applies the
// kernel per head and concatenates the results.
Tensor multi_head_attention(const Tensor& x, const ProjectionWeights& w,
                            const AttentionKernel& kernel, int threads = 1);

namespace detail {

// dot product with four independent binary64 accumulators combined pairwise;
// the summation order is fixed so results do not depend on threading
double dot_f32(const float* a, const float* b, size_t n);

// one query row attending to a contiguous key/value block
void attend_row(const float* q_row, const float* keys, const float* vals,
                size_t n_keys, size_t d_k, size_t d_v, double inv_sqrt_dk,
                float* out_row, std::vector<double>& score_buf,
                std::vector<double>& accum_buf);

}  // namespace detail

}  // namespace litefocus
