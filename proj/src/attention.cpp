// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#include "attention.hpp"

#include <cmath>
#include <cstdio>

#include "error.hpp"
#include "parallel.hpp"

namespace litefocus {

AttentionMode AttentionMode::dense() { return {AttentionKind::dense, 0.0, 0, 0.0}; }

AttentionMode AttentionMode::litefocus(double r, uint64_t seed) {
    return {AttentionKind::litefocus, r, seed, 0.0};
}

AttentionMode AttentionMode::same_freq_only() {
    return {AttentionKind::same_freq_only, 0.0, 0, 0.0};
}

AttentionMode AttentionMode::comp_only(double r, uint64_t seed) {
    return {AttentionKind::comp_only, r, seed, 0.0};
}

AttentionMode AttentionMode::token_merge(double ratio) {
    return {AttentionKind::token_merge, 0.0, 0, ratio};
}

void AttentionMode::validate() const {
    if (uses_compensation())
        LF_REQUIRE(r >= 0.0 && r <= 1.0, validation, "r must be in [0, 1]");
    if (kind == AttentionKind::token_merge)
        LF_REQUIRE(merge_ratio >= 0.0 && merge_ratio < 0.5, validation,
                   "merge_ratio must be in [0, 0.5)");
}

namespace {

std::string ratio_str(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

std::string AttentionMode::to_string() const {
    switch (kind) {
        case AttentionKind::dense: return "dense";
        case AttentionKind::litefocus: return "litefocus:r=" + ratio_str(r);
        case AttentionKind::same_freq_only: return "samefreq";
        case AttentionKind::comp_only: return "componly:r=" + ratio_str(r);
        case AttentionKind::token_merge: return "tome:ratio=" + ratio_str(merge_ratio);
    }
    return "?";
}

void ProjectionWeights::validate() const {
    LF_REQUIRE(w_q.rank() == 2 && w_k.rank() == 2 && w_v.rank() == 2, validation,
               "projection weights must be rank-2");
    LF_REQUIRE(w_k.dims() == w_q.dims() && w_v.dims() == w_q.dims(), validation,
               "projection weights must share one shape");
    LF_REQUIRE(heads >= 1, validation, "heads must be positive");
    LF_REQUIRE(d_model() % heads == 0, validation, "d_model must be divisible by heads");
    LF_REQUIRE(w_q.all_finite() && w_k.all_finite() && w_v.all_finite(), validation,
               "projection weights must be finite");
}

namespace detail {

double dot_f32(const float* a, const float* b, size_t n) {
    double a0 = 0, a1 = 0, a2 = 0, a3 = 0;
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 += double(a[i]) * double(b[i]);
        a1 += double(a[i + 1]) * double(b[i + 1]);
        a2 += double(a[i + 2]) * double(b[i + 2]);
        a3 += double(a[i + 3]) * double(b[i + 3]);
    }
    double acc = (a0 + a1) + (a2 + a3);
    for (; i < n; ++i) acc += double(a[i]) * double(b[i]);
    return acc;
}

void attend_row(const float* q_row, const float* keys, const float* vals,
                size_t n_keys, size_t d_k, size_t d_v, double inv_sqrt_dk,
                float* out_row, std::vector<double>& score_buf,
                std::vector<double>& accum_buf) {
    score_buf.resize(n_keys);
    accum_buf.assign(d_v, 0.0);

    double max_score = -std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < n_keys; ++j) {
        const double s = dot_f32(q_row, keys + j * d_k, d_k) * inv_sqrt_dk;
        score_buf[j] = s;
        if (s > max_score) max_score = s;
    }

    double weight_sum = 0.0;
    for (size_t j = 0; j < n_keys; ++j) {
        const double w = std::exp(score_buf[j] - max_score);
        weight_sum += w;
        const float* vj = vals + j * d_v;
        for (size_t c = 0; c < d_v; ++c) accum_buf[c] += w * double(vj[c]);
    }
    for (size_t c = 0; c < d_v; ++c) out_row[c] = float(accum_buf[c] / weight_sum);
}

}  // namespace detail

Tensor matmul(const Tensor& a, const Tensor& b, int threads) {
    const size_t n = a.rows(), k = a.cols();
    LF_REQUIRE(b.rows() == k, validation, "matmul: inner dims mismatch");
    const size_t m = b.cols();
    Tensor out({n, m});
    parallel_for(threads, n, [&](size_t r0, size_t r1) {
        for (size_t i = r0; i < r1; ++i) {
            const float* ai = a.row(i);
            float* oi = out.row(i);
            for (size_t j = 0; j < m; ++j) {
                double acc = 0.0;
                for (size_t c = 0; c < k; ++c)
                    acc += double(ai[c]) * double(b.at(c, j));
                oi[j] = float(acc);
            }
        }
    });
    return out;
}

Qkv project_qkv(const Tensor& x, const ProjectionWeights& w, int threads) {
    w.validate();
    LF_REQUIRE(x.rank() == 2, validation, "input must be rank-2");
    LF_REQUIRE(x.cols() == w.channels(), validation,
               "input channels do not match projection weights");
    return {matmul(x, w.w_q, threads), matmul(x, w.w_k, threads),
            matmul(x, w.w_v, threads)};
}

Tensor stable_row_softmax(const Tensor& m) {
    LF_REQUIRE(m.rank() == 2, validation, "softmax needs a rank-2 tensor");
    LF_REQUIRE(m.all_finite(), validation, "softmax input must be finite");
    const size_t rows = m.rows(), cols = m.cols();
    Tensor out({rows, cols});
    std::vector<double> buf(cols);
    for (size_t i = 0; i < rows; ++i) {
        const float* mi = m.row(i);
        double max_v = -std::numeric_limits<double>::infinity();
        for (size_t j = 0; j < cols; ++j) max_v = std::max(max_v, double(mi[j]));
        double sum = 0.0;
        for (size_t j = 0; j < cols; ++j) {
            buf[j] = std::exp(double(mi[j]) - max_v);
            sum += buf[j];
        }
        float* oi = out.row(i);
        for (size_t j = 0; j < cols; ++j) oi[j] = float(buf[j] / sum);
    }
    return out;
}

Tensor dense_attention(const Tensor& q, const Tensor& k, const Tensor& v,
                       int threads, uint64_t* score_evals) {
    LF_REQUIRE(q.rank() == 2 && k.rank() == 2 && v.rank() == 2, validation,
               "attention inputs must be rank-2");
    const size_t d_k = q.cols();
    LF_REQUIRE(k.cols() == d_k, validation, "q and k must share d_k");
    LF_REQUIRE(k.rows() == v.rows(), validation, "k and v must share row count");

    const size_t n_q = q.rows(), n_kv = k.rows(), d_v = v.cols();
    const double inv_sqrt_dk = 1.0 / std::sqrt(double(d_k));
    Tensor out({n_q, d_v});
    parallel_for(threads, n_q, [&](size_t r0, size_t r1) {
        std::vector<double> scores, accum;
        for (size_t i = r0; i < r1; ++i)
            detail::attend_row(q.row(i), k.data(), v.data(), n_kv, d_k, d_v,
                               inv_sqrt_dk, out.row(i), scores, accum);
    });
    if (score_evals) *score_evals += uint64_t(n_q) * n_kv;
    return out;
}

Tensor multi_head_attention(const Tensor& x, const ProjectionWeights& w,
                            const AttentionKernel& kernel, int threads) {
    const Qkv qkv = project_qkv(x, w, threads);
    const size_t n = x.rows(), heads = w.heads, d_k = w.d_k();
    if (heads == 1) return kernel(qkv.q, qkv.k, qkv.v);

    Tensor out({n, w.d_model()});
    for (size_t h = 0; h < heads; ++h) {
        Tensor qh({n, d_k}), kh({n, d_k}), vh({n, d_k});
        for (size_t i = 0; i < n; ++i) {
            for (size_t c = 0; c < d_k; ++c) {
                qh.at(i, c) = qkv.q.at(i, h * d_k + c);
                kh.at(i, c) = qkv.k.at(i, h * d_k + c);
                vh.at(i, c) = qkv.v.at(i, h * d_k + c);
            }
        }
        const Tensor oh = kernel(qh, kh, vh);
        LF_REQUIRE(oh.rank() == 2 && oh.rows() == n && oh.cols() == d_k, validation,
                   "kernel returned unexpected shape");
        for (size_t i = 0; i < n; ++i)
            for (size_t c = 0; c < d_k; ++c) out.at(i, h * d_k + c) = oh.at(i, c);
    }
    return out;
}

}  // namespace litefocus
