// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#include "tome.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "attention.hpp"
#include "error.hpp"
#include "focus_set.hpp"

namespace litefocus {

void MergePlan::validate(size_t n) const {
    LF_REQUIRE(assignment.size() == n, validation, "plan sized for another sequence");
    LF_REQUIRE(keep.size() + merged_count == n, validation,
               "keep/merged_count inconsistent");
    LF_REQUIRE(std::is_sorted(keep.begin(), keep.end()), validation,
               "keep must be sorted");
    for (size_t i : keep)
        LF_REQUIRE(i < n && assignment[i] == i, validation,
                   "surviving tokens must map to themselves");
    for (size_t i = 0; i < n; ++i)
        LF_REQUIRE(std::binary_search(keep.begin(), keep.end(), assignment[i]),
                   validation, "assignment target not in keep");
}

size_t MergePlan::keep_rank(size_t original) const {
    const size_t target = assignment[original];
    return size_t(std::lower_bound(keep.begin(), keep.end(), target) - keep.begin());
}

namespace {

double cosine_similarity(const float* a, const float* b, size_t d) {
    const double dot = detail::dot_f32(a, b, d);
    const double na = std::sqrt(detail::dot_f32(a, a, d));
    const double nb = std::sqrt(detail::dot_f32(b, b, d));
    const double denom = na * nb;
    return denom > 0.0 ? dot / denom : 0.0;
}

}  // namespace

MergePlan bipartite_soft_matching(const Tensor& k, double merge_ratio) {
    LF_REQUIRE(k.rank() == 2, validation, "keys must be rank-2");
    const size_t n = k.rows(), d = k.cols();
    LF_REQUIRE(n >= 2, validation, "need at least two tokens to merge");
    LF_REQUIRE(merge_ratio >= 0.0 && merge_ratio < 0.5, validation,
               "merge_ratio must be in [0, 0.5)");

    MergePlan plan;
    plan.assignment.resize(n);
    std::iota(plan.assignment.begin(), plan.assignment.end(), size_t(0));
    plan.merged_count = floor_fraction(merge_ratio, n);
    if (plan.merged_count == 0) {
        plan.keep = plan.assignment;
        return plan;
    }

    struct Match {
        size_t a;
        size_t b;
        double sim;
    };
    std::vector<Match> matches;
    matches.reserve((n + 1) / 2);
    for (size_t a = 0; a < n; a += 2) {
        size_t best_b = 1;
        double best_sim = -std::numeric_limits<double>::infinity();
        for (size_t b = 1; b < n; b += 2) {
            const double sim = cosine_similarity(k.row(a), k.row(b), d);
            if (sim > best_sim) {  // ties keep the lower b
                best_sim = sim;
                best_b = b;
            }
        }
        matches.push_back({a, best_b, best_sim});
    }
    std::sort(matches.begin(), matches.end(), [](const Match& x, const Match& y) {
        if (x.sim != y.sim) return x.sim > y.sim;
        return x.a < y.a;
    });

    for (size_t i = 0; i < plan.merged_count; ++i)
        plan.assignment[matches[i].a] = matches[i].b;
    for (size_t i = 0; i < n; ++i)
        if (plan.assignment[i] == i) plan.keep.push_back(i);
    return plan;
}

Tensor apply_merge(const Tensor& t, const MergePlan& plan) {
    LF_REQUIRE(t.rank() == 2, validation, "rank-2 tensor required");
    plan.validate(t.rows());
    const size_t d = t.cols(), kept = plan.keep.size();

    std::vector<double> sums(kept * d, 0.0);
    std::vector<size_t> counts(kept, 0);
    for (size_t i = 0; i < t.rows(); ++i) {
        const size_t slot = plan.keep_rank(i);
        const float* src = t.row(i);
        double* dst = sums.data() + slot * d;
        for (size_t c = 0; c < d; ++c) dst[c] += double(src[c]);
        counts[slot]++;
    }
    Tensor out({kept, d});
    for (size_t s = 0; s < kept; ++s)
        for (size_t c = 0; c < d; ++c)
            out.at(s, c) = float(sums[s * d + c] / double(counts[s]));
    return out;
}

Tensor unmerge(const Tensor& merged, const MergePlan& plan) {
    LF_REQUIRE(merged.rank() == 2, validation, "rank-2 tensor required");
    const size_t n = plan.assignment.size();
    plan.validate(n);
    LF_REQUIRE(merged.rows() == plan.keep.size(), validation,
               "merged row count does not match plan");
    Tensor out({n, merged.cols()});
    for (size_t i = 0; i < n; ++i) {
        const float* src = merged.row(plan.keep_rank(i));
        std::copy(src, src + merged.cols(), out.row(i));
    }
    return out;
}

Tensor tome_attention(const Tensor& q, const Tensor& k, const Tensor& v,
                      double merge_ratio, int threads, uint64_t* score_evals) {
    LF_REQUIRE(q.rank() == 2 && k.rank() == 2 && v.rank() == 2, validation,
               "attention inputs must be rank-2");
    LF_REQUIRE(q.dims() == k.dims() && q.dims() == v.dims(), validation,
               "q, k, v must share one shape");
    const MergePlan plan = bipartite_soft_matching(k, merge_ratio);
    const Tensor qm = apply_merge(q, plan);
    const Tensor km = apply_merge(k, plan);
    const Tensor vm = apply_merge(v, plan);
    const Tensor om = dense_attention(qm, km, vm, threads, score_evals);
    return unmerge(om, plan);
}

}  // namespace litefocus
