// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "tensor.hpp"

namespace litefocus {

// Token-merging baseline: similar tokens collapse into one representative
// before attention runs and the result is duplicated back afterwards.
struct MergePlan {
    std::vector<size_t> keep;        // surviving token indices, sorted
    std::vector<size_t> assignment;  // original index -> surviving token index
    size_t merged_count = 0;

    void validate(size_t n) const;
    size_t keep_rank(size_t original) const;  // row of assignment[original] in keep
};

// Alternate tokens into sets A (even) and B (odd), cosine-match every A token
// to its most similar B token, merge the floor(merge_ratio * N) best matches.
// Ties break toward the lower index. merge_ratio must stay below 0.5.
MergePlan bipartite_soft_matching(const Tensor& k, double merge_ratio);

// surviving row = unweighted mean of all rows assigned to it
Tensor apply_merge(const Tensor& t, const MergePlan& plan);

// row i of the result = merged row of assignment[i]
Tensor unmerge(const Tensor& merged, const MergePlan& plan);

// plan from k, merge q/k/v, dense attention on the reduced sequence, unmerge.
// merge_ratio = 0 reproduces dense attention bitwise.
Tensor tome_attention(const Tensor& q, const Tensor& k, const Tensor& v,
                      double merge_ratio, int threads = 1,
                      uint64_t* score_evals = nullptr);

}  // namespace litefocus
