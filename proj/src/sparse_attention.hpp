// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>

#include "attention.hpp"
#include "focus_set.hpp"
#include "tensor.hpp"

namespace litefocus {

// row j of the result equals row idx[j] of t
Tensor gather_rows(const Tensor& t, std::span<const size_t> idx);

// Per-query oracle: for each query build its focus set, gather the selected
// keys/values and run single-row softmax attention. O(N * |F| * d_k).
Tensor litefocus_attention_reference(const Tensor& q, const Tensor& k,
                                     const Tensor& v, const Spectrogrid& grid,
                                     const AttentionMode& mode,
                                     uint64_t* score_evals = nullptr);

// Fast path: queries of one frequency band share their same-frequency set and
// the compensation set is global, so each band is batched against one gathered
// key/value block. Equals the reference path within 1e-6 relative.
Tensor litefocus_attention_grouped(const Tensor& q, const Tensor& k,
                                   const Tensor& v, const Spectrogrid& grid,
                                   const AttentionMode& mode, int threads = 1,
                                   uint64_t* score_evals = nullptr);

// Hardware-independent cost: number of (query, key) score evaluations a mode
// performs on this grid.
uint64_t attended_pair_count(const Spectrogrid& grid, const AttentionMode& mode);

// One dispatch point for every mode/path combination; used by the transformer
// block, the C API and the CLI.
Tensor run_attention(const Tensor& q, const Tensor& k, const Tensor& v,
                     const Spectrogrid& grid, const AttentionMode& mode,
                     KernelPath path = KernelPath::grouped, int threads = 1,
                     uint64_t* score_evals = nullptr);

}  // namespace litefocus
