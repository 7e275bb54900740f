// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "tensor.hpp"

namespace litefocus {

// exact floor(fraction * n) computed on the rational value of the binary64
// argument, so boundaries like fraction=0.1, n=4096 never depend on rounding
size_t floor_fraction(double fraction, size_t n);

// Globally shared random key subset: floor(r*n) distinct indices drawn
// uniformly without replacement (partial Fisher-Yates), sorted ascending.
struct CompensationSet {
    std::vector<size_t> indices;
    double r = 0.0;
    uint64_t seed = 0;
};

CompensationSet cross_frequency_sample(size_t n_tokens, double r, uint64_t seed);

// all tokens in the same frequency band as `token`: {j | j mod n_f == token mod n_f}
std::vector<size_t> same_frequency_set(const Spectrogrid& grid, size_t token);

// Key/value indices one query interacts with: the union of its
// same-frequency set and the shared compensation set, sorted, deduplicated.
struct FocusSet {
    std::vector<size_t> indices;
    size_t owner = 0;
};

FocusSet build_focus_set(const Spectrogrid& grid, size_t token,
                         const CompensationSet& comp, bool include_same_freq);

// E|S_i ∪ C| under uniform sampling without replacement:
// n_t + floor(r*N) - floor(r*N) * n_t / N
double expected_focus_size(const Spectrogrid& grid, double r);

}  // namespace litefocus
