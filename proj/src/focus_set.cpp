// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#include "focus_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"
#include "rng.hpp"

namespace litefocus {

size_t floor_fraction(double fraction, size_t n) {
    LF_REQUIRE(std::isfinite(fraction) && fraction >= 0.0 && fraction <= 1.0,
               validation, "fraction must be in [0, 1]");
    if (fraction == 0.0 || n == 0) return 0;
    if (fraction == 1.0) return n;

    // fraction = mant * 2^(exp-53) with mant an integer below 2^53
    int exp = 0;
    const double norm = std::frexp(fraction, &exp);
    const auto mant = uint64_t(std::ldexp(norm, 53));
    const int shift = 53 - exp;  // fraction <= 1 means shift >= 52
    const unsigned __int128 product = (unsigned __int128)mant * n;
    if (shift >= 120) return 0;
    return size_t(product >> shift);
}

CompensationSet cross_frequency_sample(size_t n_tokens, double r, uint64_t seed) {
    const size_t take = floor_fraction(r, n_tokens);
    CompensationSet out;
    out.r = r;
    out.seed = seed;
    if (take == 0) return out;

    std::vector<size_t> pool(n_tokens);
    std::iota(pool.begin(), pool.end(), size_t(0));
    Rng rng(seed);
    for (size_t i = 0; i < take; ++i) {
        const size_t j = i + size_t(rng.next_below(uint64_t(n_tokens - i)));
        std::swap(pool[i], pool[j]);
    }
    out.indices.assign(pool.begin(), pool.begin() + ptrdiff_t(take));
    std::sort(out.indices.begin(), out.indices.end());
    return out;
}

std::vector<size_t> same_frequency_set(const Spectrogrid& grid, size_t token) {
    LF_REQUIRE(token < grid.tokens(), validation, "token index out of range");
    const size_t band = token % grid.n_f;
    std::vector<size_t> out(grid.n_t);
    for (size_t a = 0; a < grid.n_t; ++a) out[a] = a * grid.n_f + band;
    return out;
}

FocusSet build_focus_set(const Spectrogrid& grid, size_t token,
                         const CompensationSet& comp, bool include_same_freq) {
    LF_REQUIRE(token < grid.tokens(), validation, "token index out of range");
    for (size_t j : comp.indices)
        LF_REQUIRE(j < grid.tokens(), validation, "compensation index out of range");

    FocusSet fs;
    fs.owner = token;
    if (!include_same_freq) {
        fs.indices = comp.indices;  // already sorted unique
        return fs;
    }

    const std::vector<size_t> same = same_frequency_set(grid, token);
    fs.indices.reserve(same.size() + comp.indices.size());
    std::set_union(same.begin(), same.end(), comp.indices.begin(),
                   comp.indices.end(), std::back_inserter(fs.indices));
    return fs;
}

double expected_focus_size(const Spectrogrid& grid, double r) {
    const double n = double(grid.tokens());
    const double c = double(floor_fraction(r, grid.tokens()));
    return double(grid.n_t) + c - c * (double(grid.n_t) / n);
}

}  // namespace litefocus
