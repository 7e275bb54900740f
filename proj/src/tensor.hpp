// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace litefocus {

enum class Dist { standard_normal, uniform01 };

// Dense row-major tensor of binary32 values. Dims are always positive and
// the flat payload length equals their product; library operations never
// store NaN or Inf.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<size_t> dims);                  // zero-filled
    Tensor(std::vector<size_t> dims, std::vector<float> data);  // takes ownership

    size_t rank() const { return dims_.size(); }
    const std::vector<size_t>& dims() const { return dims_; }
    size_t size() const { return data_.size(); }

    // rank-2 accessors
    size_t rows() const;
    size_t cols() const;
    float at(size_t r, size_t c) const { return data_[r * cols() + c]; }
    float& at(size_t r, size_t c) { return data_[r * cols() + c]; }
    const float* row(size_t r) const { return data_.data() + r * cols(); }
    float* row(size_t r) { return data_.data() + r * cols(); }

    const float* data() const { return data_.data(); }
    float* data() { return data_.data(); }

    bool all_finite() const;
    bool same_bits(const Tensor& other) const;

private:
    std::vector<size_t> dims_;
    std::vector<float> data_;
};

// deterministic tensor generation; the algorithm is pinned (see Rng)
Tensor random_tensor(const std::vector<size_t>& dims, uint64_t seed, Dist dist);

// LFTN container, bit-exact on every platform:
//   "LFTN" | u32 LE version (=1) | u32 LE rank | rank x u64 LE dims |
//   product(dims) binary32 LE values, row-major. No padding, no footer.
Tensor read_tensor(const std::string& path);
void write_tensor(const Tensor& t, const std::string& path);

// largest |a_ij - b_ij| divided by the largest magnitude in either tensor
double relative_deviation(const Tensor& a, const Tensor& b);
double max_abs(const Tensor& t);

// Token grid of a time x frequency latent: n_t time steps by n_f frequency
// bands, flattened time-major so token (a, b) lives at index a*n_f + b and
// tokens of one frequency band sit n_f apart.
struct Spectrogrid {
    size_t n_t = 0;
    size_t n_f = 0;

    Spectrogrid(size_t nt, size_t nf);
    size_t tokens() const { return n_t * n_f; }
    size_t token_index(size_t a, size_t b) const;
    std::pair<size_t, size_t> token_coords(size_t i) const;
};

}  // namespace litefocus
