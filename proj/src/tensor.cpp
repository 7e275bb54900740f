// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#include "tensor.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

#include "error.hpp"
#include "rng.hpp"

namespace litefocus {

namespace {

constexpr uint64_t kMaxElements = uint64_t(1) << 31;

uint64_t checked_element_count(const std::vector<size_t>& dims) {
    LF_REQUIRE(!dims.empty(), validation, "tensor rank must be at least 1");
    uint64_t n = 1;
    for (size_t d : dims) {
        LF_REQUIRE(d > 0, validation, "tensor dims must be positive");
        LF_REQUIRE(n <= kMaxElements / d, validation, "tensor too large");
        n *= d;
    }
    return n;
}

}  // namespace

Tensor::Tensor(std::vector<size_t> dims) {
    const uint64_t n = checked_element_count(dims);
    dims_ = std::move(dims);
    data_.assign(size_t(n), 0.0f);
}

Tensor::Tensor(std::vector<size_t> dims, std::vector<float> data) {
    const uint64_t n = checked_element_count(dims);
    LF_REQUIRE(data.size() == n, validation,
               "data length does not match product of dims");
    dims_ = std::move(dims);
    data_ = std::move(data);
}

size_t Tensor::rows() const {
    LF_REQUIRE(rank() == 2, validation, "rank-2 tensor required");
    return dims_[0];
}

size_t Tensor::cols() const {
    LF_REQUIRE(rank() == 2, validation, "rank-2 tensor required");
    return dims_[1];
}

bool Tensor::all_finite() const {
    for (float v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

bool Tensor::same_bits(const Tensor& other) const {
    if (dims_ != other.dims_) return false;
    return std::memcmp(data_.data(), other.data_.data(),
                       data_.size() * sizeof(float)) == 0;
}

Tensor random_tensor(const std::vector<size_t>& dims, uint64_t seed, Dist dist) {
    const uint64_t n = checked_element_count(dims);
    std::vector<float> data(static_cast<size_t>(n));
    Rng rng(seed);
    if (dist == Dist::uniform01) {
        for (auto& v : data) v = rng.next_uniform01();
    } else {
        for (auto& v : data) v = rng.next_standard_normal();
    }
    return Tensor(dims, std::move(data));
}

namespace {

constexpr char kMagic[4] = {'L', 'F', 'T', 'N'};
constexpr uint32_t kVersion = 1;

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xFF));
}

uint32_t get_u32(const unsigned char* p) {
    uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

uint64_t get_u64(const unsigned char* p) {
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

}  // namespace

void write_tensor(const Tensor& t, const std::string& path) {
    LF_REQUIRE(t.rank() >= 1, validation, "cannot write empty tensor");
    LF_REQUIRE(t.all_finite(), validation, "refusing to write non-finite values");

    std::string buf;
    buf.reserve(12 + 8 * t.rank() + 4 * t.size());
    buf.append(kMagic, 4);
    put_u32(buf, kVersion);
    put_u32(buf, uint32_t(t.rank()));
    for (size_t d : t.dims()) put_u64(buf, uint64_t(d));
    for (size_t i = 0; i < t.size(); ++i)
        put_u32(buf, std::bit_cast<uint32_t>(t.data()[i]));

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    LF_REQUIRE(f.good(), io, "cannot open for writing: " + path);
    f.write(buf.data(), std::streamsize(buf.size()));
    f.flush();
    LF_REQUIRE(f.good(), io, "write failed: " + path);
}

Tensor read_tensor(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    LF_REQUIRE(f.good(), io, "cannot open for reading: " + path);
    std::string raw((std::istreambuf_iterator<char>(f)),
                    std::istreambuf_iterator<char>());
    LF_REQUIRE(f.good() || f.eof(), io, "read failed: " + path);
    const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
    const size_t len = raw.size();

    LF_REQUIRE(len >= 12, format, "file too short for LFTN header: " + path);
    LF_REQUIRE(std::memcmp(p, kMagic, 4) == 0, format, "bad magic bytes: " + path);
    LF_REQUIRE(get_u32(p + 4) == kVersion, format, "unsupported LFTN version: " + path);
    const uint32_t rank = get_u32(p + 8);
    LF_REQUIRE(rank >= 1 && rank <= 64, format, "unreasonable rank: " + path);
    LF_REQUIRE(len >= 12 + size_t(rank) * 8, truncated,
               "header truncated: " + path);

    std::vector<size_t> dims(rank);
    uint64_t n = 1;
    for (uint32_t i = 0; i < rank; ++i) {
        const uint64_t d = get_u64(p + 12 + 8 * i);
        LF_REQUIRE(d > 0, format, "zero dim in header: " + path);
        LF_REQUIRE(n <= kMaxElements / d, format, "declared tensor too large: " + path);
        n *= d;
        dims[i] = size_t(d);
    }

    const size_t payload_off = 12 + size_t(rank) * 8;
    LF_REQUIRE(len >= payload_off + size_t(n) * 4, truncated,
               "payload shorter than header declares: " + path);
    LF_REQUIRE(len == payload_off + size_t(n) * 4, format,
               "trailing bytes after payload: " + path);

    std::vector<float> data(static_cast<size_t>(n));
    for (size_t i = 0; i < size_t(n); ++i) {
        const float v = std::bit_cast<float>(get_u32(p + payload_off + 4 * i));
        LF_REQUIRE(std::isfinite(v), validation, "non-finite payload value: " + path);
        data[i] = v;
    }
    return Tensor(std::move(dims), std::move(data));
}

double max_abs(const Tensor& t) {
    double m = 0.0;
    for (size_t i = 0; i < t.size(); ++i)
        m = std::max(m, std::abs(double(t.data()[i])));
    return m;
}

double relative_deviation(const Tensor& a, const Tensor& b) {
    LF_REQUIRE(a.dims() == b.dims(), validation,
               "relative_deviation: shape mismatch");
    double diff = 0.0;
    for (size_t i = 0; i < a.size(); ++i)
        diff = std::max(diff, std::abs(double(a.data()[i]) - double(b.data()[i])));
    const double scale = std::max({max_abs(a), max_abs(b), 1e-30});
    return diff / scale;
}

Spectrogrid::Spectrogrid(size_t nt, size_t nf) : n_t(nt), n_f(nf) {
    LF_REQUIRE(nt > 0 && nf > 0, validation, "grid dims must be positive");
    LF_REQUIRE(nt <= kMaxElements / nf, validation, "grid too large");
}

size_t Spectrogrid::token_index(size_t a, size_t b) const {
    LF_REQUIRE(a < n_t, validation, "time coordinate out of range");
    LF_REQUIRE(b < n_f, validation, "frequency coordinate out of range");
    return a * n_f + b;
}

std::pair<size_t, size_t> Spectrogrid::token_coords(size_t i) const {
    LF_REQUIRE(i < tokens(), validation, "token index out of range");
    return {i / n_f, i % n_f};
}

}  // namespace litefocus
