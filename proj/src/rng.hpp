// Copyright (c) 2026 the litefocus authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>

namespace litefocus {

// xoshiro256++ seeded through splitmix64.
//
// The generator algorithm is part of the public contract: the stream produced
// for a given seed must never change between releases, otherwise golden files
// and every seeded benchmark drift. Uniform floats are built from the top 24
// bits (exactly representable in binary32); normals use Box-Muller on 53-bit
// doubles.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto& s : state_) s = splitmix64(x);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in [0, n); unbiased via rejection
    uint64_t next_below(uint64_t n) {
        const uint64_t limit = n * (UINT64_MAX / n);
        uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    // [0, 1) with 24-bit resolution
    float next_uniform01() { return float(next_u64() >> 40) * 0x1.0p-24f; }

    // [0, 1) with 53-bit resolution
    double next_double53() { return double(next_u64() >> 11) * 0x1.0p-53; }

    float next_standard_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return float(spare_);
        }
        const double u1 = next_double53();  // 1-u1 in (0,1], log is finite
        const double u2 = next_double53();
        const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
        const double angle = 2.0 * pi_ * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return float(radius * std::cos(angle));
    }

    static uint64_t splitmix64(uint64_t& x) {
        uint64_t z = (x += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // stable subseed for (stream a, stream b), e.g. (block index, step)
    static uint64_t derive(uint64_t base, uint64_t a, uint64_t b) {
        uint64_t x = base;
        uint64_t h = splitmix64(x);
        x ^= a * 0xD1342543DE82EF95ull + 0x2545F4914F6CDD1Dull;
        h ^= splitmix64(x);
        x ^= b * 0xDA942042E4DD58B5ull + 0xCA5A826395121157ull;
        h ^= splitmix64(x);
        return h;
    }

private:
    static uint64_t rotl(uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    static constexpr double pi_ = 3.14159265358979323846;
    uint64_t state_[4] = {};
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace litefocus
