// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors
#pragma once

// Deterministic randomness helpers. std::shuffle and the distribution
// classes are implementation-defined, so every draw that can reach an
// artifact goes through these instead. mt19937_64 itself is specified
// bit-exactly by the standard.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace repotopics::detrand {

// FNV-1a, 64-bit, standard offset basis and prime.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Stable seed for (url, hash_seed): hash the url bytes followed by the
// seed's 8 little-endian bytes.
inline std::uint64_t seed_for(std::string_view url, std::uint64_t hash_seed) {
    std::uint64_t h = fnv1a(url);
    for (int i = 0; i < 8; ++i) {
        h ^= static_cast<unsigned char>(hash_seed >> (8 * i));
        h *= 0x100000001b3ull;
    }
    return h;
}

// Unbiased integer in [0, n) via rejection sampling.
inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = n * (UINT64_MAX / n);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

// k distinct indices drawn uniformly from [0, n), in draw order.
inline std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::mt19937_64& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k && i < n; ++i) {
        std::size_t j = i + static_cast<std::size_t>(below(rng, n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k < n ? k : n);
    return idx;
}

}  // namespace repotopics::detrand
