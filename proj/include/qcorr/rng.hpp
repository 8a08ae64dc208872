// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace qcorr {

// splitmix64 step; used to derive independent sub-stream seeds from one
// master seed (seed, index) without correlated low bits.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 1));
}

// Deterministic uniform stream. mt19937_64 is specified bit-exactly by the
// standard, and uniforms are produced by the 53-bit shift construction
// rather than std::uniform_real_distribution (whose output is
// implementation-defined), so sequences are reproducible everywhere.
class SeededStream {
  public:
    explicit SeededStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    // Uniform in [0, 1) with 53 random bits.
    double next_uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t next_raw() { return engine_(); }
    std::uint64_t seed() const { return seed_; }

  private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

}  // namespace qcorr
