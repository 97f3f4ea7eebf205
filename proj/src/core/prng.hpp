#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "core/ring.hpp"

namespace trefoil {

// splitmix64 finalizer; used both for seed derivation and as the block
// function of the counter-mode generators below.
inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t tag) { return mix64(mix64(seed) ^ mix64(tag)); }

inline uint64_t os_entropy64() {
    std::random_device rd;
    return ((uint64_t)rd() << 32) ^ rd() ^ (mix64((uint64_t)std::random_device{}()) << 1);
}

// Deterministic counter-mode stream. Two parties holding the same seed and
// drawing in the same order observe identical values.
class Stream {
  public:
    Stream() = default;
    explicit Stream(uint64_t seed) : seed_(seed) {}

    uint64_t next_word() { return mix64(seed_ ^ mix64(++ctr_)); }

    u128 next_u128() {
        uint64_t lo = next_word();
        uint64_t hi = next_word();
        return ((u128)hi << 64) | lo;
    }

    u128 next_ring(const RingConfig& cfg) {
        if (cfg.width_bits <= 64) return cfg.reduce((u128)next_word());
        return cfg.reduce(next_u128());
    }

    void next_ring_vec(const RingConfig& cfg, std::vector<u128>& out, size_t n) {
        out.resize(n);
        if (cfg.width_bits == 1) {
            // bit batches: 64 bits per block
            for (size_t i = 0; i < n; i += 64) {
                uint64_t w = next_word();
                size_t hi = std::min(n, i + 64);
                for (size_t j = i; j < hi; ++j) out[j] = (w >> (j - i)) & 1;
            }
        } else {
            for (size_t i = 0; i < n; ++i) out[i] = next_ring(cfg);
        }
    }

    bool next_bit() { return next_word() & 1; }

    // Uniform value in [0, bound), bound >= 1.
    uint64_t next_below(uint64_t bound) {
        // rejection sampling on the top range to avoid modulo bias
        uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        uint64_t v;
        do {
            v = next_word();
        } while (v >= limit);
        return v % bound;
    }

  private:
    uint64_t seed_ = 0;
    uint64_t ctr_ = 0;
};

// Purpose tags for the pairwise streams; both holders of a pair seed must
// draw from the same substream in the same order.
enum class StreamTag : uint64_t {
    ZeroShare = 1,
    InputMask = 2,
    Shuffle = 3,
    BitInput = 4,
    Dabit = 5,
};

// The bundle of substreams derived from one pairwise seed.
class PairStreams {
  public:
    PairStreams() = default;
    explicit PairStreams(uint64_t pair_seed)
        : zero_(derive_seed(pair_seed, (uint64_t)StreamTag::ZeroShare)),
          input_(derive_seed(pair_seed, (uint64_t)StreamTag::InputMask)),
          shuffle_(derive_seed(pair_seed, (uint64_t)StreamTag::Shuffle)),
          bits_(derive_seed(pair_seed, (uint64_t)StreamTag::BitInput)),
          dabit_(derive_seed(pair_seed, (uint64_t)StreamTag::Dabit)) {}

    Stream& zero() { return zero_; }
    Stream& input() { return input_; }
    Stream& shuffle() { return shuffle_; }
    Stream& bits() { return bits_; }
    Stream& dabit() { return dabit_; }

  private:
    Stream zero_, input_, shuffle_, bits_, dabit_;
};

}  // namespace trefoil
