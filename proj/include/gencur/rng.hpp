#pragma once

#include <cassert>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace gencur {

// 64-bit FNV-1a, used for stream labels, scenario seeds and file hashing.
inline constexpr std::uint64_t fnv1a64(const void* data, std::size_t n,
                                       std::uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline constexpr std::uint64_t fnv1a64(std::string_view s,
                                       std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline constexpr std::uint64_t splitmix64_step(std::uint64_t& x) {
    x += 0x9E3779B97f4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256** seeded through SplitMix64. Self-contained so that identical
// seeds give identical draw sequences on every platform; the standard
// library distributions make no such promise.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64_step(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1), 53 bits of precision. Never returns 1.0.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, bound), unbiased via rejection. bound must be nonzero.
    std::uint64_t uniform_u64(std::uint64_t bound) {
        assert(bound > 0);
        const std::uint64_t threshold = (0ULL - bound) % bound;
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x >= threshold) return x % bound;
        }
    }

    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(uniform_u64(n));
    }

    // Uniform integer in [lo, hi], inclusive on both ends.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        assert(lo <= hi);
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(uniform_u64(span));
    }

    bool bernoulli(double p) { return uniform01() < p; }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

// Derives the seed for a named substream of a master seed. Streams with
// different labels are independent for all practical purposes.
inline std::uint64_t substream_seed(std::uint64_t master, std::string_view label) {
    std::uint64_t h = fnv1a64(&master, sizeof master);
    h = fnv1a64(label, h);
    return splitmix64_step(h);
}

inline Rng substream(std::uint64_t master, std::string_view label) {
    return Rng(substream_seed(master, label));
}

// The named streams one run consumes. Keeping them separate means a change
// in how many draws one phase makes cannot shift any other phase.
struct RngStreams {
    Rng population_init;
    Rng crossover;
    Rng mutation;
    Rng exploration;
    Rng schedule;

    static RngStreams from_master(std::uint64_t master) {
        return RngStreams{
            substream(master, "population-init"),
            substream(master, "crossover"),
            substream(master, "mutation"),
            substream(master, "exploration"),
            substream(master, "schedule"),
        };
    }
};

// In-place Fisher-Yates shuffle driven by our own Rng (std::shuffle is
// implementation-defined and would break run reproducibility across
// standard libraries).
template <typename T>
void shuffle_in_place(std::vector<T>& v, Rng& rng) {
    for (std::size_t k = v.size(); k > 1; --k) {
        const std::size_t j = rng.uniform_index(k);
        std::swap(v[k - 1], v[j]);
    }
}

}  // namespace gencur
