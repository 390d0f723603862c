#pragma once

#include <cstdint>
#include <string_view>

namespace mdfol {

/// Counter-based generator (SplitMix64 finalizer over key + counter).
/// Each consumer names its stream, so draws are reproducible per check and
/// independent streams never share state.
class Rng {
  public:
    Rng(std::uint64_t seed, std::string_view stream) : key_(mix(seed ^ fnv1a(stream))) {}

    std::uint64_t next_u64() { return mix(key_ + 0x9E3779B97F4A7C15ull * ++counter_); }

    /// Uniform in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    /// Uniform nonzero draw: retries until |x| >= floor.
    double next_nonzero(double lo, double hi, double floor) {
        for (;;) {
            const double x = next_uniform(lo, hi);
            if (x >= floor || x <= -floor) return x;
        }
    }

  private:
    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        return h;
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace mdfol
