#pragma once

#include <cstdint>

namespace mol {

// The one PRNG used anywhere in the project (opaque resolution in the
// interpreter, corpus generation). SplitMix64, fixed for reproducibility:
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// nextBool() is the low bit of next(). Identical seeds give identical
// streams on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    bool nextBool() { return (next() & 1u) != 0; }

    // Uniform in [0, bound) by rejection; bound must be nonzero.
    uint64_t nextBelow(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // Uniform double in [0, 1).
    double nextUnit() { return double(next() >> 11) * 0x1.0p-53; }

private:
    uint64_t state_;
};

} // namespace mol
