#include "toricmem/rng.h"

#include <cmath>
#include <stdexcept>

namespace toricmem {

uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

BernoulliThreshold BernoulliThreshold::from_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("probability must lie in [0, 1]");
    }
    BernoulliThreshold t;
    if (p >= 1.0) {
        t.always = true;
        return t;
    }
    // p < 1 so p * 2^64 < 2^64; ldexp is exact and the cast truncates.
    t.cut = static_cast<uint64_t>(std::ldexp(p, 64));
    return t;
}

uint64_t Stream::below(uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("below(0)");
    }
    // Lemire's multiply-shift with rejection.
    unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * n;
    uint64_t low = static_cast<uint64_t>(m);
    if (low < n) {
        uint64_t floor = (0 - n) % n;
        while (low < floor) {
            m = static_cast<unsigned __int128>(engine_()) * n;
            low = static_cast<uint64_t>(m);
        }
    }
    return static_cast<uint64_t>(m >> 64);
}

}  // namespace toricmem
