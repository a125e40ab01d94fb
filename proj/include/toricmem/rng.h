#ifndef TORICMEM_RNG_H
#define TORICMEM_RNG_H

#include <cstddef>
#include <cstdint>
#include <random>

namespace toricmem {

/// splitmix64 finalizer. Bijective on 64-bit words.
uint64_t mix64(uint64_t x);

/// Precomputed acceptance threshold for a Bernoulli(p) draw on raw 64-bit words.
struct BernoulliThreshold {
    uint64_t cut = 0;
    bool always = false;

    static BernoulliThreshold from_probability(double p);
    bool never() const {
        return !always && cut == 0;
    }
};

/// Per-trial random stream. The engine is std::mt19937_64, whose output sequence is fixed
/// by the standard; every derived draw is computed here so results match across platforms.
class Stream {
   public:
    explicit Stream(uint64_t seed) : engine_(seed) {
    }

    uint64_t next() {
        return engine_();
    }
    bool bernoulli(const BernoulliThreshold &t) {
        if (t.always) {
            return true;
        }
        return engine_() < t.cut;
    }
    /// Uniform integer in [0, n). n must be positive.
    uint64_t below(uint64_t n);
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

   private:
    std::mt19937_64 engine_;
};

}  // namespace toricmem

#endif
