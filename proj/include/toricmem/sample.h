#ifndef TORICMEM_SAMPLE_H
#define TORICMEM_SAMPLE_H

#include <cstdint>

namespace toricmem {

/// Monte Carlo tally for one (k, p, q) cell. For memory runs, trials counts rounds.
struct FailureSample {
    int k = 0;
    double p = 0.0;
    double q = 0.0;
    uint64_t trials = 0;
    uint64_t failures = 0;

    double rate() const {
        return trials ? static_cast<double>(failures) / static_cast<double>(trials) : 0.0;
    }
};

}  // namespace toricmem

#endif
