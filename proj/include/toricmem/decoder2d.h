#ifndef TORICMEM_DECODER2D_H
#define TORICMEM_DECODER2D_H

#include <cstdint>

#include "toricmem/lattice.h"
#include "toricmem/pairing.h"

namespace toricmem {

struct DecodeOutcome {
    bool success = true;
    HomologyClass residual_class;
    ErrorConfig recovery;
    Pairing pairing;
};

/// Pairs the syndrome of cfg with expanding diamonds and applies a geodesic per pair.
DecodeOutcome decode(const TorusLattice &lat, const ErrorConfig &cfg, Chooser &chooser);
DecodeOutcome decode(const TorusLattice &lat, const ErrorConfig &cfg, Stream &rng);

/// One perfect-measurement trial: sample at rate p, decode, report failure.
/// Edge draws come first, tie-breaks after, all from one stream seeded with seed.
bool run_trial(int k, double p, uint64_t seed);

}  // namespace toricmem

#endif
