#include "toricmem/decoder2d.h"

#include <stdexcept>

namespace toricmem {

DecodeOutcome decode(const TorusLattice &lat, const ErrorConfig &cfg, Chooser &chooser) {
    DecodeOutcome out;
    Syndrome syn = syndrome_of(lat, cfg);
    out.pairing = expand_and_pair(lat, syn, chooser);
    out.recovery = ErrorConfig(cfg.size());
    for (auto [a, b] : out.pairing.pairs) {
        xor_path(out.recovery, lat.shortest_path(a, b));
    }
    ErrorConfig residual = cfg;
    residual ^= out.recovery;
    out.residual_class = homology_class(lat, residual);
    out.success = out.residual_class.trivial();
    return out;
}

DecodeOutcome decode(const TorusLattice &lat, const ErrorConfig &cfg, Stream &rng) {
    RandomChooser chooser(rng);
    return decode(lat, cfg, chooser);
}

bool run_trial(int k, double p, uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("p must lie in [0, 1]");
    }
    TorusLattice lat(k);
    Stream rng(seed);
    ErrorConfig cfg = sample_errors(lat, p, rng);
    return !decode(lat, cfg, rng).success;
}

}  // namespace toricmem
