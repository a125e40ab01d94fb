#ifndef TORICMEM_RING_H
#define TORICMEM_RING_H

#include <cstddef>
#include <vector>

#include "toricmem/lattice.h"
#include "toricmem/pairing.h"

namespace toricmem {

struct RingOutcome {
    /// The residual is either empty (success) or the whole ring.
    bool success = true;
    ErrorConfig recovery;
    Pairing pairing;
};

RingOutcome ring_decode(const RingLattice &lat, const ErrorConfig &cfg, Chooser &chooser);

/// Longest connected run of edges covered by errors or by any applied recovery chain that
/// contains every error, or 0 when the errors end up in more than one run.
int single_chain_extent(const RingLattice &lat, const ErrorConfig &errors, const Pairing &pairing);

/// Every pairing the staged algorithm can produce on syn, each listed once. Pair order inside a
/// radius step follows canonical candidate order rather than acceptance order.
std::vector<Pairing> ring_reachable_pairings(const RingLattice &lat, const Syndrome &syn);

struct ChainSearchResult {
    int max_length = 0;
    /// Error edges of one maximizing placement.
    std::vector<int> witness;
    size_t placements = 0;
    size_t resolutions = 0;
    int window = 0;
};

/// Exhaustive search for the longest chain the 1d algorithm can build from n errors. The first
/// error sits at edge 0 and the others range over edges 1..window-1; every reachable pairing of
/// every placement is followed. window = 0 picks 3^ceil(log2 n) + 4.
ChainSearchResult ring_max_chain_search(int n, int k_search, int window = 0);

}  // namespace toricmem

#endif
