#include "toricmem/ring.h"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>

namespace toricmem {

RingOutcome ring_decode(const RingLattice &lat, const ErrorConfig &cfg, Chooser &chooser) {
    RingOutcome out;
    out.pairing = expand_and_pair(lat, syndrome_of(lat, cfg), chooser);
    out.recovery = ErrorConfig(cfg.size());
    for (auto [a, b] : out.pairing.pairs) {
        xor_path(out.recovery, lat.shortest_path(a, b));
    }
    ErrorConfig residual = cfg;
    residual ^= out.recovery;
    out.success = residual.none();
    return out;
}

int single_chain_extent(const RingLattice &lat, const ErrorConfig &errors, const Pairing &pairing) {
    int k = lat.k();
    std::vector<uint8_t> covered(static_cast<size_t>(k), 0);
    int first = -1;
    errors.for_each_one([&](size_t e) {
        covered[e] = 1;
        if (first < 0) {
            first = static_cast<int>(e);
        }
    });
    if (first < 0) {
        return 0;
    }
    for (auto [a, b] : pairing.pairs) {
        for (int e : lat.shortest_path(a, b)) {
            covered[static_cast<size_t>(e)] = 1;
        }
    }
    int lo = first;
    int len = 1;
    while (len < k && covered[static_cast<size_t>(lat.wrap(lo - 1))]) {
        lo = lat.wrap(lo - 1);
        len++;
    }
    if (len == k) {
        return k;
    }
    int hi = first;
    while (covered[static_cast<size_t>(lat.wrap(hi + 1))]) {
        hi = lat.wrap(hi + 1);
        len++;
    }
    // Every error must fall inside [lo, hi].
    bool all_inside = true;
    errors.for_each_one([&](size_t e) {
        int off = lat.wrap(static_cast<int>(e) - lo);
        if (off >= len) {
            all_inside = false;
        }
    });
    return all_inside ? len : 0;
}

namespace {

// Follows every distinct pairing the staged algorithm can reach on one placement. At each
// radius the accepted pairs form a maximal set of disjoint candidates, and every such set is
// reachable by some acceptance order, so the reachable outcomes are exactly these sets.
class OutcomeSearch {
   public:
    OutcomeSearch(const RingLattice &lat, std::vector<int> particles)
        : lat_(lat), particles_(std::move(particles)) {
    }

    template <typename Leaf>
    void run(Leaf &&leaf) {
        std::vector<std::pair<int, int>> pairs;
        uint32_t all = particles_.size() >= 32 ? ~0u : (1u << particles_.size()) - 1;
        step(all, pairs, leaf);
    }

   private:
    template <typename Leaf>
    void step(uint32_t open, std::vector<std::pair<int, int>> &pairs, Leaf &leaf) {
        if (open == 0) {
            leaf(pairs);
            return;
        }
        int n = static_cast<int>(particles_.size());
        int dmin = lat_.diameter() + 1;
        for (int i = 0; i < n; i++) {
            for (int j = i + 1; j < n; j++) {
                if ((open >> i & 1) && (open >> j & 1)) {
                    dmin = std::min(dmin, lat_.distance(particles_[i], particles_[j]));
                }
            }
        }
        if (dmin > lat_.diameter()) {
            throw std::logic_error("ring search: particles left unpaired");
        }
        std::vector<std::pair<int, int>> cand;
        for (int i = 0; i < n; i++) {
            for (int j = i + 1; j < n; j++) {
                if ((open >> i & 1) && (open >> j & 1) &&
                    lat_.distance(particles_[i], particles_[j]) == dmin) {
                    cand.push_back({i, j});
                }
            }
        }
        choose_set(cand, 0, 0, open, pairs, leaf);
    }

    template <typename Leaf>
    void choose_set(const std::vector<std::pair<int, int>> &cand, size_t idx, uint32_t used,
                    uint32_t open, std::vector<std::pair<int, int>> &pairs, Leaf &leaf) {
        if (idx == cand.size()) {
            for (auto [i, j] : cand) {
                if (!(used >> i & 1) && !(used >> j & 1)) {
                    return;  // not maximal
                }
            }
            step(open & ~used, pairs, leaf);
            return;
        }
        auto [i, j] = cand[idx];
        uint32_t m = (1u << i) | (1u << j);
        if (!(used & m)) {
            pairs.push_back({particles_[static_cast<size_t>(i)], particles_[static_cast<size_t>(j)]});
            choose_set(cand, idx + 1, used | m, open, pairs, leaf);
            pairs.pop_back();
        }
        choose_set(cand, idx + 1, used, open, pairs, leaf);
    }

    const RingLattice &lat_;
    std::vector<int> particles_;
};

}  // namespace

std::vector<Pairing> ring_reachable_pairings(const RingLattice &lat, const Syndrome &syn) {
    if (syn.defects.size() % 2 != 0 || syn.defects.size() > 30) {
        throw std::invalid_argument("ring_reachable_pairings: unsupported syndrome");
    }
    std::vector<Pairing> out;
    OutcomeSearch search(lat, syn.defects);
    search.run([&](const std::vector<std::pair<int, int>> &pairs) {
        Pairing p;
        p.pairs = pairs;
        out.push_back(std::move(p));
    });
    return out;
}

ChainSearchResult ring_max_chain_search(int n, int k_search, int window) {
    if (n < 1 || n > 15) {
        throw std::invalid_argument("ring_max_chain_search needs 1 <= n <= 15");
    }
    if (window <= 0) {
        int p3 = 1;
        for (int m = 1; m < n; m *= 2) {
            p3 *= 3;
        }
        window = p3 + 4;
    }
    if (window < n || 2 * window >= k_search) {
        throw std::invalid_argument("ring too small for the search window");
    }
    RingLattice lat(k_search);
    ChainSearchResult res;
    res.window = window;
    std::vector<int> pos(static_cast<size_t>(n));
    for (int i = 0; i < n; i++) {
        pos[static_cast<size_t>(i)] = i;
    }
    ErrorConfig cfg(static_cast<size_t>(k_search));
    Pairing scratch;
    while (true) {
        cfg.clear();
        for (int e : pos) {
            cfg.set(static_cast<size_t>(e));
        }
        Syndrome syn = syndrome_of(lat, cfg);
        res.placements++;
        OutcomeSearch search(lat, syn.defects);
        search.run([&](const std::vector<std::pair<int, int>> &pairs) {
            res.resolutions++;
            scratch.pairs = pairs;
            int ext = single_chain_extent(lat, cfg, scratch);
            if (ext > res.max_length) {
                res.max_length = ext;
                res.witness = pos;
            }
        });
        // Next combination of positions 1..n-1 drawn from [1, window).
        int i = n - 1;
        while (i >= 1 && pos[static_cast<size_t>(i)] == window - n + i) {
            i--;
        }
        if (i < 1) {
            break;
        }
        pos[static_cast<size_t>(i)]++;
        for (int j = i + 1; j < n; j++) {
            pos[static_cast<size_t>(j)] = pos[static_cast<size_t>(j - 1)] + 1;
        }
    }
    return res;
}

}  // namespace toricmem
