#include "toricmem/ring.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "toricmem/analysis.h"

namespace toricmem {
namespace {

TEST(Ring, two_errors_build_length_three) {
    const auto r = ring_max_chain_search(2, 64);
    EXPECT_EQ(r.max_length, 3);
}

TEST(Ring, small_chain_lengths) {
    EXPECT_EQ(ring_max_chain_search(1, 64).max_length, 1);
    EXPECT_EQ(ring_max_chain_search(3, 64).max_length, 5);
    EXPECT_EQ(ring_max_chain_search(4, 64).max_length, 9);
}

TEST(Ring, search_respects_growth_bound) {
    const double beta = default_beta();
    for (int n = 1; n <= 5; ++n) {
        const auto r = ring_max_chain_search(n, 96);
        EXPECT_LE(r.max_length, static_cast<int>(std::floor(std::pow(n, 1.0 / beta) + 1e-9))) << "n=" << n;
        EXPECT_EQ(r.witness.size(), static_cast<size_t>(n));
    }
}

TEST(Ring, wider_window_finds_nothing_longer) {
    EXPECT_EQ(ring_max_chain_search(3, 128, 20).max_length, ring_max_chain_search(3, 64).max_length);
}

TEST(Ring, chain_extent_examples) {
    RingLattice lat(20);
    ErrorConfig cfg(20);
    cfg.set(3);
    cfg.set(5);
    Pairing p;
    // Defects 3,4,5,6: 4-5 joined by the recovery edge 4 gives one run 3..5.
    p.pairs = {{4, 5}, {3, 6}};
    EXPECT_EQ(single_chain_extent(lat, cfg, p), 3);
    p.pairs = {{3, 4}, {5, 6}};
    EXPECT_EQ(single_chain_extent(lat, cfg, p), 0);
}

TEST(Ring, reachable_pairings_match_enumeration) {
    RingLattice lat(8);
    ErrorConfig cfg(8);
    for (int e : {1, 2, 6}) {
        cfg.flip(static_cast<size_t>(e));
    }
    const auto syn = syndrome_of(lat, cfg);
    std::set<std::set<std::pair<int, int>>> via_enum, via_list;
    enumerate_choices([&](ScriptedChooser &ch) {
        std::set<std::pair<int, int>> s;
        for (auto [a, b] : expand_and_pair(lat, syn, ch).pairs) {
            s.insert({std::min(a, b), std::max(a, b)});
        }
        via_enum.insert(s);
    });
    for (const auto &p : ring_reachable_pairings(lat, syn)) {
        std::set<std::pair<int, int>> s;
        for (auto [a, b] : p.pairs) {
            s.insert({std::min(a, b), std::max(a, b)});
        }
        via_list.insert(s);
    }
    EXPECT_EQ(via_enum, via_list);
}

}  // namespace
}  // namespace toricmem
