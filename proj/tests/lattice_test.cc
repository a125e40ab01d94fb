#include "toricmem/lattice.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <set>
#include <stdexcept>

namespace toricmem {
namespace {

ErrorConfig plaquette(const TorusLattice &lat, int x, int y) {
    ErrorConfig c(static_cast<size_t>(lat.num_edges()));
    xor_path(c, lat.plaquette_edges(x, y));
    return c;
}

ErrorConfig full_row(const TorusLattice &lat, int y) {
    ErrorConfig c(static_cast<size_t>(lat.num_edges()));
    for (int x = 0; x < lat.k(); ++x) {
        c.flip(static_cast<size_t>(lat.edge_index({x, y, Orientation::Horizontal})));
    }
    return c;
}

ErrorConfig full_column(const TorusLattice &lat, int x) {
    ErrorConfig c(static_cast<size_t>(lat.num_edges()));
    for (int y = 0; y < lat.k(); ++y) {
        c.flip(static_cast<size_t>(lat.edge_index({x, y, Orientation::Vertical})));
    }
    return c;
}

// Independent syndrome: count incident errors per vertex from edge coordinates.
std::vector<int> brute_syndrome(const TorusLattice &lat, const ErrorConfig &c) {
    std::vector<int> parity(static_cast<size_t>(lat.num_vertices()), 0);
    for (int e = 0; e < lat.num_edges(); ++e) {
        if (!c.get(static_cast<size_t>(e))) {
            continue;
        }
        const EdgeCoord ec = lat.edge_coord(e);
        const int dx = ec.orientation == Orientation::Horizontal ? 1 : 0;
        parity[static_cast<size_t>(lat.vertex_index({ec.x, ec.y}))] ^= 1;
        parity[static_cast<size_t>(lat.vertex_index({ec.x + dx, ec.y + 1 - dx}))] ^= 1;
    }
    std::vector<int> out;
    for (int v = 0; v < lat.num_vertices(); ++v) {
        if (parity[static_cast<size_t>(v)]) {
            out.push_back(v);
        }
    }
    return out;
}

TEST(Lattice, counts_and_incidence) {
    for (int k : {2, 3, 5, 8}) {
        TorusLattice lat(k);
        EXPECT_EQ(lat.num_edges(), 2 * k * k);
        EXPECT_EQ(lat.num_vertices(), k * k);
        std::vector<int> degree(static_cast<size_t>(lat.num_vertices()), 0);
        std::set<int> seen;
        for (int e = 0; e < lat.num_edges(); ++e) {
            EXPECT_EQ(lat.edge_index(lat.edge_coord(e)), e);
            seen.insert(e);
        }
        EXPECT_EQ(static_cast<int>(seen.size()), lat.num_edges());
        for (int v = 0; v < lat.num_vertices(); ++v) {
            EXPECT_EQ(lat.incident_edges(v).size(), 4u);
        }
        EXPECT_EQ(lat.plaquette_edges(0, 0).size(), 4u);
    }
    RingLattice ring(7);
    for (int v = 0; v < ring.num_vertices(); ++v) {
        int touching = 0;
        for (int e = 0; e < ring.num_edges(); ++e) {
            auto [a, b] = ring.endpoints(e);
            touching += (a == v) + (b == v);
        }
        EXPECT_EQ(touching, 2);
    }
}

TEST(Lattice, sample_errors_edge_cases) {
    TorusLattice lat(6);
    Stream rng(1);
    EXPECT_TRUE(sample_errors(lat, 0.0, rng).none());
    EXPECT_EQ(sample_errors(lat, 1.0, rng).count(), 72u);
    EXPECT_THROW(sample_errors(lat, -0.1, rng), std::invalid_argument);
    EXPECT_THROW(sample_errors(lat, 1.5, rng), std::invalid_argument);
}

TEST(Lattice, sample_errors_mean) {
    TorusLattice lat(32);
    Stream rng(12345);
    double sum = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        sum += static_cast<double>(sample_errors(lat, 0.05, rng).count());
    }
    const double mean = 2.0 * 32 * 32 * 0.05;
    const double sd_of_mean = std::sqrt(2.0 * 32 * 32 * 0.05 * 0.95 / draws);
    EXPECT_LT(std::fabs(sum / draws - mean), 5.0 * sd_of_mean);
}

TEST(Lattice, sample_errors_deterministic) {
    TorusLattice lat(10);
    Stream a(99), b(99);
    EXPECT_EQ(sample_errors(lat, 0.1, a), sample_errors(lat, 0.1, b));
}

TEST(Lattice, syndrome_examples) {
    TorusLattice lat(5);
    ErrorConfig c(50);
    EXPECT_TRUE(syndrome_of(lat, c).defects.empty());
    const int e = lat.edge_index({2, 3, Orientation::Vertical});
    c.flip(static_cast<size_t>(e));
    auto [a, b] = lat.endpoints(e);
    std::vector<int> expect = {std::min(a, b), std::max(a, b)};
    EXPECT_EQ(syndrome_of(lat, c).defects, expect);
    EXPECT_TRUE(syndrome_of(lat, plaquette(lat, 4, 4)).defects.empty());
}

TEST(Lattice, syndrome_parity_and_linearity) {
    for (int k : {3, 4, 7, 12}) {
        TorusLattice lat(k);
        Stream rng(static_cast<uint64_t>(k));
        for (int i = 0; i < 200; ++i) {
            ErrorConfig a = sample_errors(lat, 0.2, rng);
            ErrorConfig b = sample_errors(lat, 0.3, rng);
            const auto sa = syndrome_of(lat, a).defects;
            EXPECT_EQ(sa.size() % 2, 0u);
            EXPECT_EQ(sa, brute_syndrome(lat, a));
            const auto sb = syndrome_of(lat, b).defects;
            std::vector<int> diff;
            std::set_symmetric_difference(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(diff));
            ErrorConfig ab = a;
            ab ^= b;
            EXPECT_EQ(syndrome_of(lat, ab).defects, diff);
        }
    }
    RingLattice ring(9);
    Stream rng(3);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(syndrome_of(ring, sample_errors(ring, 0.4, rng)).defects.size() % 2, 0u);
    }
}

TEST(Lattice, homology_examples) {
    TorusLattice lat(6);
    EXPECT_EQ(homology_class(lat, plaquette(lat, 2, 3)), (HomologyClass{false, false}));
    EXPECT_EQ(homology_class(lat, full_row(lat, 2)), (HomologyClass{true, false}));
    EXPECT_EQ(homology_class(lat, full_column(lat, 1)), (HomologyClass{false, true}));
    ErrorConfig two = full_row(lat, 1);
    two ^= full_row(lat, 4);
    EXPECT_EQ(homology_class(lat, two), (HomologyClass{false, false}));
    ErrorConfig open(72);
    open.flip(0);
    EXPECT_THROW(homology_class(lat, open), std::invalid_argument);
}

TEST(Lattice, homology_is_a_homomorphism) {
    TorusLattice lat(7);
    Stream rng(8);
    const auto random_closed = [&]() {
        ErrorConfig c(static_cast<size_t>(lat.num_edges()));
        for (int x = 0; x < 7; ++x) {
            for (int y = 0; y < 7; ++y) {
                if (rng.uniform() < 0.3) {
                    c ^= plaquette(lat, x, y);
                }
            }
        }
        return c;
    };
    for (int i = 0; i < 200; ++i) {
        ErrorConfig a = random_closed();
        EXPECT_TRUE(homology_class(lat, a).trivial());
        if (rng.uniform() < 0.5) {
            a ^= full_row(lat, static_cast<int>(rng.below(7)));
        }
        ErrorConfig b = random_closed();
        if (rng.uniform() < 0.5) {
            b ^= full_column(lat, static_cast<int>(rng.below(7)));
        }
        ErrorConfig ab = a;
        ab ^= b;
        EXPECT_EQ(homology_class(lat, ab), homology_class(lat, a) ^ homology_class(lat, b));
    }
}

TEST(Lattice, distance_examples) {
    TorusLattice lat(5);
    EXPECT_EQ(lat.distance(VertexCoord{2, 2}, VertexCoord{2, 2}), 0);
    EXPECT_EQ(lat.distance(VertexCoord{0, 0}, VertexCoord{1, 0}), 1);
    EXPECT_EQ(lat.distance(VertexCoord{0, 0}, VertexCoord{4, 0}), 1);
    RingLattice ring(10);
    EXPECT_EQ(ring.distance(1, 9), 2);
    EXPECT_EQ(ring.distance(0, 5), 5);
}

TEST(Lattice, diamond_sizes) {
    TorusLattice lat9(9);
    EXPECT_EQ(lat9.diamond(0, 1).size(), 4u);
    EXPECT_EQ(lat9.diamond(40, 2).size(), 8u);
    for (int t = 1; t < 5; ++t) {
        const auto d = lat9.diamond(13, t);
        EXPECT_EQ(static_cast<int>(d.size()), 4 * t);
        for (int v : d) {
            EXPECT_EQ(lat9.distance(13, v), t);
        }
    }
    TorusLattice lat4(4);
    EXPECT_LT(lat4.diamond(0, 2).size(), 8u);
    int exact = 0;
    for (int v = 0; v < 16; ++v) {
        exact += lat4.distance(0, v) == 2;
    }
    EXPECT_EQ(static_cast<int>(lat4.diamond(0, 2).size()), exact);
}

TEST(Lattice, shortest_path_examples) {
    TorusLattice lat(6);
    EXPECT_TRUE(lat.shortest_path(7, 7).empty());
    const auto one = lat.shortest_path(lat.vertex_index({1, 1}), lat.vertex_index({2, 1}));
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0], lat.edge_index({1, 1, Orientation::Horizontal}));
    const int u = lat.vertex_index({0, 0});
    const int v = lat.vertex_index({2, 3});
    const auto path = lat.shortest_path(u, v);
    EXPECT_EQ(path.size(), 5u);
    ErrorConfig c(72);
    xor_path(c, path);
    EXPECT_EQ(syndrome_of(lat, c).defects, (std::vector<int>{u, v}));
}

TEST(Lattice, shortest_path_is_geodesic_everywhere) {
    for (int k : {4, 5, 6}) {
        TorusLattice lat(k);
        for (int u = 0; u < lat.num_vertices(); ++u) {
            for (int v = 0; v < lat.num_vertices(); ++v) {
                const auto path = lat.shortest_path(u, v);
                ASSERT_EQ(static_cast<int>(path.size()), lat.distance(u, v));
                if (u != v) {
                    ErrorConfig c(static_cast<size_t>(lat.num_edges()));
                    xor_path(c, path);
                    EXPECT_EQ(syndrome_of(lat, c).defects, (std::vector<int>{std::min(u, v), std::max(u, v)}));
                }
            }
        }
    }
}

TEST(Lattice, dual_map) {
    TorusLattice lat(6);
    ErrorConfig empty(72);
    EXPECT_TRUE(to_dual(lat, empty).none());
    ErrorConfig h(72);
    h.flip(static_cast<size_t>(lat.edge_index({2, 1, Orientation::Horizontal})));
    const ErrorConfig d = to_dual(lat, h);
    ASSERT_EQ(d.count(), 1u);
    EXPECT_EQ(lat.edge_coord(static_cast<int>(d.ones()[0])).orientation, Orientation::Vertical);
    Stream rng(4);
    for (int i = 0; i < 100; ++i) {
        const ErrorConfig c = sample_errors(lat, 0.3, rng);
        EXPECT_EQ(to_dual(lat, to_dual(lat, c)), c);
        // Plaquette (x,y) of the dual stands for vertex (-x,-y) of the original.
        std::vector<int> mapped;
        for (int p : plaquette_violations(lat, to_dual(lat, c))) {
            const VertexCoord pc = lat.vertex_coord(p);
            mapped.push_back(lat.vertex_index({-pc.x, -pc.y}));
        }
        std::sort(mapped.begin(), mapped.end());
        EXPECT_EQ(mapped, syndrome_of(lat, c).defects);
    }
}

}  // namespace
}  // namespace toricmem
