#include "toricmem/h3_oracle.h"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

namespace toricmem {
namespace {

H3OracleParams window(int gs, int gt) {
    H3OracleParams p;
    p.spatial_gap = gs;
    p.time_gap = gt;
    p.near_spatial_gap = 2;
    p.near_time_gap = 2;
    p.max_components = 2;
    return p;
}

TEST(H3Oracle, single_events_are_joined) {
    H3OracleParams p;
    EXPECT_DOUBLE_EQ(joined_probability({{0, 3, 3, SpacetimeEvent::Horizontal}}, p), 1.0);
    EXPECT_DOUBLE_EQ(joined_probability({{0, 3, 3, SpacetimeEvent::Ghost}}, p), 1.0);
}

TEST(H3Oracle, far_apart_events_stay_separate) {
    H3OracleParams p;
    const std::vector<SpacetimeEvent> ev = {{0, 0, 0, SpacetimeEvent::Horizontal},
                                            {0, 5, 0, SpacetimeEvent::Horizontal}};
    EXPECT_DOUBLE_EQ(joined_probability(ev, p), 0.0);
}

TEST(H3Oracle, adjacent_errors_are_joined) {
    H3OracleParams p;
    const std::vector<SpacetimeEvent> ev = {{0, 0, 0, SpacetimeEvent::Horizontal},
                                            {0, 1, 0, SpacetimeEvent::Horizontal}};
    EXPECT_DOUBLE_EQ(joined_probability(ev, p), 1.0);
}

TEST(H3Oracle, smallest_entries) {
    const auto r10 = h3_oracle(1, 0, window(4, 3));
    EXPECT_DOUBLE_EQ(r10.count, 4.0);
    EXPECT_DOUBLE_EQ(r10.classes, 2.0);
    EXPECT_DOUBLE_EQ(h3_oracle(0, 1, window(4, 3)).count, 2.0);
    EXPECT_NEAR(h3_oracle(2, 0, window(4, 3)).count, 70.0 / 3.0, 1e-9);
    EXPECT_DOUBLE_EQ(h3_oracle(0, 2, window(4, 3)).count, 22.0);
    EXPECT_DOUBLE_EQ(h3_oracle(1, 1, window(4, 3)).count, 52.0);
}

TEST(H3Oracle, small_entries_stable_under_widening) {
    for (auto [n, nb] : std::vector<std::pair<int, int>>{{2, 0}, {0, 2}, {1, 1}}) {
        EXPECT_DOUBLE_EQ(h3_oracle(n, nb, window(4, 3)).classes, h3_oracle(n, nb, window(6, 4)).classes)
            << n << "," << nb;
    }
}

TEST(H3Oracle, component_filter_changes_nothing_on_small_sets) {
    H3OracleParams all;
    all.spatial_gap = 4;
    all.time_gap = 3;
    all.max_components = 0;
    EXPECT_DOUBLE_EQ(h3_oracle(1, 1, all).classes, h3_oracle(1, 1, window(4, 3)).classes);
    EXPECT_DOUBLE_EQ(h3_oracle(0, 2, all).classes, h3_oracle(0, 2, window(4, 3)).classes);
}

TEST(H3Oracle, csv_round_trip_and_table) {
    const auto path = (std::filesystem::temp_directory_path() / "h3_round_trip.csv").string();
    H3OracleResult a;
    a.n = 1;
    a.nbar = 1;
    a.count = 52.0;
    a.classes = 26.0;
    a.sets = 700;
    H3OracleResult b;
    b.n = 4;
    b.nbar = 0;
    b.count = 4000.0;
    b.classes = 2000.0;
    write_h3_csv(path, {a, b});
    const auto rows = read_h3_csv(path);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_DOUBLE_EQ(rows[0].count, 52.0);
    EXPECT_EQ(rows[0].sets, 700u);
    const H3Table t = h3_table_from(rows);
    EXPECT_DOUBLE_EQ(t.at(1, 1), 52.0);
    EXPECT_DOUBLE_EQ(t.at(4, 0), 5105.0);
    std::remove(path.c_str());
}

TEST(H3Oracle, shipped_table_has_every_needed_entry) {
    const H3Table t = default_h3_table();
    for (auto [n, nb] : h3_oracle_entries()) {
        EXPECT_TRUE(t.has(n, nb)) << n << "," << nb;
    }
    EXPECT_DOUBLE_EQ(t.at(1, 1), 52.0);
    EXPECT_NEAR(t.at(2, 1), 878.3333333, 1e-6);
    EXPECT_DOUBLE_EQ(t.at(1, 2), 1368.0);
    EXPECT_NEAR(t.at(0, 4), 13212.08, 1e-6);
}

}  // namespace
}  // namespace toricmem
