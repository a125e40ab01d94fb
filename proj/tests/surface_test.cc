#include "toricmem/surface.h"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

namespace toricmem {
namespace {

TEST(Surface, params) {
    const auto p = SurfaceParams::make(32, 100);
    EXPECT_DOUBLE_EQ(p.kink_density, 8.0 / 1024.0);
    EXPECT_DOUBLE_EQ(SurfaceParams::make(32, 100, true).kink_density, 2 * p.kink_density);
    EXPECT_THROW(SurfaceParams::make(1, 100), std::invalid_argument);
    EXPECT_THROW(SurfaceParams::make(32, 1), std::invalid_argument);
}

TEST(Surface, recursion_base_cases) {
    const auto p = SurfaceParams::make(32, 100);
    EXPECT_EQ(perimeter_recursion(0, p), 0.0);
    EXPECT_EQ(perimeter_recursion(1, p), 4.0);
    EXPECT_THROW(perimeter_recursion(-1, p), std::invalid_argument);
    SurfaceParams flat = p;
    flat.kink_density = 0.0;
    for (int r = 0; r < 50; ++r) {
        EXPECT_DOUBLE_EQ(perimeter_recursion(r, flat), 4.0 * r);
        EXPECT_DOUBLE_EQ(enclosed_area(r, flat), 2.0 * r * r);
    }
}

TEST(Surface, recursion_matches_direct_sum) {
    // Direct O(r^2) evaluation of c(r) = 4r + rho sum_{s<=r} c(s)(r-s).
    const auto p = SurfaceParams::make(16, 100);
    std::vector<double> c(60, 0.0);
    for (int r = 1; r < 60; ++r) {
        double s = 0;
        for (int j = 0; j <= r; ++j) {
            s += c[static_cast<size_t>(j)] * (r - j);
        }
        c[static_cast<size_t>(r)] = 4.0 * r + p.kink_density * s;
    }
    for (int r = 0; r < 60; ++r) {
        EXPECT_NEAR(perimeter_recursion(r, p), c[static_cast<size_t>(r)], 1e-9 * c[static_cast<size_t>(r)]);
    }
}

TEST(Surface, closed_form) {
    const auto p = SurfaceParams::make(32, 100);
    EXPECT_EQ(perimeter_closed_form(0, p), 0.0);
    EXPECT_NEAR(perimeter_closed_form(0.01, p), 0.04, 1e-8);
    EXPECT_NEAR(perimeter_closed_form(64, p), 32 * std::sqrt(2.0) * std::sinh(std::sqrt(8.0) * 2), 1e-9);
    EXPECT_NEAR(perimeter_closed_form(10, SurfaceParams::make(32, 100, true)), 32 * std::sinh(40.0 / 32), 1e-9);
}

TEST(Surface, recursion_tracks_closed_form) {
    for (double L : {16.0, 32.0, 64.0}) {
        for (bool sym : {false, true}) {
            const auto p = SurfaceParams::make(L, 100, sym);
            PerimeterTable t(p.kink_density, static_cast<int>(3 * L));
            for (int r = 1; r <= 3 * L; ++r) {
                const double rel = std::fabs(t.c(r) / perimeter_closed_form(r, p) - 1.0);
                EXPECT_LT(rel, r <= L ? 0.05 : 0.30) << "L=" << L << " r=" << r;
                EXPECT_GE(t.c(r), 4.0 * r);
                EXPECT_GT(t.area(r), t.area(r - 1));
            }
        }
    }
}

TEST(Surface, minimal_loop) {
    const auto p = SurfaceParams::make(64, 1e4);
    const double r = minimal_loop_length(p);
    EXPECT_NEAR(r / minimal_loop_asymptote(64, 1e4, false), 1.0, 0.25);
    const double rs = minimal_loop_length(SurfaceParams::make(64, 1e4, true));
    EXPECT_NEAR(rs / r, std::sqrt(8.0) / 4.0, 0.2 * std::sqrt(8.0) / 4.0);
    const double big = minimal_loop_length(SurfaceParams::make(1000, 1e8));
    const double big_s = minimal_loop_length(SurfaceParams::make(1000, 1e8, true));
    EXPECT_NEAR(big_s / big, std::sqrt(8.0) / 4.0, 0.2 * std::sqrt(8.0) / 4.0);
    const double two = minimal_loop_length(SurfaceParams::make(64, 2));
    EXPECT_GT(two, 0.0);
    EXPECT_TRUE(std::isfinite(two));
    double prev = 0.0;
    for (double N : {2.0, 10.0, 100.0, 1e3, 1e4, 1e5}) {
        const double v = minimal_loop_length(SurfaceParams::make(32, N));
        EXPECT_GT(v, prev);
        prev = v;
    }
}

TEST(Surface, threshold_multiplier) {
    SurfaceParams flat = SurfaceParams::make(100, 1e3);
    flat.kink_density = 0.0;
    EXPECT_NEAR(threshold_multiplier(flat).product, 1.0, 1e-12);
    const auto m = threshold_multiplier(SurfaceParams::make(100, 1e3));
    EXPECT_GT(m.product / m.closed_form, 1.0 / 3.0);
    EXPECT_LT(m.product / m.closed_form, 3.0);
    double prev = 0.0;
    for (double L = 10; L <= 400; L += 5) {
        const double v = threshold_multiplier(SurfaceParams::make(L, 1e3)).product;
        EXPECT_GT(v, prev) << "L=" << L;
        prev = v;
    }
    EXPECT_THROW(threshold_multiplier(SurfaceParams::make(2, 2)), std::invalid_argument);
}

TEST(Surface, walk_multiplier) {
    EXPECT_DOUBLE_EQ(walk_multiplier(4.5), 4.0 / 4.5);
    EXPECT_THROW(walk_multiplier(4.0), std::invalid_argument);
    EXPECT_THROW(walk_multiplier(5.5), std::invalid_argument);
}

}  // namespace
}  // namespace toricmem
