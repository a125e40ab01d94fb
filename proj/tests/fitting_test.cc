#include "toricmem/fitting.h"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <limits>

#include "toricmem/analysis.h"
#include "toricmem/rng.h"

namespace toricmem {
namespace {

const double kBeta = default_beta();

std::vector<double> p_grid(double lo, double hi, int n) {
    std::vector<double> out;
    for (int i = 0; i < n; ++i) {
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    }
    return out;
}

std::vector<RatePoint> exact_points(double E, double pc, const std::vector<double> &ps) {
    std::vector<RatePoint> out;
    for (double p : ps) {
        out.push_back({p, std::pow(p / pc, E), 1e4});
    }
    return out;
}

std::vector<FailureSample> noisy_samples(int k, double E, double pc, const std::vector<double> &ps, uint64_t trials,
                                         uint64_t seed) {
    Stream rng(seed);
    std::vector<FailureSample> out;
    for (double p : ps) {
        const double F = std::pow(p / pc, E);
        const auto t = BernoulliThreshold::from_probability(F);
        FailureSample s{k, p, 0.0, trials, 0};
        for (uint64_t i = 0; i < trials; ++i) {
            s.failures += rng.bernoulli(t);
        }
        out.push_back(s);
    }
    return out;
}

TEST(Fitting, exact_power_law_is_recovered) {
    const double E = std::pow(12.0, kBeta);
    const auto pts = exact_points(E, 0.0133, p_grid(0.002, 0.0070, 8));
    const PerKFit f = fit_per_k(pts, 12);
    EXPECT_NEAR(f.exponent, E, 1e-6);
    EXPECT_NEAR(f.p_c, 0.0133, 1e-9);
    EXPECT_LT(f.residual, 1e-20);
    EXPECT_EQ(f.points, 8);
}

TEST(Fitting, window_cuts_apply) {
    const double E = 3.0;
    const auto pts = exact_points(E, 0.02, p_grid(0.002, 0.018, 10));
    const PerKFit all = fit_per_k(pts, 8);
    int inside = 0;
    for (const auto &p : pts) {
        inside += p.rate <= 0.05;
    }
    EXPECT_EQ(all.points, inside);
    const PerKFit cut = fit_per_k(pts, 8, 0.05, 5e-3);
    EXPECT_LT(cut.points, all.points);
    EXPECT_NEAR(cut.exponent, all.exponent, std::max(1e-9, cut.exponent_stderr));
}

TEST(Fitting, insufficient_data) {
    const auto pts = exact_points(3.0, 0.02, {0.005, 0.006});
    EXPECT_THROW(fit_per_k(pts, 8), InsufficientData);
    std::vector<RatePoint> zeros = {{0.01, 0.0, 100}, {0.02, 0.0, 100}, {0.03, 0.0, 100}};
    EXPECT_THROW(fit_per_k(zeros, 8), InsufficientData);
}

TEST(Fitting, binomial_noise_within_three_stderr) {
    const double E = std::pow(12.0, kBeta);
    const auto ps = p_grid(0.004, 0.0074, 8);
    int within = 0;
    const int reps = 40;
    for (int rep = 0; rep < reps; ++rep) {
        const auto samples = noisy_samples(12, E, 0.0133, ps, 10000, 1000 + static_cast<uint64_t>(rep));
        const PerKFit f = fit_per_k(samples);
        within += std::fabs(f.exponent - E) < 3.0 * f.exponent_stderr;
    }
    EXPECT_GE(within, reps - 3);
}

// Nested scan oracle: for each trial p_c, a slope-only weighted fit of log F on log(p/p_c).
TEST(Fitting, no_grid_point_beats_the_closed_form) {
    const double E = std::pow(18.0, kBeta);
    const auto samples = noisy_samples(18, E, 0.05, p_grid(0.01, 0.03, 8), 10000, 77);
    const PerKFit f = fit_per_k(samples);
    double best = std::numeric_limits<double>::infinity();
    double best_pc = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        const double pc = 0.02 + 0.08 * i / 4000.0;
        double sxx = 0, sxy = 0;
        std::vector<std::array<double, 3>> pts;
        for (const auto &s : samples) {
            const double F = s.rate();
            if (F <= 0.0 || F > 0.05) {
                continue;
            }
            const double w = static_cast<double>(s.trials) * F / (1.0 - F);
            const double x = std::log(s.p / pc);
            pts.push_back({x, std::log(F), w});
            sxx += w * x * x;
            sxy += w * x * std::log(F);
        }
        const double e = sxy / sxx;
        double rss = 0;
        for (const auto &[x, y, w] : pts) {
            rss += w * (y - e * x) * (y - e * x);
        }
        if (rss < best) {
            best = rss;
            best_pc = pc;
        }
    }
    EXPECT_GE(best, f.residual * (1.0 - 1e-12));
    EXPECT_NEAR(best_pc, f.p_c, 0.08 / 4000.0);
}

TEST(Fitting, beta_from_exact_exponents) {
    std::vector<PerKFit> per_k;
    for (int k : {12, 18, 27, 36}) {
        PerKFit f;
        f.k = k;
        f.exponent = std::pow(static_cast<double>(k), kBeta);
        per_k.push_back(f);
    }
    const BetaFit b = fit_beta(per_k);
    EXPECT_NEAR(b.slope, kBeta, 1e-12);
    EXPECT_NEAR(b.intercept, 0.0, 1e-12);
    for (auto &f : per_k) {
        f.exponent *= 1.7;
    }
    const BetaFit s = fit_beta(per_k);
    EXPECT_NEAR(s.slope, kBeta, 1e-12);
    EXPECT_NEAR(s.intercept, std::log(1.7), 1e-12);
    per_k.resize(2);
    EXPECT_THROW(fit_beta(per_k), InsufficientData);
}

TEST(Fitting, global_lower_cut_scan) {
    std::vector<FailureSample> all;
    std::vector<double> ps;
    for (int i = 0; i < 8; ++i) {
        ps.push_back(0.01 + 0.06 * i / 7.0);
    }
    for (int k : {12, 18, 27, 36}) {
        const double E = std::pow(static_cast<double>(k), kBeta);
        const auto s = noisy_samples(k, E, 0.1, ps, 10000, static_cast<uint64_t>(k));
        all.insert(all.end(), s.begin(), s.end());
    }
    const ScalingFit f = fit_scaling(all);
    EXPECT_GE(f.cuts_tried, 1);
    EXPECT_EQ(f.per_k.size(), 4u);
    bool cut_observed = f.f_min == 0.0;
    for (const auto &s : all) {
        cut_observed = cut_observed || s.rate() == f.f_min;
    }
    EXPECT_TRUE(cut_observed);
    EXPECT_NEAR(f.beta.slope, kBeta, std::max(3.0 * f.beta.slope_stderr, 0.05));
    // No cut tried gives a smaller slope stderr.
    const ScalingFit at0 = fit_scaling_at(all, 0.0);
    EXPECT_LE(f.beta.slope_stderr, at0.beta.slope_stderr);
}

}  // namespace
}  // namespace toricmem
