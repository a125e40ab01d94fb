#include "toricmem/campaign.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "toricmem/fitting.h"

namespace toricmem {
namespace {

namespace fs = std::filesystem;

std::string scratch(const std::string &name) {
    const auto dir = fs::temp_directory_path() / ("toricmem_campaign_" + name);
    fs::remove_all(dir);
    return dir.string();
}

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CampaignConfig small_2d() {
    CampaignConfig c;
    c.mode = CampaignMode::TwoD;
    c.ks = {8, 12};
    c.ps = {0.03, 0.06};
    c.trials = 250;
    c.chunk = 60;
    c.seed = 11;
    return c;
}

TEST(Campaign, derive_seed_is_deterministic_and_distinct) {
    EXPECT_EQ(derive_seed(1, CampaignMode::TwoD, 12, 3, 99), derive_seed(1, CampaignMode::TwoD, 12, 3, 99));
    std::set<uint64_t> seen;
    for (uint64_t t = 0; t < 100000; ++t) {
        seen.insert(derive_seed(7, CampaignMode::TwoD, 12, 0, t));
    }
    EXPECT_EQ(seen.size(), 100000u);
    std::set<uint64_t> cells;
    for (int k = 4; k < 40; ++k) {
        for (int p = 0; p < 8; ++p) {
            for (auto m : {CampaignMode::TwoD, CampaignMode::ThreeD}) {
                cells.insert(derive_seed(7, m, k, p, 0));
            }
        }
    }
    EXPECT_EQ(cells.size(), 36u * 8u * 2u);
    EXPECT_NE(derive_seed(1, CampaignMode::TwoD, 12, 0, 0), derive_seed(2, CampaignMode::TwoD, 12, 0, 0));
}

TEST(Campaign, config_round_trip) {
    const std::string text =
        "[campaign]\nmode = 3d\nk = 10, 14\np = 0.002, 0.004\nq_ratio = 0.5\ntrials = 5000\nchunk = 1000\n"
        "seed = 3\nthreads = 2\n[decoder]\nalpha = 2.6\nradius_steps = 4\nreinstatement = fixed\n";
    const CampaignConfig c = parse_config(text);
    EXPECT_EQ(c.mode, CampaignMode::ThreeD);
    EXPECT_EQ(c.ks, (std::vector<int>{10, 14}));
    EXPECT_EQ(c.q.kind, QRule::Ratio);
    EXPECT_DOUBLE_EQ(c.q.q_for(1, 0.004), 0.002);
    EXPECT_DOUBLE_EQ(c.decoder.metric.alpha, 2.6);
    EXPECT_EQ(c.decoder.radius_steps, 4);
    EXPECT_EQ(c.decoder.reinstatement, ReinstatementRule::FixedCap);
    EXPECT_EQ(format_config(parse_config(format_config(c))), format_config(c));
}

TEST(Campaign, config_errors) {
    EXPECT_THROW(parse_config("[campaign]\nmode = 4d\n"), ConfigError);
    EXPECT_THROW(parse_config("[campaign]\nk = 3\np = 0.01\n"), ConfigError);
    EXPECT_THROW(parse_config("[campaign]\nk = 8\np = 1.5\n"), ConfigError);
    EXPECT_THROW(parse_config("[campaign]\nk = 8\np = abc\n"), ConfigError);
    EXPECT_THROW(parse_config("[campaign]\nk = 8\np = 0.01\ntrials = 0\n"), ConfigError);
    EXPECT_THROW(parse_config("[campaign]\nk = 8\nbogus = 1\n"), ConfigError);
    EXPECT_THROW(parse_config("[campaign]\nmode = 2d\nk = 8\np = 0.01\nq_ratio = 0.5\n"), ConfigError);
    EXPECT_THROW(parse_config("[campaign]\nmode = 3d\nk = 8\np = 0.01\nq = 0.1\nq_ratio = 0.5\n"), ConfigError);
    EXPECT_THROW(parse_config("[campaign]\nmode = 3d\nk = 8\np = 0.01, 0.02\nq = 0.1\n"), ConfigError);
    EXPECT_THROW(parse_config("[campaign\n"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/config.ini"), IoError);
}

TEST(Campaign, empty_k_list_gives_header_only_csv) {
    CampaignConfig c = small_2d();
    c.ks.clear();
    const auto dir = scratch("empty");
    const auto cells = run_campaign(c, dir);
    EXPECT_TRUE(cells.empty());
    EXPECT_EQ(slurp(dir + "/results.csv"), "mode,k,p,q,trials,failures,rate,stderr,seed\n");
}

TEST(Campaign, thread_count_does_not_change_results) {
    CampaignConfig c = small_2d();
    c.ks = {12};
    c.ps = {0.06};
    c.trials = 100;
    c.chunk = 7;
    const auto d1 = scratch("t1");
    const auto d8 = scratch("t8");
    c.threads = 1;
    const auto a = run_campaign(c, d1);
    c.threads = 8;
    const auto b = run_campaign(c, d8);
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0].failures, b[0].failures);
    EXPECT_EQ(a[0].trials, 100u);
    EXPECT_EQ(slurp(d1 + "/results.csv"), slurp(d8 + "/results.csv"));
}

TEST(Campaign, csv_columns) {
    const auto dir = scratch("csv");
    const auto cells = run_campaign(small_2d(), dir);
    std::istringstream in(slurp(dir + "/results.csv"));
    std::string line;
    std::getline(in, line);
    size_t rows = 0;
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            f.push_back(cell);
        }
        ASSERT_EQ(f.size(), 9u);
        const double trials = std::stod(f[4]);
        const double failures = std::stod(f[5]);
        const double rate = failures / trials;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.8e", rate);
        EXPECT_EQ(f[6], buf);
        std::snprintf(buf, sizeof buf, "%.8e", std::sqrt(rate * (1 - rate) / trials));
        EXPECT_EQ(f[7], buf);
        EXPECT_EQ(f[8], std::to_string(cells[rows].seed));
        ++rows;
    }
    EXPECT_EQ(rows, cells.size());
    const auto samples = read_campaign_csv(dir + "/results.csv");
    ASSERT_EQ(samples.size(), cells.size());
    EXPECT_EQ(samples[1].failures, cells[1].failures);
    EXPECT_DOUBLE_EQ(samples[1].p, 0.06);
}

TEST(Campaign, resume_after_interruption_matches_uninterrupted_run) {
    const CampaignConfig c = small_2d();
    const auto full = scratch("full");
    run_campaign(c, full);
    const auto cut = scratch("cut");
    run_campaign(c, cut);
    // Keep the first three records, add a torn line, drop the outputs.
    std::istringstream in(slurp(cut + "/store.ndjson"));
    std::string line, kept;
    for (int i = 0; i < 3 && std::getline(in, line); ++i) {
        kept += line + "\n";
    }
    kept += "{\"mode\":\"2d\",\"k\":";
    {
        std::ofstream out(cut + "/store.ndjson", std::ios::trunc);
        out << kept;
    }
    fs::remove(cut + "/results.csv");
    ResultStore partial(cut + "/store.ndjson");
    partial.load();
    EXPECT_EQ(partial.records().size(), 3u);
    const auto cells = resume_campaign(cut, 3);
    for (const auto &cell : cells) {
        EXPECT_TRUE(cell.complete());
    }
    EXPECT_EQ(slurp(full + "/results.csv"), slurp(cut + "/results.csv"));
    EXPECT_EQ(slurp(full + "/store.ndjson"), slurp(cut + "/store.ndjson"));
    // A completed campaign reruns as a no-op.
    const auto again = run_campaign(c, cut);
    EXPECT_EQ(slurp(full + "/results.csv"), slurp(cut + "/results.csv"));
}

TEST(Campaign, corrupt_store_line_is_an_io_error) {
    const auto dir = scratch("corrupt");
    fs::create_directories(dir);
    {
        std::ofstream out(dir + "/store.ndjson");
        out << "garbage\n{\"mode\":\"2d\",\"k\":8,\"p_index\":0,\"chunk\":0,\"p\":0.1,\"q\":0,\"trials\":1,\"failures\":0}\n";
    }
    ResultStore s(dir + "/store.ndjson");
    EXPECT_THROW(s.load(), IoError);
}

TEST(Campaign, changed_settings_are_refused) {
    const auto dir = scratch("changed");
    CampaignConfig c = small_2d();
    run_campaign(c, dir);
    c.seed = 12;
    EXPECT_THROW(run_campaign(c, dir), ConfigError);
    c.seed = 11;
    c.threads = 4;
    EXPECT_NO_THROW(run_campaign(c, dir));
}

TEST(Campaign, three_d_cells_replay) {
    CampaignConfig c;
    c.mode = CampaignMode::ThreeD;
    c.ks = {8};
    c.ps = {0.01, 0.02};
    c.q.kind = QRule::Ratio;
    c.q.ratio = 0.5;
    c.trials = 3000;
    c.chunk = 1000;
    const auto d1 = scratch("3d1");
    const auto d2 = scratch("3d2");
    const auto a = run_campaign(c, d1);
    c.threads = 3;
    run_campaign(c, d2);
    EXPECT_EQ(slurp(d1 + "/results.csv"), slurp(d2 + "/results.csv"));
    ASSERT_EQ(a.size(), 2u);
    EXPECT_DOUBLE_EQ(a[1].q, 0.01);
    // Each chunk starts from an empty lattice and skips its warm-up rounds; a failure restarts
    // the warm-up.
    EXPECT_EQ(a[0].chunks_done, 3u);
    EXPECT_LE(a[0].trials, 3u * (1000u - 20u));
    EXPECT_GE(a[0].trials + 20u * (a[0].failures + 3u), 3u * (1000u - 20u));
}

TEST(Campaign, default_2d_campaign_feeds_fitting) {
    CampaignConfig c;
    c.ks = {12, 18, 27};
    for (int i = 0; i < 8; ++i) {
        c.ps.push_back(0.01 + 0.06 * i / 7.0);
    }
    c.trials = 10000;
    c.chunk = 2500;
    c.seed = 5;
    c.threads = 4;
    const auto dir = scratch("smoke");
    run_campaign(c, dir);
    const auto samples = read_campaign_csv(dir + "/results.csv");
    EXPECT_EQ(samples.size(), 24u);
    const ScalingFit f = fit_scaling(samples);
    EXPECT_EQ(f.per_k.size(), 3u);
    EXPECT_GT(f.beta.slope, 0.0);
}

}  // namespace
}  // namespace toricmem
