// Command-line front end: campaigns, fits, analytic constants and surface scaling.

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "toricmem/analysis.h"
#include "toricmem/campaign.h"
#include "toricmem/fitting.h"
#include "toricmem/h3_oracle.h"
#include "toricmem/surface.h"

namespace fs = std::filesystem;
using namespace toricmem;

namespace {

std::string sci(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.8e", x);
    return buf;
}

void print_progress(const ChunkRecord &r) {
    std::fprintf(stderr, "%s k=%d p=%s chunk %llu: %llu/%llu\n", mode_name(r.mode).c_str(), r.k,
                 sci(r.p).c_str(), static_cast<unsigned long long>(r.chunk),
                 static_cast<unsigned long long>(r.failures), static_cast<unsigned long long>(r.trials));
}

void report(const std::vector<CellResult> &cells, const std::string &out) {
    size_t done = 0;
    for (const auto &c : cells) {
        done += c.complete() ? 1 : 0;
    }
    std::printf("%zu/%zu cells complete; results in %s\n", done, cells.size(), out.c_str());
}

void cmd_fit(const std::string &in, const std::string &out, double f_max, double f_min, bool fixed_cut) {
    const auto samples = read_campaign_csv((fs::path(in) / "results.csv").string());
    const ScalingFit fit = fixed_cut ? fit_scaling_at(samples, f_min, f_max) : fit_scaling(samples, f_max);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) {
        throw IoError("cannot create " + out + ": " + ec.message());
    }
    std::string per_k = "k,exponent,exponent_stderr,p_c,p_c_stderr,f_min,f_max,points\n";
    std::string tsv = "# log k\tlog E_k\n";
    nlohmann::ordered_json j;
    j["f_min"] = fit.f_min;
    j["f_max"] = fit.f_max;
    j["f_min_rule"] = fixed_cut ? "given" : "minimum slope stderr over shared cuts";
    j["cuts_tried"] = fit.cuts_tried;
    j["per_k"] = nlohmann::ordered_json::array();
    for (const auto &f : fit.per_k) {
        per_k += std::to_string(f.k) + "," + sci(f.exponent) + "," + sci(f.exponent_stderr) + "," + sci(f.p_c) +
                 "," + sci(f.p_c_stderr) + "," + sci(f.f_min) + "," + sci(f.f_max) + "," +
                 std::to_string(f.points) + "\n";
        tsv += sci(std::log(static_cast<double>(f.k))) + "\t" + sci(std::log(f.exponent)) + "\n";
        j["per_k"].push_back({{"k", f.k},
                              {"exponent", f.exponent},
                              {"exponent_stderr", f.exponent_stderr},
                              {"p_c", f.p_c},
                              {"p_c_stderr", f.p_c_stderr},
                              {"points", f.points}});
    }
    const std::string beta = "slope,slope_stderr,intercept,intercept_stderr,points\n" + sci(fit.beta.slope) + "," +
                             sci(fit.beta.slope_stderr) + "," + sci(fit.beta.intercept) + "," +
                             sci(fit.beta.intercept_stderr) + "," + std::to_string(fit.beta.points) + "\n";
    j["beta"] = {{"slope", fit.beta.slope},
                 {"slope_stderr", fit.beta.slope_stderr},
                 {"intercept", fit.beta.intercept},
                 {"intercept_stderr", fit.beta.intercept_stderr}};
    write_text_file((fs::path(out) / "per_k.csv").string(), per_k);
    write_text_file((fs::path(out) / "beta.csv").string(), beta);
    write_text_file((fs::path(out) / "beta.tsv").string(), tsv);
    write_text_file((fs::path(out) / "fit.json").string(), j.dump(2) + "\n");
    std::printf("slope %.4f +- %.4f, intercept %.4f +- %.4f (F in [%g, %g])\n", fit.beta.slope,
                fit.beta.slope_stderr, fit.beta.intercept, fit.beta.intercept_stderr, fit.f_min, fit.f_max);
}

ThresholdRegion region_from(const std::string &h3_path, double alpha, int max_M) {
    Sigma3Source sigma(alpha);
    ChainBoundParams params;
    params.alpha = alpha;
    const auto rows = read_h3_csv(h3_path.empty() ? default_h3_csv_path() : h3_path);
    params.h3 = complete_h3_table(h3_table_from(rows), sigma);
    return threshold_region(params, sigma, max_M);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Toric code decoder simulations and threshold analysis"};
    app.require_subcommand(1);

    auto *run = app.add_subcommand("run", "run a campaign");
    std::string config_path, out_dir;
    int threads = 0;
    uint64_t seed = 0;
    bool quiet = false;
    run->add_option("--config", config_path, "INI config")->required();
    run->add_option("--out", out_dir, "output directory")->required();
    auto *threads_opt = run->add_option("--threads", threads, "worker threads");
    auto *seed_opt = run->add_option("--seed", seed, "master seed");
    run->add_flag("--quiet", quiet, "no per-chunk progress");

    auto *resume = app.add_subcommand("resume", "finish an interrupted campaign");
    resume->add_option("--out", out_dir, "campaign directory")->required();
    resume->add_option("--threads", threads, "worker threads");
    resume->add_flag("--quiet", quiet, "no per-chunk progress");

    auto *fit = app.add_subcommand("fit", "per-k power-law fits and the slope across k");
    std::string fit_in, fit_out;
    double f_max = 0.05, f_min = 0.0;
    fit->add_option("--in", fit_in, "campaign directory")->required();
    fit->add_option("--out", fit_out, "output directory")->required();
    fit->add_option("--f-max", f_max, "upper rate cut");
    auto *fmin_opt = fit->add_option("--f-min", f_min, "fixed lower rate cut instead of the scan");

    auto *analysis = app.add_subcommand("analysis", "chain-counting constants and threshold curves");
    std::string what, h3_path;
    double alpha = 2.4;
    int max_M = 16;
    analysis->add_option("what", what, "constants or curves")->required()->check(CLI::IsMember({"constants", "curves"}));
    analysis->add_option("--h3", h3_path, "small-case chain count CSV");
    analysis->add_option("--alpha", alpha, "time weight of the star metric");
    analysis->add_option("--max-M", max_M, "curves for n_hat = 2^-M..2^M");

    auto *surface = app.add_subcommand("surface", "perimeter growth on high-genus surfaces");
    double L = 32, N = 1000, fraction = 0.5;
    int r_max = 0;
    bool symmetrized = false;
    surface->add_option("--L", L, "lattice scale per handle")->required();
    surface->add_option("--N", N, "number of handles")->required();
    surface->add_option("--r-max", r_max, "largest radius in the table (default 3L)");
    surface->add_option("--fraction", fraction, "area share enclosed by the minimal loop");
    surface->add_flag("--symmetrized", symmetrized, "kink density 16/L^2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const auto progress = [&](const ChunkRecord &r) {
            if (!quiet) {
                print_progress(r);
            }
        };
        if (*run) {
            CampaignConfig cfg = load_config(config_path);
            if (*threads_opt) {
                cfg.threads = threads;
            }
            if (*seed_opt) {
                cfg.seed = seed;
            }
            report(run_campaign(cfg, out_dir, progress), out_dir);
        } else if (*resume) {
            report(resume_campaign(out_dir, threads, progress), out_dir);
        } else if (*fit) {
            cmd_fit(fit_in, fit_out, f_max, f_min, static_cast<bool>(*fmin_opt));
        } else if (*analysis) {
            if (what == "constants") {
                std::printf("h1 = %.6f\n", h1_rate());
                std::printf("h2 = %.6f\n", h2_rate());
                std::printf("2d threshold bound 1/h2 = %.6e\n", 1.0 / h2_rate());
                std::printf("2d saturation fraction e^(-2/beta) = %.6f\n", saturation_fraction_2d());
                std::printf("3d exponent coefficient = %.6f\n", exponent_coefficient_3d(alpha));
                const ThresholdRegion r = region_from(h3_path, alpha, max_M);
                std::printf("ankle p = 1/%.3f\n", 1.0 / r.ankle);
                std::printf("toe q = 1/%.3f\n", 1.0 / r.toe);
                std::printf("p_c on p = 2q: 1/%.3f\n", 1.0 / r.p_c_half_line);
            } else {
                const ThresholdRegion r = region_from(h3_path, alpha, max_M);
                std::printf("n_hat,q,p_boundary\n");
                for (const auto &c : r.curves) {
                    for (int i = 0; i <= 40; ++i) {
                        const double q = std::pow(10.0, -4.0 + 2.0 * i / 40.0);
                        std::printf("%s,%s,%s\n", sci(c.n_hat).c_str(), sci(q).c_str(),
                                    sci(c.p_boundary(q)).c_str());
                    }
                }
            }
        } else if (*surface) {
            SurfaceParams p = SurfaceParams::make(L, N, symmetrized);
            p.area_fraction = fraction;
            const int top = r_max > 0 ? r_max : static_cast<int>(3 * L);
            PerimeterTable t(p.kink_density, top);
            std::printf("r,c_recursion,c_closed\n");
            for (int r = 0; r <= top; ++r) {
                std::printf("%d,%s,%s\n", r, sci(t.c(r)).c_str(), sci(perimeter_closed_form(r, p)).c_str());
            }
            const auto m = threshold_multiplier(p);
            std::printf("# minimal_loop_length,%s\n", sci(minimal_loop_length(p)).c_str());
            std::printf("# minimal_loop_asymptote,%s\n", sci(minimal_loop_asymptote(L, N, symmetrized)).c_str());
            std::printf("# threshold_multiplier,%s\n", sci(m.product).c_str());
            std::printf("# threshold_multiplier_closed_form,%s\n", sci(m.closed_form).c_str());
        }
        return 0;
    } catch (const ConfigError &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument &e) {
        std::fprintf(stderr, "invalid argument: %s\n", e.what());
        return 2;
    } catch (const IoError &e) {
        std::fprintf(stderr, "I/O error: %s\n", e.what());
        return 3;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
