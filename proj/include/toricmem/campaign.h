#ifndef TORICMEM_CAMPAIGN_H
#define TORICMEM_CAMPAIGN_H

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "toricmem/decoder3d.h"
#include "toricmem/sample.h"

namespace toricmem {

/// Invalid or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// File system failure (CLI exit code 3).
class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class CampaignMode { TwoD = 2, ThreeD = 3 };

std::string mode_name(CampaignMode mode);
CampaignMode parse_mode(const std::string &text);

/// Measurement error rate per p value: zero (2d), a fixed ratio q = ratio p, or an explicit list.
struct QRule {
    enum Kind { Zero, Ratio, List };
    Kind kind = Zero;
    double ratio = 0.0;
    std::vector<double> values;

    double q_for(size_t p_index, double p) const;
};

struct CampaignConfig {
    CampaignMode mode = CampaignMode::TwoD;
    std::vector<int> ks;
    std::vector<double> ps;
    QRule q;
    /// Decoding trials per cell in 2d, simulated rounds per cell in 3d.
    uint64_t trials = 10000;
    /// Trials (2d) or rounds (3d) per work unit. A 3d unit is one simulation from an empty
    /// lattice, so each unit spends its first warm-up rounds uncounted.
    uint64_t chunk = 1000;
    uint64_t seed = 1;
    int threads = 1;
    /// 3d decoder settings.
    MemoryParams decoder;

    /// Throws ConfigError.
    void validate() const;
};

/// Flat INI text: [campaign] mode, k, p, q or q_ratio, trials, chunk, seed, threads;
/// [decoder] alpha, radius_steps, warmup_rounds, max_reinstatements, reinstatement.
/// Throws ConfigError on parse or validation failure.
CampaignConfig parse_config(const std::string &text);
/// Throws IoError if unreadable, ConfigError if invalid.
CampaignConfig load_config(const std::string &path);
/// Canonical INI text; parse_config(format_config(c)) reproduces c.
std::string format_config(const CampaignConfig &cfg, bool include_threads = true);

/// Counter-based stream seed: splitmix64 chained over (master, mode, k, p_index, trial_index).
uint64_t derive_seed(uint64_t master_seed, CampaignMode mode, int k, int p_index, uint64_t trial_index);

/// One finished work unit as stored on disk.
struct ChunkRecord {
    CampaignMode mode = CampaignMode::TwoD;
    int k = 0;
    int p_index = 0;
    uint64_t chunk = 0;
    double p = 0.0;
    double q = 0.0;
    uint64_t trials = 0;
    uint64_t failures = 0;

    std::tuple<int, int, int, uint64_t> key() const {
        return {static_cast<int>(mode), k, p_index, chunk};
    }
};

struct CellResult {
    CampaignMode mode = CampaignMode::TwoD;
    int k = 0;
    int p_index = 0;
    double p = 0.0;
    double q = 0.0;
    uint64_t trials = 0;
    uint64_t failures = 0;
    /// Seed of the cell's first work unit.
    uint64_t seed = 0;
    uint64_t chunks_done = 0;
    uint64_t chunks_total = 0;

    bool complete() const {
        return chunks_done == chunks_total;
    }
    double rate() const {
        return trials ? static_cast<double>(failures) / static_cast<double>(trials) : 0.0;
    }
    FailureSample sample() const {
        return {k, p, q, trials, failures};
    }
};

/// Append-only newline-delimited JSON store of ChunkRecords.
class ResultStore {
   public:
    explicit ResultStore(std::string path);

    /// Reads the file if present. A torn final line is dropped; any other bad line throws IoError.
    void load();
    /// Appends and flushes one record; the first copy of a key wins. Thread-safe with respect to
    /// other appends through run_campaign's single writer only.
    void append(const ChunkRecord &rec);
    /// Rewrites the file sorted by key without duplicates, via a temporary file and rename.
    void compact();

    bool has(const ChunkRecord &rec) const {
        return records_.count(rec.key()) != 0;
    }
    const std::map<std::tuple<int, int, int, uint64_t>, ChunkRecord> &records() const {
        return records_;
    }
    const std::string &path() const {
        return path_;
    }

   private:
    std::string path_;
    std::map<std::tuple<int, int, int, uint64_t>, ChunkRecord> records_;
    bool needs_newline_ = false;
};

/// Aggregates the store into one result per configured cell, ordered by k then p.
std::vector<CellResult> collect_cells(const CampaignConfig &cfg, const ResultStore &store);

/// Runs every missing work unit of cfg into out_dir/store.ndjson on cfg.threads threads, then
/// compacts the store and writes results.csv, summary.json and rates.tsv. The effective config
/// is saved to out_dir/config.ini; an existing one with different settings is a ConfigError.
std::vector<CellResult> run_campaign(const CampaignConfig &cfg, const std::string &out_dir,
                                     const std::function<void(const ChunkRecord &)> &on_chunk = {});

/// Reloads out_dir/config.ini and finishes the campaign. threads > 0 overrides the saved count.
std::vector<CellResult> resume_campaign(const std::string &out_dir, int threads = 0,
                                        const std::function<void(const ChunkRecord &)> &on_chunk = {});

/// CSV with header mode,k,p,q,trials,failures,rate,stderr,seed; reals as %.8e.
std::string format_csv(const std::vector<CellResult> &cells);
/// Reads the campaign CSV back as samples. Throws IoError or ConfigError on malformed input.
std::vector<FailureSample> read_campaign_csv(const std::string &path);
std::string format_summary_json(const CampaignConfig &cfg, const std::vector<CellResult> &cells);
/// Blocks of "p rate stderr" per k, separated by blank lines, zero rates left out.
std::string format_rates_tsv(const std::vector<CellResult> &cells);

/// Writes text to path through a temporary file and rename. Throws IoError.
void write_text_file(const std::string &path, const std::string &text);

/// Binomial stderr sqrt(rate (1 - rate) / trials).
double binomial_stderr(uint64_t trials, uint64_t failures);

}  // namespace toricmem

#endif
