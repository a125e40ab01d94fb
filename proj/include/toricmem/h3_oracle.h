#ifndef TORICMEM_H3_ORACLE_H
#define TORICMEM_H3_ORACLE_H

#include <cstdint>
#include <string>
#include <vector>

#include "toricmem/analysis.h"
#include "toricmem/decoder3d.h"

namespace toricmem {

/// One error event in spacetime: a real error on an edge, or a measurement flip at a vertex.
struct SpacetimeEvent {
    enum Kind { Horizontal = 0, Vertical = 1, Ghost = 2 };
    int round = 0;
    int x = 0;
    int y = 0;
    int kind = Horizontal;

    bool operator==(const SpacetimeEvent &o) const = default;
};

struct H3OracleParams {
    /// Decoder under study; failure detection is switched off and the probe radius is forced.
    MemoryParams decoder;
    /// Heir probe radius; 1 is the value on the line q = p/2.
    int probe_radius = 1;
    /// Events are linked when their vertices are within spatial_gap and rounds within time_gap;
    /// only sets connected under this relation are simulated.
    int spatial_gap = 3;
    int time_gap = 2;
    /// Sets that fall apart into more than max_components pieces under the near relation
    /// (near_spatial_gap, near_time_gap) are counted as not joined without simulation;
    /// 0 simulates everything.
    int near_spatial_gap = 2;
    int near_time_gap = 1;
    int max_components = 0;
    /// Rounds allowed after the last event for every particle and defect to clear.
    int settle_rounds = 64;
    /// Cap on tie-break paths per event set.
    size_t max_paths = 1u << 16;
};

/// Probability over tie-breaks that the decoder links every event of the set into one chain:
/// defects, ghosts and the particles they spawn share provenance through coincidence, heirs,
/// and recovery chains. Events are placed on a torus wide enough that nothing wraps.
double joined_probability(const std::vector<SpacetimeEvent> &events, const H3OracleParams &params);

struct H3OracleResult {
    int64_t n = 0;
    int64_t nbar = 0;
    /// Sum over translation classes of connected event sets of the joining probability.
    double classes = 0.0;
    /// Count anchored at either chain end (2 x classes), the convention of the published entries.
    double count = 0.0;
    uint64_t sets = 0;
    /// Sets skipped by the component filter.
    uint64_t skipped_sets = 0;
    uint64_t joined_sets = 0;
    uint64_t paths = 0;
    int spatial_gap = 0;
    int time_gap = 0;
};

/// Enumerates every connected set of n real errors and nbar ghosts up to spacetime translation
/// (the set's least event, ordered by round, y, x, kind, sits at the origin) and sums the
/// joining probabilities.
H3OracleResult h3_oracle(int n, int nbar, const H3OracleParams &params = {});

/// Entries the composition factors need beyond the published h3(4,0).
std::vector<std::pair<int, int>> h3_oracle_entries();

/// CSV with header n,nbar,count,classes,sets,joined_sets,paths,spatial_gap,time_gap.
void write_h3_csv(const std::string &path, const std::vector<H3OracleResult> &rows);
std::vector<H3OracleResult> read_h3_csv(const std::string &path);

/// Published entries plus the oracle rows (published values win).
H3Table h3_table_from(const std::vector<H3OracleResult> &rows);

/// Reads the cached oracle table shipped with the sources.
H3Table default_h3_table();
std::string default_h3_csv_path();

}  // namespace toricmem

#endif
