#ifndef TORICMEM_DECODER3D_H
#define TORICMEM_DECODER3D_H

#include <cmath>
#include <cstdint>
#include <vector>

#include "toricmem/lattice.h"
#include "toricmem/pairing.h"
#include "toricmem/sample.h"

namespace toricmem {

struct StarMetricParams {
    double alpha = 2.4;
    double beta = std::log(2.0) / std::log(3.0);

    /// (1+2a)^b > 3^b + 1: a newborn never joins a particle two rounds older at distance 1.
    bool separates_generations() const {
        return std::pow(1.0 + 2.0 * alpha, beta) > std::pow(3.0, beta) + 1.0;
    }
};

/// l + alpha |dT|.
double star_distance(int l, int dT, const StarMetricParams &params);

struct SpacetimeParticle {
    int site = 0;
    int birth_round = 0;
    int age = 1;
    bool paired = false;
    /// Consecutive rounds the particle was kept without being seen.
    int reinstated = 0;
    /// Rounds in which the particle was actually measured.
    int observed = 1;
    /// Opaque label owned by a RoundObserver.
    int tag = 0;
};

/// Flips every vertex's membership independently with probability q, in vertex order.
Syndrome measure_syndrome_noisy(const TorusLattice &lat, const Syndrome &truth, double q, Stream &rng);

/// True iff l*^beta < T_a^beta + T_b^beta, the condition for applying the chain of a pair.
bool pairing_cutoff_check(const TorusLattice &lat, const SpacetimeParticle &a,
                          const SpacetimeParticle &b, const StarMetricParams &params);

/// Nearest vertex within radius max_radius of site (radius >= 1) for which available is set;
/// the lowest index wins at equal radius. Returns -1 if there is none.
int probe_for_heir(const TorusLattice &lat, int site, int max_radius,
                   const std::vector<uint8_t> &available);

/// Smallest r >= 1 with 4 r p >= q, capped at the lattice diameter.
int ghost_probe_radius(const TorusLattice &lat, double p, double q);

enum class ReinstatementRule {
    /// Keep an unseen particle while j consecutive eclipses (weight q^j) stay likelier than its
    /// whole observed history being ghosts (q^n for n observed rounds), i.e. while j < n, and
    /// never for more than max_reinstatements rounds.
    Likelihood,
    /// Always keep an unseen particle for max_reinstatements rounds.
    FixedCap,
};

struct MemoryParams {
    StarMetricParams metric;
    int radius_steps = 5;
    int warmup_rounds = 20;
    int max_reinstatements = 3;
    ReinstatementRule reinstatement = ReinstatementRule::Likelihood;
    /// Declare failure when two defects of one error cluster are k or more apart.
    bool detect_separation = true;
    /// Declare failure when an error cluster winds around the torus.
    bool detect_winding = true;
    /// 0 picks ghost_probe_radius(p, q).
    int probe_radius = 0;
};

/// Hooks that let a caller follow which defects end up joined. Tags are carried by particles.
class RoundObserver {
   public:
    virtual ~RoundObserver() = default;
    virtual int on_newborn(int site) = 0;
    virtual void on_persist(int tag, int site) = 0;
    virtual void on_inherit(int tag, int from, int to) = 0;
    virtual void on_drop(int tag, int site) {
        (void)tag;
        (void)site;
    }
    virtual void on_recovery(int tag_a, int tag_b, int site_a, int site_b) = 0;
};

enum class FailureKind { None, Winding, Separation };

struct RoundReport {
    bool failure = false;
    FailureKind failure_kind = FailureKind::None;
    int newborns = 0;
    int inherited = 0;
    int reinstated = 0;
    int dropped = 0;
    int pairs = 0;
    int chains_applied = 0;
    int chains_withheld = 0;
};

struct SimulationStats {
    uint64_t rounds = 0;
    uint64_t counted_rounds = 0;
    uint64_t failures = 0;
    uint64_t winding_failures = 0;
    uint64_t counted_failures = 0;
    uint64_t newborns = 0;
    uint64_t inherited = 0;
    uint64_t reinstated = 0;
    uint64_t dropped = 0;
    uint64_t pairs = 0;
    uint64_t chains_applied = 0;
    uint64_t chains_withheld = 0;
};

/// Repeated noisy syndrome rounds on a k x k torus with octahedral pairing in the star metric.
class MemorySimulator {
   public:
    MemorySimulator(int k, double p, double q, MemoryParams params = {});

    /// Error-free lattice, no particles, warm-up restarts.
    void reset();
    /// One round with errors, measurement flips and tie-breaks all drawn from rng.
    RoundReport step(Stream &rng);
    /// One round with the given fresh error edges and measurement flips.
    RoundReport step_with(const std::vector<int> &fresh_edges, const std::vector<int> &flips,
                          Chooser &chooser);

    void set_observer(RoundObserver *observer) {
        observer_ = observer;
    }
    const TorusLattice &lattice() const {
        return lat_;
    }
    const ErrorConfig &errors() const {
        return errors_;
    }
    /// True defects (endpoints of the current error configuration), sorted.
    std::vector<int> true_defects() const;
    size_t defect_count() const {
        return defect_list_.size();
    }
    const std::vector<SpacetimeParticle> &particles() const {
        return particles_;
    }
    int round() const {
        return round_;
    }
    int probe_radius() const {
        return probe_radius_;
    }
    const SimulationStats &stats() const {
        return stats_;
    }
    /// Whether the most recent round counted toward failure statistics.
    bool last_round_counted() const {
        return last_counted_;
    }

   private:
    void toggle_defect(int v);
    int reinstatement_limit(const SpacetimeParticle &pt) const;
    void reconcile(const std::vector<int> &measured, RoundReport &rep);
    void pair_and_recover(Chooser &chooser, RoundReport &rep);
    bool detect_failure();

    TorusLattice lat_;
    double p_;
    double q_;
    MemoryParams params_;
    BernoulliThreshold p_cut_;
    BernoulliThreshold q_cut_;
    int probe_radius_;
    RoundObserver *observer_ = nullptr;

    ErrorConfig errors_;
    std::vector<uint8_t> defect_;
    std::vector<int> defect_list_;
    std::vector<int> defect_pos_;
    std::vector<SpacetimeParticle> particles_;
    int round_ = -1;
    int since_reset_ = 0;
    bool last_counted_ = false;
    SimulationStats stats_;

    // Scratch buffers sized to the vertex count.
    std::vector<uint8_t> measured_;
    std::vector<uint8_t> available_;
    std::vector<int> stamp_;
    std::vector<int> lift_x_;
    std::vector<int> lift_y_;
    std::vector<int> fresh_;
    std::vector<int> flips_;
    int stamp_value_ = 0;
    FailureKind last_failure_ = FailureKind::None;
};

/// Runs n_rounds rounds from an error-free lattice. trials counts the rounds that lie outside
/// warm-up windows; failures counts failures in those rounds.
FailureSample run_memory_simulation(int k, double p, double q, uint64_t n_rounds, uint64_t seed,
                                    const MemoryParams &params = {});

}  // namespace toricmem

#endif
