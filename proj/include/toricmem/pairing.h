#ifndef TORICMEM_PAIRING_H
#define TORICMEM_PAIRING_H

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "toricmem/lattice.h"
#include "toricmem/rng.h"

namespace toricmem {

/// Source of tie-break decisions. choose(n) returns an index in [0, n).
class Chooser {
   public:
    virtual ~Chooser() = default;
    virtual size_t choose(size_t n) = 0;
};

/// Draws tie-breaks from a trial stream. A single option consumes no randomness.
class RandomChooser : public Chooser {
   public:
    explicit RandomChooser(Stream &stream) : stream_(stream) {
    }
    size_t choose(size_t n) override {
        return n <= 1 ? 0 : static_cast<size_t>(stream_.below(n));
    }

   private:
    Stream &stream_;
};

/// Replays a fixed prefix of decisions, then takes option 0, recording every branching factor.
class ScriptedChooser : public Chooser {
   public:
    explicit ScriptedChooser(std::vector<size_t> prefix) : prefix_(std::move(prefix)) {
    }
    size_t choose(size_t n) override;

    /// Probability of the path taken so far when every decision is uniform.
    double probability() const {
        return probability_;
    }
    const std::vector<size_t> &taken() const {
        return taken_;
    }
    const std::vector<size_t> &branching() const {
        return branching_;
    }

   private:
    std::vector<size_t> prefix_;
    std::vector<size_t> taken_;
    std::vector<size_t> branching_;
    double probability_ = 1.0;
};

/// Runs body once for every distinct sequence of tie-break decisions it can take. The body must
/// be deterministic apart from the chooser. Returns the number of paths visited; throws if more
/// than max_paths would be needed.
size_t enumerate_choices(const std::function<void(ScriptedChooser &)> &body,
                         size_t max_paths = 1u << 22);

/// Unordered vertex pairs in the order they were accepted.
struct Pairing {
    std::vector<std::pair<int, int>> pairs;
    /// Radius at which each pair was formed.
    std::vector<int> steps;
};

/// Expanding-diamonds pairing: at radius t = 1, 2, ..., pairs among particles still unpaired when
/// the step begins are accepted one at a time, each chosen uniformly among the candidates that
/// do not touch an already accepted pair.
Pairing expand_and_pair(const TorusLattice &lat, const Syndrome &syn, Chooser &chooser);
Pairing expand_and_pair(const RingLattice &lat, const Syndrome &syn, Chooser &chooser);

/// Accepts pairs from cand (kept in canonical order) until none is valid; appends to out.
/// paired is indexed by vertex and updated in place.
void accept_greedily(std::vector<std::pair<int, int>> &cand, std::vector<uint8_t> &paired,
                     Chooser &chooser, std::vector<std::pair<int, int>> &out);

}  // namespace toricmem

#endif
