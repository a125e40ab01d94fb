#include "toricmem/pairing.h"

#include <algorithm>
#include <stdexcept>

namespace toricmem {

size_t ScriptedChooser::choose(size_t n) {
    if (n == 0) {
        throw std::invalid_argument("choose(0)");
    }
    size_t i = taken_.size();
    size_t c = i < prefix_.size() ? prefix_[i] : 0;
    if (c >= n) {
        throw std::logic_error("scripted choice out of range; body is not deterministic");
    }
    taken_.push_back(c);
    branching_.push_back(n);
    probability_ /= static_cast<double>(n);
    return c;
}

size_t enumerate_choices(const std::function<void(ScriptedChooser &)> &body, size_t max_paths) {
    std::vector<size_t> prefix;
    size_t paths = 0;
    while (true) {
        if (paths >= max_paths) {
            throw std::runtime_error("enumerate_choices: too many resolution paths");
        }
        ScriptedChooser chooser(prefix);
        body(chooser);
        paths++;
        const auto &taken = chooser.taken();
        const auto &branching = chooser.branching();
        // Advance the deepest decision that still has an untried option.
        size_t d = taken.size();
        while (d > 0 && taken[d - 1] + 1 >= branching[d - 1]) {
            d--;
        }
        if (d == 0) {
            return paths;
        }
        prefix.assign(taken.begin(), taken.begin() + static_cast<std::ptrdiff_t>(d));
        prefix.back()++;
    }
}

void accept_greedily(std::vector<std::pair<int, int>> &cand, std::vector<uint8_t> &paired,
                     Chooser &chooser, std::vector<std::pair<int, int>> &out) {
    while (!cand.empty()) {
        size_t i = chooser.choose(cand.size());
        auto [a, b] = cand[i];
        paired[static_cast<size_t>(a)] = 1;
        paired[static_cast<size_t>(b)] = 1;
        out.push_back({a, b});
        std::erase_if(cand, [&](const std::pair<int, int> &c) {
            return paired[static_cast<size_t>(c.first)] || paired[static_cast<size_t>(c.second)];
        });
    }
}

namespace {

template <typename Lattice>
Pairing pair_generic(const Lattice &lat, const Syndrome &syn, Chooser &chooser) {
    if (syn.defects.size() % 2 != 0) {
        throw std::invalid_argument("malformed syndrome: odd number of defects");
    }
    Pairing result;
    if (syn.defects.empty()) {
        return result;
    }
    size_t nv = static_cast<size_t>(lat.num_vertices());
    std::vector<uint8_t> is_defect(nv, 0);
    std::vector<uint8_t> paired(nv, 0);
    for (int v : syn.defects) {
        if (is_defect[static_cast<size_t>(v)]) {
            throw std::invalid_argument("malformed syndrome: repeated vertex");
        }
        is_defect[static_cast<size_t>(v)] = 1;
    }
    std::vector<int> open(syn.defects);
    std::sort(open.begin(), open.end());
    std::vector<std::pair<int, int>> cand;
    std::vector<int> ring;
    size_t before = 0;
    for (int t = 1; t <= lat.diameter() && !open.empty(); t++) {
        cand.clear();
        size_t m = open.size();
        if (m * 4 * static_cast<size_t>(t) < m * (m - 1) / 2) {
            for (int a : open) {
                lat.diamond_into(a, t, ring);
                for (int b : ring) {
                    if (b > a && is_defect[static_cast<size_t>(b)] && !paired[static_cast<size_t>(b)]) {
                        cand.push_back({a, b});
                    }
                }
            }
        } else {
            // Few particles left: jump straight to the smallest separation still present.
            int dmin = lat.diameter() + 1;
            for (size_t i = 0; i < m; i++) {
                for (size_t j = i + 1; j < m; j++) {
                    dmin = std::min(dmin, lat.distance(open[i], open[j]));
                }
            }
            if (dmin > lat.diameter()) {
                break;
            }
            t = std::max(t, dmin);
            for (size_t i = 0; i < m; i++) {
                for (size_t j = i + 1; j < m; j++) {
                    if (lat.distance(open[i], open[j]) == t) {
                        cand.push_back({open[i], open[j]});
                    }
                }
            }
        }
        before = result.pairs.size();
        accept_greedily(cand, paired, chooser, result.pairs);
        result.steps.resize(result.pairs.size(), t);
        if (result.pairs.size() != before) {
            std::erase_if(open, [&](int v) { return paired[static_cast<size_t>(v)] != 0; });
        }
    }
    if (!open.empty()) {
        throw std::logic_error("expand_and_pair: particles left unpaired");
    }
    return result;
}

}  // namespace

Pairing expand_and_pair(const TorusLattice &lat, const Syndrome &syn, Chooser &chooser) {
    return pair_generic(lat, syn, chooser);
}

Pairing expand_and_pair(const RingLattice &lat, const Syndrome &syn, Chooser &chooser) {
    return pair_generic(lat, syn, chooser);
}

}  // namespace toricmem
