#include "toricmem/lattice.h"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace toricmem {

void BitSet::clear() {
    std::fill(words_.begin(), words_.end(), 0);
}

size_t BitSet::count() const {
    size_t c = 0;
    for (uint64_t w : words_) {
        c += static_cast<size_t>(__builtin_popcountll(w));
    }
    return c;
}

bool BitSet::none() const {
    for (uint64_t w : words_) {
        if (w) {
            return false;
        }
    }
    return true;
}

BitSet &BitSet::operator^=(const BitSet &other) {
    if (other.n_ != n_) {
        throw std::invalid_argument("BitSet size mismatch");
    }
    for (size_t i = 0; i < words_.size(); i++) {
        words_[i] ^= other.words_[i];
    }
    return *this;
}

std::vector<size_t> BitSet::ones() const {
    std::vector<size_t> out;
    for_each_one([&](size_t i) { out.push_back(i); });
    return out;
}

TorusLattice::TorusLattice(int k) : k_(k) {
    if (k < 2) {
        throw std::invalid_argument("torus size must be at least 2");
    }
}

std::pair<int, int> TorusLattice::endpoints(int e) const {
    int v = e >> 1;
    int x = v % k_;
    int y = v / k_;
    if ((e & 1) == 0) {
        return {v, y * k_ + wrap(x + 1)};
    }
    return {v, wrap(y + 1) * k_ + x};
}

std::vector<int> TorusLattice::incident_edges(int v) const {
    VertexCoord c = vertex_coord(v);
    return {
        edge_index({c.x, c.y, Orientation::Horizontal}),
        edge_index({c.x - 1, c.y, Orientation::Horizontal}),
        edge_index({c.x, c.y, Orientation::Vertical}),
        edge_index({c.x, c.y - 1, Orientation::Vertical}),
    };
}

std::vector<int> TorusLattice::plaquette_edges(int x, int y) const {
    return {
        edge_index({x, y, Orientation::Horizontal}),
        edge_index({x, y + 1, Orientation::Horizontal}),
        edge_index({x, y, Orientation::Vertical}),
        edge_index({x + 1, y, Orientation::Vertical}),
    };
}

int TorusLattice::distance(int u, int v) const {
    int dx = std::abs(u % k_ - v % k_);
    int dy = std::abs(u / k_ - v / k_);
    return std::min(dx, k_ - dx) + std::min(dy, k_ - dy);
}

void TorusLattice::diamond_into(int center, int t, std::vector<int> &out) const {
    out.clear();
    if (t < 1) {
        throw std::invalid_argument("diamond radius must be at least 1");
    }
    if (t > diameter()) {
        return;
    }
    VertexCoord c = vertex_coord(center);
    for (int dx = -t; dx <= t; dx++) {
        int r = t - std::abs(dx);
        for (int s : {-1, 1}) {
            int v = vertex_index({c.x + dx, c.y + s * r});
            if (distance(center, v) == t) {
                out.push_back(v);
            }
            if (r == 0) {
                break;
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

std::vector<int> TorusLattice::diamond(int center, int t) const {
    std::vector<int> out;
    diamond_into(center, t, out);
    return out;
}

namespace {

// Signed step count along one axis: toward the nearer wrap, ties positive.
int axis_step(int from, int to, int k) {
    int d = ((to - from) % k + k) % k;
    return d <= k - d ? d : d - k;
}

}  // namespace

std::pair<int, int> TorusLattice::path_displacement(int u, int v) const {
    return {axis_step(u % k_, v % k_, k_), axis_step(u / k_, v / k_, k_)};
}

std::vector<int> TorusLattice::shortest_path(int u, int v) const {
    std::vector<int> path;
    auto [sx, sy] = path_displacement(u, v);
    int x = u % k_;
    int y = u / k_;
    int dir = sx > 0 ? 1 : -1;
    for (int i = 0; i < std::abs(sx); i++) {
        if (dir > 0) {
            path.push_back(edge_index({x, y, Orientation::Horizontal}));
        } else {
            path.push_back(edge_index({x - 1, y, Orientation::Horizontal}));
        }
        x = wrap(x + dir);
    }
    dir = sy > 0 ? 1 : -1;
    for (int i = 0; i < std::abs(sy); i++) {
        if (dir > 0) {
            path.push_back(edge_index({x, y, Orientation::Vertical}));
        } else {
            path.push_back(edge_index({x, y - 1, Orientation::Vertical}));
        }
        y = wrap(y + dir);
    }
    return path;
}

RingLattice::RingLattice(int k) : k_(k) {
    if (k < 2) {
        throw std::invalid_argument("ring size must be at least 2");
    }
}

int RingLattice::distance(int u, int v) const {
    int d = std::abs(u - v);
    return std::min(d, k_ - d);
}

void RingLattice::diamond_into(int center, int t, std::vector<int> &out) const {
    out.clear();
    if (t < 1) {
        throw std::invalid_argument("diamond radius must be at least 1");
    }
    if (t > diameter()) {
        return;
    }
    int a = wrap(center - t);
    int b = wrap(center + t);
    out.push_back(std::min(a, b));
    if (a != b) {
        out.push_back(std::max(a, b));
    }
}

std::vector<int> RingLattice::diamond(int center, int t) const {
    std::vector<int> out;
    diamond_into(center, t, out);
    return out;
}

std::vector<int> RingLattice::shortest_path(int u, int v) const {
    std::vector<int> path;
    int s = axis_step(u, v, k_);
    int x = u;
    for (int i = 0; i < std::abs(s); i++) {
        if (s > 0) {
            path.push_back(x);
            x = wrap(x + 1);
        } else {
            path.push_back(wrap(x - 1));
            x = wrap(x - 1);
        }
    }
    return path;
}

namespace {

ErrorConfig sample_bits(size_t n, double p, Stream &rng) {
    auto t = BernoulliThreshold::from_probability(p);
    ErrorConfig cfg(n);
    if (t.never()) {
        return cfg;
    }
    for (size_t i = 0; i < n; i++) {
        if (rng.bernoulli(t)) {
            cfg.set(i);
        }
    }
    return cfg;
}

template <typename Lattice>
Syndrome syndrome_generic(const Lattice &lat, const ErrorConfig &cfg) {
    std::vector<uint8_t> parity(static_cast<size_t>(lat.num_vertices()), 0);
    cfg.for_each_one([&](size_t e) {
        auto [a, b] = lat.endpoints(static_cast<int>(e));
        parity[static_cast<size_t>(a)] ^= 1;
        parity[static_cast<size_t>(b)] ^= 1;
    });
    Syndrome s;
    for (size_t v = 0; v < parity.size(); v++) {
        if (parity[v]) {
            s.defects.push_back(static_cast<int>(v));
        }
    }
    return s;
}

}  // namespace

ErrorConfig sample_errors(const TorusLattice &lat, double p, Stream &rng) {
    return sample_bits(static_cast<size_t>(lat.num_edges()), p, rng);
}

ErrorConfig sample_errors(const RingLattice &lat, double p, Stream &rng) {
    return sample_bits(static_cast<size_t>(lat.num_edges()), p, rng);
}

Syndrome syndrome_of(const TorusLattice &lat, const ErrorConfig &cfg) {
    return syndrome_generic(lat, cfg);
}

Syndrome syndrome_of(const RingLattice &lat, const ErrorConfig &cfg) {
    return syndrome_generic(lat, cfg);
}

HomologyClass homology_class(const TorusLattice &lat, const ErrorConfig &cfg) {
    if (!syndrome_of(lat, cfg).defects.empty()) {
        throw std::invalid_argument("homology_class needs a closed configuration");
    }
    HomologyClass h;
    for (int y = 0; y < lat.k(); y++) {
        if (cfg.get(static_cast<size_t>(lat.edge_index({0, y, Orientation::Horizontal})))) {
            h.wrap_h = !h.wrap_h;
        }
    }
    for (int x = 0; x < lat.k(); x++) {
        if (cfg.get(static_cast<size_t>(lat.edge_index({x, 0, Orientation::Vertical})))) {
            h.wrap_v = !h.wrap_v;
        }
    }
    return h;
}

ErrorConfig to_dual(const TorusLattice &lat, const ErrorConfig &cfg) {
    ErrorConfig out(cfg.size());
    cfg.for_each_one([&](size_t e) {
        EdgeCoord c = lat.edge_coord(static_cast<int>(e));
        Orientation o = c.orientation == Orientation::Horizontal ? Orientation::Vertical
                                                                 : Orientation::Horizontal;
        out.set(static_cast<size_t>(lat.edge_index({-c.x, -c.y, o})));
    });
    return out;
}

std::vector<int> plaquette_violations(const TorusLattice &lat, const ErrorConfig &cfg) {
    std::vector<int> out;
    for (int y = 0; y < lat.k(); y++) {
        for (int x = 0; x < lat.k(); x++) {
            int parity = 0;
            for (int e : lat.plaquette_edges(x, y)) {
                parity ^= cfg.get(static_cast<size_t>(e));
            }
            if (parity) {
                out.push_back(lat.vertex_index({x, y}));
            }
        }
    }
    return out;
}

void xor_path(ErrorConfig &cfg, const std::vector<int> &edges) {
    for (int e : edges) {
        cfg.flip(static_cast<size_t>(e));
    }
}

}  // namespace toricmem
