#ifndef TORICMEM_LATTICE_H
#define TORICMEM_LATTICE_H

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "toricmem/rng.h"

namespace toricmem {

/// Fixed-size packed bit set. Bit i lives in word i/64.
class BitSet {
   public:
    BitSet() = default;
    explicit BitSet(size_t n) : n_(n), words_((n + 63) / 64, 0) {
    }

    size_t size() const {
        return n_;
    }
    bool get(size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }
    void set(size_t i, bool v = true) {
        uint64_t m = uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= m;
        } else {
            words_[i >> 6] &= ~m;
        }
    }
    void flip(size_t i) {
        words_[i >> 6] ^= uint64_t{1} << (i & 63);
    }
    void clear();
    size_t count() const;
    bool none() const;
    BitSet &operator^=(const BitSet &other);
    bool operator==(const BitSet &other) const {
        return n_ == other.n_ && words_ == other.words_;
    }
    /// Indices of set bits in increasing order.
    std::vector<size_t> ones() const;
    template <typename F>
    void for_each_one(F &&f) const {
        for (size_t w = 0; w < words_.size(); w++) {
            uint64_t v = words_[w];
            while (v) {
                f(w * 64 + static_cast<size_t>(__builtin_ctzll(v)));
                v &= v - 1;
            }
        }
    }
    const std::vector<uint64_t> &words() const {
        return words_;
    }

   private:
    size_t n_ = 0;
    std::vector<uint64_t> words_;
};

enum class Orientation : uint8_t { Horizontal = 0, Vertical = 1 };

struct VertexCoord {
    int x = 0;
    int y = 0;
    bool operator==(const VertexCoord &) const = default;
};

struct EdgeCoord {
    int x = 0;
    int y = 0;
    Orientation orientation = Orientation::Horizontal;
    bool operator==(const EdgeCoord &) const = default;
};

struct HomologyClass {
    bool wrap_h = false;
    bool wrap_v = false;
    bool trivial() const {
        return !wrap_h && !wrap_v;
    }
    HomologyClass operator^(const HomologyClass &o) const {
        return {wrap_h != o.wrap_h, wrap_v != o.wrap_v};
    }
    bool operator==(const HomologyClass &) const = default;
};

/// Z-error pattern over the edges of a lattice.
using ErrorConfig = BitSet;

/// Violated checks as sorted vertex indices.
struct Syndrome {
    std::vector<int> defects;
    bool operator==(const Syndrome &) const = default;
};

/// k x k torus. Vertex (x,y) has index y*k+x and owns the horizontal edge to (x+1,y)
/// (index 2v) and the vertical edge to (x,y+1) (index 2v+1).
class TorusLattice {
   public:
    explicit TorusLattice(int k);

    int k() const {
        return k_;
    }
    int num_vertices() const {
        return k_ * k_;
    }
    int num_edges() const {
        return 2 * k_ * k_;
    }
    int wrap(int a) const {
        a %= k_;
        return a < 0 ? a + k_ : a;
    }
    int vertex_index(VertexCoord v) const {
        return wrap(v.y) * k_ + wrap(v.x);
    }
    VertexCoord vertex_coord(int v) const {
        return {v % k_, v / k_};
    }
    int edge_index(EdgeCoord e) const {
        return 2 * (wrap(e.y) * k_ + wrap(e.x)) + static_cast<int>(e.orientation);
    }
    EdgeCoord edge_coord(int e) const {
        int v = e >> 1;
        return {v % k_, v / k_, static_cast<Orientation>(e & 1)};
    }
    std::pair<int, int> endpoints(int e) const;
    /// The 4 edges touching vertex v.
    std::vector<int> incident_edges(int v) const;
    /// The 4 edges bounding the plaquette whose lower-left corner is (x,y).
    std::vector<int> plaquette_edges(int x, int y) const;

    int distance(int u, int v) const;
    int distance(VertexCoord u, VertexCoord v) const {
        return distance(vertex_index(u), vertex_index(v));
    }
    /// Largest possible vertex distance.
    int diameter() const {
        return 2 * (k_ / 2);
    }
    /// Vertices at distance exactly t from the center, in increasing index order.
    std::vector<int> diamond(int center, int t) const;
    void diamond_into(int center, int t, std::vector<int> &out) const;
    /// Deterministic geodesic: x first then y, each along the nearer wrap, ties positive.
    std::vector<int> shortest_path(int u, int v) const;
    /// Signed displacement along the path chosen by shortest_path.
    std::pair<int, int> path_displacement(int u, int v) const;

   private:
    int k_;
};

/// Ring of k edges; edge i joins vertices i and i+1 mod k.
class RingLattice {
   public:
    explicit RingLattice(int k);

    int k() const {
        return k_;
    }
    int num_vertices() const {
        return k_;
    }
    int num_edges() const {
        return k_;
    }
    int wrap(int a) const {
        a %= k_;
        return a < 0 ? a + k_ : a;
    }
    std::pair<int, int> endpoints(int e) const {
        return {e, wrap(e + 1)};
    }
    int distance(int u, int v) const;
    int diameter() const {
        return k_ / 2;
    }
    std::vector<int> diamond(int center, int t) const;
    void diamond_into(int center, int t, std::vector<int> &out) const;
    std::vector<int> shortest_path(int u, int v) const;

   private:
    int k_;
};

ErrorConfig sample_errors(const TorusLattice &lat, double p, Stream &rng);
ErrorConfig sample_errors(const RingLattice &lat, double p, Stream &rng);

Syndrome syndrome_of(const TorusLattice &lat, const ErrorConfig &cfg);
Syndrome syndrome_of(const RingLattice &lat, const ErrorConfig &cfg);

/// Parities of the cut lines x=0 (horizontal edges) and y=0 (vertical edges).
/// Throws if cfg has a non-empty syndrome.
HomologyClass homology_class(const TorusLattice &lat, const ErrorConfig &cfg);

/// Rotates every edge onto the dual edge crossing it. The dual vertex (a,b) stands for the
/// plaquette with lower-left corner (-a,-b), which makes the map an involution.
ErrorConfig to_dual(const TorusLattice &lat, const ErrorConfig &cfg);

/// Plaquettes with odd error parity, indexed like vertices by their lower-left corner.
std::vector<int> plaquette_violations(const TorusLattice &lat, const ErrorConfig &cfg);

void xor_path(ErrorConfig &cfg, const std::vector<int> &edges);

}  // namespace toricmem

#endif
