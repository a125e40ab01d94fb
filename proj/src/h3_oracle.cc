#include "toricmem/h3_oracle.h"

#include <algorithm>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "toricmem/pairing.h"

namespace toricmem {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) {
            return false;
        }
        parent[static_cast<size_t>(b)] = a;
        return true;
    }
};

/// Follows which events each defect and particle descends from.
class ProvenanceTracker : public RoundObserver {
   public:
    explicit ProvenanceTracker(size_t vertices) : uf_(0), defect_owner_(vertices, -1) {
    }

    void start(size_t events) {
        uf_ = UnionFind(events);
        groups_ = events;
        for (int v : touched_) {
            defect_owner_[static_cast<size_t>(v)] = -1;
        }
        touched_.clear();
        overrides_.clear();
    }

    void inject(const TorusLattice &lat, const std::vector<std::pair<int, int>> &reals,
                const std::vector<std::pair<int, int>> &ghosts) {
        for (auto [id, e] : reals) {
            auto [a, b] = lat.endpoints(e);
            toggle(a, id);
            toggle(b, id);
        }
        // A flip hides a defect or shows a ghost for this round only.
        overrides_.clear();
        for (auto [id, v] : ghosts) {
            int d = defect_owner_[static_cast<size_t>(v)];
            if (d >= 0) {
                join(id, d);
                overrides_.push_back({v, -1});
            } else {
                overrides_.push_back({v, id});
            }
        }
    }

    int on_newborn(int site) override {
        int s = site_owner(site);
        if (s < 0) {
            throw std::logic_error("provenance: particle born at a site with no source");
        }
        return s;
    }
    void on_persist(int tag, int site) override {
        int s = site_owner(site);
        if (s >= 0) {
            join(tag, s);
        }
    }
    void on_inherit(int tag, int from, int to) override {
        (void)from;
        on_persist(tag, to);
    }
    void on_recovery(int tag_a, int tag_b, int site_a, int site_b) override {
        join(tag_a, tag_b);
        toggle(site_a, tag_a);
        toggle(site_b, tag_a);
    }

    bool all_joined() const {
        return groups_ == 1;
    }

   private:
    int site_owner(int v) const {
        for (auto [site, owner] : overrides_) {
            if (site == v) {
                return owner;
            }
        }
        return defect_owner_[static_cast<size_t>(v)];
    }
    void join(int a, int b) {
        if (uf_.unite(a, b)) {
            groups_--;
        }
    }
    void toggle(int v, int id) {
        int &o = defect_owner_[static_cast<size_t>(v)];
        if (o >= 0) {
            join(id, o);
            o = -1;
        } else {
            o = uf_.find(id);
            touched_.push_back(v);
        }
    }

    UnionFind uf_;
    std::vector<int> defect_owner_;
    std::vector<int> touched_;
    std::vector<std::pair<int, int>> overrides_;
    size_t groups_ = 0;
};

int spatial_distance(const SpacetimeEvent &a, const SpacetimeEvent &b) {
    auto far = [](const SpacetimeEvent &e) {
        return std::make_pair(e.x + (e.kind == SpacetimeEvent::Horizontal ? 1 : 0),
                              e.y + (e.kind == SpacetimeEvent::Vertical ? 1 : 0));
    };
    auto [ax, ay] = far(a);
    auto [bx, by] = far(b);
    const int as[2][2] = {{a.x, a.y}, {ax, ay}};
    const int bs[2][2] = {{b.x, b.y}, {bx, by}};
    int best = 1 << 30;
    for (const auto &u : as) {
        for (const auto &v : bs) {
            best = std::min(best, std::abs(u[0] - v[0]) + std::abs(u[1] - v[1]));
        }
    }
    return best;
}

/// Reusable simulation context for one set size.
class JoinEvaluator {
   public:
    JoinEvaluator(int k, const H3OracleParams &params)
        : params_(params), sim_(k, 0.0, 0.0, decoder(params)), tracker_(static_cast<size_t>(k) * static_cast<size_t>(k)) {
    }

    static MemoryParams decoder(const H3OracleParams &params) {
        MemoryParams d = params.decoder;
        d.detect_separation = false;
        d.detect_winding = false;
        d.probe_radius = params.probe_radius;
        return d;
    }

    double evaluate(const std::vector<SpacetimeEvent> &events, uint64_t &paths) {
        const TorusLattice &lat = sim_.lattice();
        int k = lat.k();
        int min_x = 0, min_y = 0, max_x = 0, max_y = 0, last = 0;
        for (size_t i = 0; i < events.size(); i++) {
            const auto &e = events[i];
            if (i == 0 || e.x < min_x) min_x = e.x;
            if (i == 0 || e.y < min_y) min_y = e.y;
            if (i == 0 || e.x > max_x) max_x = e.x;
            if (i == 0 || e.y > max_y) max_y = e.y;
            if (e.round < 0) {
                throw std::invalid_argument("joined_probability: negative round");
            }
            last = std::max(last, e.round);
        }
        if (2 * (max_x - min_x + 2) >= k || 2 * (max_y - min_y + 2) >= k) {
            throw std::invalid_argument("joined_probability: event set too wide for the lattice");
        }
        int ox = k / 2 - (min_x + max_x) / 2;
        int oy = k / 2 - (min_y + max_y) / 2;
        std::vector<std::vector<std::pair<int, int>>> reals(static_cast<size_t>(last) + 1);
        std::vector<std::vector<std::pair<int, int>>> ghosts(static_cast<size_t>(last) + 1);
        for (size_t i = 0; i < events.size(); i++) {
            const auto &e = events[i];
            int x = e.x + ox;
            int y = e.y + oy;
            auto r = static_cast<size_t>(e.round);
            if (e.kind == SpacetimeEvent::Ghost) {
                ghosts[r].push_back({static_cast<int>(i), lat.vertex_index({x, y})});
            } else {
                Orientation o = e.kind == SpacetimeEvent::Horizontal ? Orientation::Horizontal : Orientation::Vertical;
                reals[r].push_back({static_cast<int>(i), lat.edge_index({x, y, o})});
            }
        }

        double total = 0.0;
        std::vector<int> fresh;
        std::vector<int> flips;
        paths += enumerate_choices(
            [&](ScriptedChooser &chooser) {
                sim_.reset();
                ProvenanceTracker &tracker = tracker_;
                tracker.start(events.size());
                sim_.set_observer(&tracker);
                for (int r = 0;; r++) {
                    fresh.clear();
                    flips.clear();
                    if (r <= last) {
                        auto ur = static_cast<size_t>(r);
                        for (auto [id, e] : reals[ur]) fresh.push_back(e);
                        for (auto [id, v] : ghosts[ur]) flips.push_back(v);
                        tracker.inject(lat, reals[ur], ghosts[ur]);
                    } else {
                        tracker.inject(lat, {}, {});
                    }
                    sim_.step_with(fresh, flips, chooser);
                    if (tracker.all_joined()) {
                        total += chooser.probability();
                        break;
                    }
                    if (r >= last && sim_.particles().empty() && sim_.defect_count() == 0) {
                        break;
                    }
                    if (r > last + params_.settle_rounds) {
                        throw std::runtime_error("joined_probability: decoder did not settle");
                    }
                }
                sim_.set_observer(nullptr);
            },
            params_.max_paths);
        return total;
    }

   private:
    H3OracleParams params_;
    MemorySimulator sim_;
    ProvenanceTracker tracker_;
};

int lattice_for(int size, const H3OracleParams &params) {
    int reach = (size - 1) * (params.spatial_gap + 1) + 2;
    return std::max(16, 2 * reach + 8);
}

}  // namespace

double joined_probability(const std::vector<SpacetimeEvent> &events, const H3OracleParams &params) {
    if (events.empty()) {
        throw std::invalid_argument("joined_probability: empty event set");
    }
    int span = 0;
    for (const auto &e : events) {
        for (const auto &f : events) {
            span = std::max({span, std::abs(e.x - f.x), std::abs(e.y - f.y)});
        }
    }
    JoinEvaluator ev(std::max(16, 2 * span + 12), params);
    uint64_t paths = 0;
    return ev.evaluate(events, paths);
}

namespace {

bool within(const SpacetimeEvent &a, const SpacetimeEvent &b, int gs, int gt) {
    return std::abs(a.round - b.round) <= gt && spatial_distance(a, b) <= gs;
}

int count_components(const std::vector<SpacetimeEvent> &events, int gs, int gt) {
    UnionFind uf(events.size());
    int groups = static_cast<int>(events.size());
    for (size_t i = 0; i < events.size(); i++) {
        for (size_t j = i + 1; j < events.size(); j++) {
            if (within(events[i], events[j], gs, gt) && uf.unite(static_cast<int>(i), static_cast<int>(j))) {
                groups--;
            }
        }
    }
    return groups;
}

}  // namespace

H3OracleResult h3_oracle(int n, int nbar, const H3OracleParams &params) {
    if (n < 0 || nbar < 0 || n + nbar < 1 || n + nbar > 6) {
        throw std::invalid_argument("h3_oracle: need 1 <= n + nbar <= 6");
    }
    if (params.spatial_gap < 0 || params.time_gap < 0 || params.max_components < 0) {
        throw std::invalid_argument("h3_oracle: gaps must be non-negative");
    }
    const int size = n + nbar;
    H3OracleResult res;
    res.n = n;
    res.nbar = nbar;
    res.spatial_gap = params.spatial_gap;
    res.time_gap = params.time_gap;

    // Every event that can sit in a set whose least event is at the origin, indexed implicitly.
    const int R = (size - 1) * (params.spatial_gap + 1);
    const int T = (size - 1) * params.time_gap;
    const int W = 2 * R + 1;
    auto id_of = [&](int t, int x, int y, int kind) { return ((t * W + (y + R)) * W + (x + R)) * 3 + kind; };
    auto event_of = [&](int id) {
        SpacetimeEvent e;
        e.kind = id % 3;
        id /= 3;
        e.x = id % W - R;
        id /= W;
        e.y = id % W - R;
        e.round = id / W;
        return e;
    };
    const size_t pool = static_cast<size_t>(T + 1) * static_cast<size_t>(W) * static_cast<size_t>(W) * 3;
    auto allowed_kind = [&](int kind) { return kind == SpacetimeEvent::Ghost ? nbar > 0 : n > 0; };

    // Linked displacements from each kind.
    struct Offset {
        int dt, dx, dy, kind;
    };
    std::vector<Offset> offsets[3];
    for (int k0 = 0; k0 < 3; k0++) {
        SpacetimeEvent a{0, 0, 0, k0};
        for (int dt = -params.time_gap; dt <= params.time_gap; dt++) {
            for (int dy = -params.spatial_gap - 1; dy <= params.spatial_gap + 1; dy++) {
                for (int dx = -params.spatial_gap - 1; dx <= params.spatial_gap + 1; dx++) {
                    for (int k1 = 0; k1 < 3; k1++) {
                        SpacetimeEvent b{dt, dx, dy, k1};
                        if (allowed_kind(k1) && !(a == b) && within(a, b, params.spatial_gap, params.time_gap)) {
                            offsets[k0].push_back({dt, dx, dy, k1});
                        }
                    }
                }
            }
        }
    }

    JoinEvaluator ev(lattice_for(size, params), params);
    std::vector<SpacetimeEvent> chosen;
    std::vector<uint8_t> seen(pool, 0);
    int reals = 0;
    int ghosts = 0;
    std::tuple<int, int, int, int> key0;

    auto leaf = [&]() {
        res.sets++;
        if (params.max_components > 0 &&
            count_components(chosen, params.near_spatial_gap, params.near_time_gap) > params.max_components) {
            res.skipped_sets++;
            return;
        }
        double pj = ev.evaluate(chosen, res.paths);
        if (pj > 0.0) {
            res.joined_sets++;
            res.classes += pj;
        }
    };

    // Redelmeier growth: each connected set containing the root and otherwise made of later
    // events is reached exactly once.
    std::function<void(std::vector<int>)> grow = [&](std::vector<int> untried) {
        while (!untried.empty()) {
            int v = untried.back();
            untried.pop_back();
            SpacetimeEvent e = event_of(v);
            bool ghost = e.kind == SpacetimeEvent::Ghost;
            if (ghost ? ghosts == nbar : reals == n) {
                continue;
            }
            (ghost ? ghosts : reals)++;
            chosen.push_back(e);
            if (static_cast<int>(chosen.size()) == size) {
                leaf();
            } else {
                std::vector<int> next = untried;
                std::vector<int> added;
                for (const Offset &o : offsets[e.kind]) {
                    int t = e.round + o.dt;
                    int x = e.x + o.dx;
                    int y = e.y + o.dy;
                    if (t < 0 || t > T || std::abs(x) > R || std::abs(y) > R) {
                        continue;
                    }
                    if (!(std::make_tuple(t, y, x, o.kind) > key0)) {
                        continue;
                    }
                    int w = id_of(t, x, y, o.kind);
                    if (!seen[static_cast<size_t>(w)]) {
                        seen[static_cast<size_t>(w)] = 1;
                        next.push_back(w);
                        added.push_back(w);
                    }
                }
                grow(std::move(next));
                for (int w : added) {
                    seen[static_cast<size_t>(w)] = 0;
                }
            }
            chosen.pop_back();
            (ghost ? ghosts : reals)--;
        }
    };
    for (int kind = 0; kind < 3; kind++) {
        if (!allowed_kind(kind)) {
            continue;
        }
        key0 = std::make_tuple(0, 0, 0, kind);
        int root = id_of(0, 0, 0, kind);
        seen[static_cast<size_t>(root)] = 1;
        grow({root});
        seen[static_cast<size_t>(root)] = 0;
    }
    res.count = 2.0 * res.classes;
    return res;
}

std::vector<std::pair<int, int>> h3_oracle_entries() {
    return {{1, 0}, {2, 0}, {0, 1}, {0, 2}, {0, 4}, {1, 1}, {2, 1}, {1, 2}};
}

void write_h3_csv(const std::string &path, const std::vector<H3OracleResult> &rows) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << "n,nbar,count,classes,sets,joined_sets,paths,spatial_gap,time_gap\n";
    out.precision(17);
    for (const auto &r : rows) {
        out << r.n << ',' << r.nbar << ',' << r.count << ',' << r.classes << ',' << r.sets << ','
            << r.joined_sets << ',' << r.paths << ',' << r.spatial_gap << ',' << r.time_gap << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

std::vector<H3OracleResult> read_h3_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path);
    }
    std::string line;
    std::getline(in, line);
    if (line.rfind("n,nbar,count", 0) != 0) {
        throw std::runtime_error("unexpected header in " + path);
    }
    std::vector<H3OracleResult> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string f;
        std::vector<std::string> fields;
        while (std::getline(ss, f, ',')) {
            fields.push_back(f);
        }
        if (fields.size() != 9) {
            throw std::runtime_error("malformed row in " + path + ": " + line);
        }
        H3OracleResult r;
        r.n = std::stoll(fields[0]);
        r.nbar = std::stoll(fields[1]);
        r.count = std::stod(fields[2]);
        r.classes = std::stod(fields[3]);
        r.sets = std::stoull(fields[4]);
        r.joined_sets = std::stoull(fields[5]);
        r.paths = std::stoull(fields[6]);
        r.spatial_gap = std::stoi(fields[7]);
        r.time_gap = std::stoi(fields[8]);
        rows.push_back(r);
    }
    return rows;
}

H3Table h3_table_from(const std::vector<H3OracleResult> &rows) {
    H3Table t = published_h3_entries();
    for (const auto &r : rows) {
        if (!t.has(r.n, r.nbar)) {
            t.set(r.n, r.nbar, r.count);
        }
    }
    return t;
}

std::string default_h3_csv_path() {
    return std::string(TORICMEM_DATA_DIR) + "/h3_small.csv";
}

H3Table default_h3_table() {
    return h3_table_from(read_h3_csv(default_h3_csv_path()));
}

}  // namespace toricmem
