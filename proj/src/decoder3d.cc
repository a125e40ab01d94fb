#include "toricmem/decoder3d.h"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace toricmem {

double star_distance(int l, int dT, const StarMetricParams &params) {
    return static_cast<double>(l) + params.alpha * std::abs(dT);
}

Syndrome measure_syndrome_noisy(const TorusLattice &lat, const Syndrome &truth, double q, Stream &rng) {
    auto t = BernoulliThreshold::from_probability(q);
    std::vector<uint8_t> bits(static_cast<size_t>(lat.num_vertices()), 0);
    for (int v : truth.defects) {
        bits[static_cast<size_t>(v)] = 1;
    }
    if (!t.never()) {
        for (auto &b : bits) {
            if (rng.bernoulli(t)) {
                b ^= 1;
            }
        }
    }
    Syndrome out;
    for (size_t v = 0; v < bits.size(); v++) {
        if (bits[v]) {
            out.defects.push_back(static_cast<int>(v));
        }
    }
    return out;
}

bool pairing_cutoff_check(const TorusLattice &lat, const SpacetimeParticle &a,
                          const SpacetimeParticle &b, const StarMetricParams &params) {
    double ls = star_distance(lat.distance(a.site, b.site), a.birth_round - b.birth_round, params);
    return std::pow(ls, params.beta) < std::pow(a.age, params.beta) + std::pow(b.age, params.beta);
}

int probe_for_heir(const TorusLattice &lat, int site, int max_radius,
                   const std::vector<uint8_t> &available) {
    std::vector<int> ring;
    for (int r = 1; r <= max_radius; r++) {
        lat.diamond_into(site, r, ring);
        for (int v : ring) {
            if (available[static_cast<size_t>(v)]) {
                return v;
            }
        }
    }
    return -1;
}

int ghost_probe_radius(const TorusLattice &lat, double p, double q) {
    if (q <= 0.0) {
        return 1;
    }
    if (p <= 0.0) {
        return lat.diameter();
    }
    int r = static_cast<int>(std::ceil(q / (4.0 * p) - 1e-12));
    return std::clamp(r, 1, lat.diameter());
}

MemorySimulator::MemorySimulator(int k, double p, double q, MemoryParams params)
    : lat_(k),
      p_(p),
      q_(q),
      params_(params),
      p_cut_(BernoulliThreshold::from_probability(p)),
      q_cut_(BernoulliThreshold::from_probability(q)),
      probe_radius_(params.probe_radius > 0 ? params.probe_radius : ghost_probe_radius(lat_, p, q)) {
    if (params_.metric.alpha <= 0.0) {
        throw std::invalid_argument("alpha must be positive");
    }
    if (params_.radius_steps < 1) {
        throw std::invalid_argument("radius_steps must be positive");
    }
    size_t nv = static_cast<size_t>(lat_.num_vertices());
    errors_ = ErrorConfig(static_cast<size_t>(lat_.num_edges()));
    defect_.assign(nv, 0);
    defect_pos_.assign(nv, -1);
    measured_.assign(nv, 0);
    available_.assign(nv, 0);
    stamp_.assign(nv, 0);
    lift_x_.assign(nv, 0);
    lift_y_.assign(nv, 0);
}

void MemorySimulator::reset() {
    errors_.clear();
    for (int v : defect_list_) {
        defect_[static_cast<size_t>(v)] = 0;
        defect_pos_[static_cast<size_t>(v)] = -1;
    }
    defect_list_.clear();
    particles_.clear();
    since_reset_ = 0;
}

void MemorySimulator::toggle_defect(int v) {
    size_t i = static_cast<size_t>(v);
    if (defect_[i]) {
        defect_[i] = 0;
        int pos = defect_pos_[i];
        int last = defect_list_.back();
        defect_list_[static_cast<size_t>(pos)] = last;
        defect_pos_[static_cast<size_t>(last)] = pos;
        defect_list_.pop_back();
        defect_pos_[i] = -1;
    } else {
        defect_[i] = 1;
        defect_pos_[i] = static_cast<int>(defect_list_.size());
        defect_list_.push_back(v);
    }
}

std::vector<int> MemorySimulator::true_defects() const {
    std::vector<int> out(defect_list_);
    std::sort(out.begin(), out.end());
    return out;
}

RoundReport MemorySimulator::step(Stream &rng) {
    std::vector<int> &fresh = fresh_;
    std::vector<int> &flips = flips_;
    fresh.clear();
    flips.clear();
    if (!p_cut_.never()) {
        int ne = lat_.num_edges();
        for (int e = 0; e < ne; e++) {
            if (rng.bernoulli(p_cut_)) {
                fresh.push_back(e);
            }
        }
    }
    if (!q_cut_.never()) {
        int nv = lat_.num_vertices();
        for (int v = 0; v < nv; v++) {
            if (rng.bernoulli(q_cut_)) {
                flips.push_back(v);
            }
        }
    }
    RandomChooser chooser(rng);
    return step_with(fresh, flips, chooser);
}

RoundReport MemorySimulator::step_with(const std::vector<int> &fresh_edges,
                                       const std::vector<int> &flips, Chooser &chooser) {
    RoundReport rep;
    round_++;
    since_reset_++;
    for (int e : fresh_edges) {
        errors_.flip(static_cast<size_t>(e));
        auto [a, b] = lat_.endpoints(e);
        toggle_defect(a);
        toggle_defect(b);
    }

    // Measured syndrome = true defects with the flipped vertices toggled.
    int sv = ++stamp_value_;
    std::vector<int> touched;
    auto touch = [&](int v) {
        size_t i = static_cast<size_t>(v);
        if (stamp_[i] != sv) {
            stamp_[i] = sv;
            measured_[i] = defect_[i];
            touched.push_back(v);
        }
    };
    for (int v : defect_list_) {
        touch(v);
    }
    for (int v : flips) {
        touch(v);
        measured_[static_cast<size_t>(v)] ^= 1;
    }
    std::vector<int> measured;
    for (int v : touched) {
        if (measured_[static_cast<size_t>(v)]) {
            measured.push_back(v);
        }
    }
    std::sort(measured.begin(), measured.end());

    reconcile(measured, rep);
    for (auto &pt : particles_) {
        pt.age = round_ - pt.birth_round + 1;
        pt.paired = false;
    }
    pair_and_recover(chooser, rep);

    last_counted_ = since_reset_ > params_.warmup_rounds;
    stats_.rounds++;
    if (last_counted_) {
        stats_.counted_rounds++;
    }
    if ((params_.detect_separation || params_.detect_winding) && detect_failure()) {
        rep.failure = true;
        rep.failure_kind = last_failure_;
        stats_.failures++;
        if (last_failure_ == FailureKind::Winding) {
            stats_.winding_failures++;
        }
        if (last_counted_) {
            stats_.counted_failures++;
        }
        reset();
    }
    stats_.newborns += static_cast<uint64_t>(rep.newborns);
    stats_.inherited += static_cast<uint64_t>(rep.inherited);
    stats_.reinstated += static_cast<uint64_t>(rep.reinstated);
    stats_.dropped += static_cast<uint64_t>(rep.dropped);
    stats_.pairs += static_cast<uint64_t>(rep.pairs);
    stats_.chains_applied += static_cast<uint64_t>(rep.chains_applied);
    stats_.chains_withheld += static_cast<uint64_t>(rep.chains_withheld);
    return rep;
}

int MemorySimulator::reinstatement_limit(const SpacetimeParticle &pt) const {
    if (params_.reinstatement == ReinstatementRule::FixedCap) {
        return params_.max_reinstatements;
    }
    return std::min(params_.max_reinstatements, pt.observed - 1);
}

void MemorySimulator::reconcile(const std::vector<int> &measured, RoundReport &rep) {
    for (int v : measured) {
        available_[static_cast<size_t>(v)] = 1;
    }
    std::sort(particles_.begin(), particles_.end(), [](const auto &a, const auto &b) {
        return a.birth_round != b.birth_round ? a.birth_round < b.birth_round : a.site < b.site;
    });
    std::vector<uint8_t> seen(particles_.size(), 0);
    for (size_t i = 0; i < particles_.size(); i++) {
        auto &pt = particles_[i];
        if (available_[static_cast<size_t>(pt.site)]) {
            available_[static_cast<size_t>(pt.site)] = 0;
            seen[i] = 1;
            pt.reinstated = 0;
            pt.observed++;
            if (observer_) {
                observer_->on_persist(pt.tag, pt.site);
            }
        }
    }
    std::vector<uint8_t> drop(particles_.size(), 0);
    bool any_drop = false;
    for (size_t i = 0; i < particles_.size(); i++) {
        if (seen[i]) {
            continue;
        }
        auto &pt = particles_[i];
        int heir = probe_for_heir(lat_, pt.site, probe_radius_, available_);
        if (heir >= 0) {
            available_[static_cast<size_t>(heir)] = 0;
            if (observer_) {
                observer_->on_inherit(pt.tag, pt.site, heir);
            }
            pt.site = heir;
            pt.reinstated = 0;
            pt.observed++;
            rep.inherited++;
        } else if (pt.reinstated < reinstatement_limit(pt)) {
            pt.reinstated++;
            rep.reinstated++;
        } else {
            drop[i] = 1;
            any_drop = true;
            rep.dropped++;
            if (observer_) {
                observer_->on_drop(pt.tag, pt.site);
            }
        }
    }
    if (any_drop) {
        size_t w = 0;
        for (size_t i = 0; i < particles_.size(); i++) {
            if (!drop[i]) {
                particles_[w++] = particles_[i];
            }
        }
        particles_.resize(w);
    }
    for (int v : measured) {
        if (available_[static_cast<size_t>(v)]) {
            available_[static_cast<size_t>(v)] = 0;
            SpacetimeParticle pt;
            pt.site = v;
            pt.birth_round = round_;
            pt.tag = observer_ ? observer_->on_newborn(v) : 0;
            particles_.push_back(pt);
            rep.newborns++;
        }
    }
}

void MemorySimulator::pair_and_recover(Chooser &chooser, RoundReport &rep) {
    size_t m = particles_.size();
    if (m < 2) {
        return;
    }
    const double eps = 1e-9;
    double r_max = lat_.k() * (1.0 + params_.metric.alpha);
    struct Cand {
        double ls;
        int lo;
        int hi;
        int a;
        int b;
    };
    std::vector<Cand> cand;
    for (size_t i = 0; i < m; i++) {
        for (size_t j = i + 1; j < m; j++) {
            const auto &pa = particles_[i];
            const auto &pb = particles_[j];
            double ls = star_distance(lat_.distance(pa.site, pb.site), pa.birth_round - pb.birth_round,
                                      params_.metric);
            if (ls <= r_max + eps) {
                cand.push_back({ls, std::min(pa.site, pb.site), std::max(pa.site, pb.site),
                                static_cast<int>(i), static_cast<int>(j)});
            }
        }
    }
    std::sort(cand.begin(), cand.end(), [](const Cand &x, const Cand &y) {
        if (x.ls != y.ls) {
            return x.ls < y.ls;
        }
        return x.lo != y.lo ? x.lo < y.lo : x.hi < y.hi;
    });

    // Octahedra grow in radius_steps equal increments; inside a step, nearer pairs meet first
    // and only exact ties are left to the chooser.
    std::vector<uint8_t> paired(m, 0);
    std::vector<std::pair<int, int>> accepted;
    std::vector<std::pair<int, int>> group;
    size_t pos = 0;
    for (int s = 1; s <= params_.radius_steps && pos < cand.size(); s++) {
        double bound = r_max * s / params_.radius_steps + eps;
        while (pos < cand.size() && cand[pos].ls <= bound) {
            size_t end = pos;
            group.clear();
            while (end < cand.size() && cand[end].ls - cand[pos].ls <= eps && cand[end].ls <= bound) {
                const Cand &c = cand[end];
                if (!paired[static_cast<size_t>(c.a)] && !paired[static_cast<size_t>(c.b)]) {
                    group.push_back({c.a, c.b});
                }
                end++;
            }
            accept_greedily(group, paired, chooser, accepted);
            pos = end;
        }
    }

    std::vector<uint8_t> remove(m, 0);
    for (auto [a, b] : accepted) {
        auto &pa = particles_[static_cast<size_t>(a)];
        auto &pb = particles_[static_cast<size_t>(b)];
        pa.paired = true;
        pb.paired = true;
        rep.pairs++;
        if (!pairing_cutoff_check(lat_, pa, pb, params_.metric)) {
            rep.chains_withheld++;
            continue;
        }
        for (int e : lat_.shortest_path(pa.site, pb.site)) {
            errors_.flip(static_cast<size_t>(e));
        }
        toggle_defect(pa.site);
        toggle_defect(pb.site);
        if (observer_) {
            observer_->on_recovery(pa.tag, pb.tag, pa.site, pb.site);
        }
        remove[static_cast<size_t>(a)] = 1;
        remove[static_cast<size_t>(b)] = 1;
        rep.chains_applied++;
    }
    size_t w = 0;
    for (size_t i = 0; i < m; i++) {
        if (!remove[i]) {
            particles_[w++] = particles_[i];
        }
    }
    particles_.resize(w);
}

bool MemorySimulator::detect_failure() {
    if (errors_.none()) {
        return false;
    }
    int k = lat_.k();
    int sv = ++stamp_value_;
    std::vector<int> queue;
    std::vector<int> cluster_edges;
    std::vector<int> cluster_defects;
    std::vector<int> trivial_edges;
    bool failed = false;
    errors_.for_each_one([&](size_t e0) {
        if (failed) {
            return;
        }
        int root = lat_.endpoints(static_cast<int>(e0)).first;
        if (stamp_[static_cast<size_t>(root)] == sv) {
            return;
        }
        stamp_[static_cast<size_t>(root)] = sv;
        lift_x_[static_cast<size_t>(root)] = 0;
        lift_y_[static_cast<size_t>(root)] = 0;
        queue.assign(1, root);
        cluster_edges.clear();
        cluster_defects.clear();
        bool winds = false;
        for (size_t qi = 0; qi < queue.size(); qi++) {
            int v = queue[qi];
            size_t vi = static_cast<size_t>(v);
            if (defect_[vi]) {
                cluster_defects.push_back(v);
            }
            int x = v % k;
            int y = v / k;
            const int nbr[4][3] = {
                {2 * v, 1, 0},
                {2 * (y * k + lat_.wrap(x - 1)), -1, 0},
                {2 * v + 1, 0, 1},
                {2 * (lat_.wrap(y - 1) * k + x) + 1, 0, -1},
            };
            for (const auto &nb : nbr) {
                if (!errors_.get(static_cast<size_t>(nb[0]))) {
                    continue;
                }
                if (nb[1] + nb[2] > 0) {
                    cluster_edges.push_back(nb[0]);  // each edge once, from its owner
                }
                int w = lat_.vertex_index({x + nb[1], y + nb[2]});
                size_t wi = static_cast<size_t>(w);
                int lx = lift_x_[vi] + nb[1];
                int ly = lift_y_[vi] + nb[2];
                if (stamp_[wi] != sv) {
                    stamp_[wi] = sv;
                    lift_x_[wi] = lx;
                    lift_y_[wi] = ly;
                    queue.push_back(w);
                } else if (lift_x_[wi] != lx || lift_y_[wi] != ly) {
                    winds = true;
                }
            }
        }
        if (cluster_defects.empty()) {
            // A closed cluster is either a product of stabilizers, which is dropped, or it
            // carries a non-contractible loop.
            bool h = false;
            bool vv = false;
            for (int e : cluster_edges) {
                EdgeCoord c = lat_.edge_coord(e);
                if (c.orientation == Orientation::Horizontal && c.x == 0) {
                    h = !h;
                } else if (c.orientation == Orientation::Vertical && c.y == 0) {
                    vv = !vv;
                }
            }
            if (h || vv) {
                if (params_.detect_winding) {
                    failed = true;
                    last_failure_ = FailureKind::Winding;
                }
            } else {
                trivial_edges.insert(trivial_edges.end(), cluster_edges.begin(), cluster_edges.end());
            }
            return;
        }
        if (winds && params_.detect_winding) {
            failed = true;
            last_failure_ = FailureKind::Winding;
            return;
        }
        if (!params_.detect_separation || winds) {
            return;
        }
        for (size_t i = 0; i < cluster_defects.size() && !failed; i++) {
            size_t a = static_cast<size_t>(cluster_defects[i]);
            for (size_t j = i + 1; j < cluster_defects.size(); j++) {
                size_t b = static_cast<size_t>(cluster_defects[j]);
                if (std::abs(lift_x_[a] - lift_x_[b]) + std::abs(lift_y_[a] - lift_y_[b]) >= k) {
                    failed = true;
                    last_failure_ = FailureKind::Separation;
                    break;
                }
            }
        }
    });
    if (!failed) {
        for (int e : trivial_edges) {
            errors_.flip(static_cast<size_t>(e));
        }
    }
    return failed;
}

FailureSample run_memory_simulation(int k, double p, double q, uint64_t n_rounds, uint64_t seed,
                                    const MemoryParams &params) {
    MemorySimulator sim(k, p, q, params);
    Stream rng(seed);
    for (uint64_t r = 0; r < n_rounds; r++) {
        sim.step(rng);
    }
    FailureSample s;
    s.k = k;
    s.p = p;
    s.q = q;
    s.trials = sim.stats().counted_rounds;
    s.failures = sim.stats().counted_failures;
    return s;
}

}  // namespace toricmem
