#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "combinatorics.hpp"
#include "geometry.hpp"
#include "weights.hpp"

namespace looplab {

/// Local arc state of one plaquette: partner[k] is the side joined to side k, or -1.
struct LocalState {
    const char* name;
    int label;
    std::array<int, 4> partner;
    bool uses(int k) const { return partner[k] >= 0; }
};

// a: arcs around the corners v1, v3; b: arcs around the tagged corners v0, v2
inline const std::vector<LocalState>& dense_states() {
    static const std::vector<LocalState> s{
        {"a", L_a, {1, 0, 3, 2}},
        {"b", L_b, {3, 2, 1, 0}},
    };
    return s;
}

inline const std::vector<LocalState>& dilute_states() {
    static const std::vector<LocalState> s{
        {"t", L_t, {-1, -1, -1, -1}}, {"u1", L_u1, {1, 0, -1, -1}}, {"u1", L_u1, {-1, -1, 3, 2}},
        {"u2", L_u2, {3, -1, -1, 0}}, {"u2", L_u2, {-1, 2, 1, -1}}, {"v", L_v, {2, -1, 0, -1}},
        {"v", L_v, {-1, 3, -1, 1}},   {"a", L_a, {1, 0, 3, 2}},     {"b", L_b, {3, 2, 1, 0}},
    };
    return s;
}

inline const std::vector<LocalState>& local_states(Model m) {
    return m == Model::dense ? dense_states() : dilute_states();
}

/// Per-rhombus weights plus fugacity and spin. Weights need not be on-family.
template <class T> struct LoopModel {
    Model model = Model::dense;
    T n{};
    T sigma{};
    std::vector<PlaquetteWeights<T>> w;
};

template <class T>
LoopModel<T> dense_model(const RhombicDomain<T>& d, const DenseParams<T>& p, const Perturbation& pert = {}) {
    LoopModel<T> m{Model::dense, p.n(), T(p.sigma() + T(pert.sigma_shift)), {}};
    for (auto& r : d.rhombi()) {
        auto t = dense_weights(r.angle, p).table();
        pert.apply(t);
        m.w.push_back(t);
    }
    return m;
}

template <class T>
LoopModel<T> dilute_model(const RhombicDomain<T>& d, const DiluteParams<T>& p, const Perturbation& pert = {}) {
    LoopModel<T> m{Model::dilute, p.n(), T(p.sigma() + T(pert.sigma_shift)), {}};
    for (auto& r : d.rhombi()) {
        auto t = dilute_weights(r.angle, p).table();
        pert.apply(t);
        m.w.push_back(t);
    }
    return m;
}

/// state index per rhombus
using Configuration = std::vector<std::uint8_t>;

inline std::uint64_t default_config_cap() {
    if (const char* e = std::getenv("LOOPLAB_MAX_CONFIGS")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(e, &end, 10);
        if (end != e && *end == '\0' && v > 0) return v;
    }
    return 100000000ULL;
}

/// Every state assignment, lexicographic with rhombus 0 varying slowest.
template <class T> class ConfigEnumerator {
public:
    ConfigEnumerator(const RhombicDomain<T>& d, Model m, std::uint64_t cap = default_config_cap(), bool raw = false)
        : d_(d), model_(m), raw_(raw) {
        k_ = local_states(m).size();
        total_ = 1;
        for (int i = 0; i < d.size(); ++i) {
            if (total_ > cap / k_) throw resource_limit_error("configuration count exceeds cap " + std::to_string(cap));
            total_ *= k_;
        }
        if (total_ > cap) throw resource_limit_error("configuration count exceeds cap " + std::to_string(cap));
    }

    std::uint64_t raw_count() const { return total_; }

    Configuration decode(std::uint64_t idx) const {
        Configuration c(d_.size());
        for (int r = d_.size() - 1; r >= 0; --r) {
            c[r] = static_cast<std::uint8_t>(idx % k_);
            idx /= k_;
        }
        return c;
    }

    /// dilute only: every internal midpoint used from both sides or from neither
    bool bulk_consistent(const Configuration& c) const {
        if (model_ == Model::dense) return true;
        const auto& st = local_states(model_);
        for (auto& nd : d_.nodes())
            if (nd.sides.size() == 2 &&
                st[c[nd.sides[0].r]].uses(nd.sides[0].s) != st[c[nd.sides[1].r]].uses(nd.sides[1].s))
                return false;
        return true;
    }

    /// visit raw indices [begin, end); chunks are independent
    void for_each_range(std::uint64_t begin, std::uint64_t end,
                        const std::function<void(std::uint64_t, const Configuration&)>& f) const {
        if (begin >= end) return;
        Configuration c = decode(begin);
        for (std::uint64_t i = begin; i < end; ++i) {
            if (raw_ || bulk_consistent(c)) f(i, c);
            for (int r = d_.size() - 1; r >= 0; --r) {
                if (++c[r] < k_) break;
                c[r] = 0;
            }
        }
    }

    void for_each(const std::function<void(std::uint64_t, const Configuration&)>& f) const {
        for_each_range(0, total_, f);
    }

    std::vector<Configuration> all() const {
        std::vector<Configuration> v;
        for_each([&](std::uint64_t, const Configuration& c) { v.push_back(c); });
        return v;
    }

private:
    const RhombicDomain<T>& d_;
    Model model_;
    bool raw_;
    std::uint64_t k_ = 1, total_ = 1;
};

template <class T>
std::vector<Configuration> enumerate_configs(const RhombicDomain<T>& d, Model m, std::uint64_t cap = default_config_cap(),
                                             bool raw = false) {
    return ConfigEnumerator<T>(d, m, cap, raw).all();
}

/// Signed turn of a path entering through side_in and leaving through side_out.
/// Entering side j, v[j] is on the left: turning left to side j-1 sweeps the
/// corner v[j], turning right to side j+1 sweeps v[j+1].
template <class T> T turning_angle(const Rhombus<T>& rh, int side_in, int side_out) {
    if (side_in == side_out) throw std::invalid_argument("turning_angle: same side");
    if (side_out == (side_in + 3) % 4) return rh.corner(side_in);
    if (side_out == (side_in + 1) % 4) return -rh.corner((side_in + 1) % 4);
    return T(0);
}

/// Where the exploration path enters and how the other boundary points are
/// joined outside. Dense: perfect matching, the entry's partner is B.
/// Dilute: partial matching with the entry unmatched.
struct ExternalDiagram {
    int entry = 0;
    ChordDiagram matching;

    int b_point() const { return matching.partner(entry); }
    std::string encode() const { return "e" + std::to_string(entry) + ":" + matching.encode(); }

    void validate(Model m, int boundary_count) const {
        if (matching.point_count() != boundary_count) throw std::invalid_argument("external diagram size mismatch");
        if (entry < 0 || entry >= boundary_count) throw std::invalid_argument("entry out of range");
        if (m == Model::dense && !matching.perfect()) throw std::invalid_argument("dense external diagram must be perfect");
        if (m == Model::dilute && matching.partner(entry) >= 0)
            throw std::invalid_argument("dilute external diagram must leave the entry unmatched");
    }
};

/// All admissible external diagrams for a given entry.
inline std::vector<ExternalDiagram> admissible_externals(Model m, int boundary_count, int entry) {
    std::vector<ExternalDiagram> out;
    if (m == Model::dense) {
        for (auto& d : enumerate_diagrams(boundary_count, true)) out.push_back({entry, d});
        return out;
    }
    std::vector<int> rest;
    for (int i = 1; i < boundary_count; ++i) rest.push_back((entry + i) % boundary_count);
    for (auto& ch : enumerate_matchings(rest, false)) out.push_back({entry, ChordDiagram(boundary_count, ch)});
    return out;
}

template <class T> struct TraceStep {
    int node;
    T winding;
};

template <class T> struct PathTrace {
    bool valid = false;
    std::vector<TraceStep<T>> visited;
    int terminal = -1; // node where the path ends (B for dense)
    int loops = 0;     // closed loops, path excluded
};

namespace detail {

template <class T>
int count_mismatches(const RhombicDomain<T>& d, const std::vector<LocalState>& st, const Configuration& c,
                     const ExternalDiagram& ext) {
    int mism = 0;
    for (auto& nd : d.nodes()) {
        bool in0 = st[c[nd.sides[0].r]].uses(nd.sides[0].s);
        bool other;
        if (nd.sides.size() == 2) {
            other = st[c[nd.sides[1].r]].uses(nd.sides[1].s);
        } else {
            int b = nd.boundary_index;
            other = b == ext.entry || ext.matching.partner(b) >= 0;
        }
        mism += in0 != other;
    }
    return mism;
}

// closed cycles of interior arcs plus exterior chords, avoiding the path
template <class T>
int count_loops(const RhombicDomain<T>& d, const std::vector<LocalState>& st, const Configuration& c,
                const ExternalDiagram& ext, Model m, const std::vector<char>& on_path) {
    const int N = static_cast<int>(d.nodes().size());
    std::vector<std::vector<int>> adj(N);
    for (int r = 0; r < d.size(); ++r)
        for (int k = 0; k < 4; ++k) {
            int q = st[c[r]].partner[k];
            if (q > k) {
                int a = d.node_of({r, k}), b = d.node_of({r, q});
                adj[a].push_back(b);
                adj[b].push_back(a);
            }
        }
    for (auto [p, q] : ext.matching.chords()) {
        if (m == Model::dense && (p == ext.entry || q == ext.entry)) continue;
        int a = d.boundary()[p].node, b = d.boundary()[q].node;
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<char> seen(on_path);
    int loops = 0;
    for (int s = 0; s < N; ++s) {
        if (seen[s] || adj[s].empty()) continue;
        ++loops;
        std::vector<int> stack{s};
        seen[s] = 1;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            for (int y : adj[x])
                if (!seen[y]) {
                    seen[y] = 1;
                    stack.push_back(y);
                }
        }
    }
    return loops;
}

} // namespace detail

/// Follow the exploration path from the entry. Invalid (valid=false) when the
/// configuration is not compatible with the external diagram.
template <class T>
PathTrace<T> trace_path(const RhombicDomain<T>& d, Model m, const Configuration& c, const ExternalDiagram& ext) {
    const auto& st = local_states(m);
    PathTrace<T> tr;
    const int mism = detail::count_mismatches(d, st, c, ext);
    if (m == Model::dense ? mism != 0 : mism != 1) return tr;
    const int N = static_cast<int>(d.nodes().size());
    std::vector<char> on_path(N, 0);
    auto visit = [&](int node, T w) {
        if (on_path[node]) throw malformed_configuration_error("exploration path revisits a midpoint");
        on_path[node] = 1;
        tr.visited.push_back({node, w});
    };
    const int B = m == Model::dense ? ext.b_point() : -1;
    T W(0);
    SideRef cur = d.boundary()[ext.entry].side;
    visit(d.boundary()[ext.entry].node, W);
    for (;;) {
        const auto& s = st[c[cur.r]];
        if (!s.uses(cur.s)) break;
        int k = s.partner[cur.s];
        W += turning_angle(d.rhombus(cur.r), cur.s, k);
        SideRef out{cur.r, k};
        int node = d.node_of(out);
        visit(node, W);
        if (auto o = d.across(out)) {
            if (!st[c[o->r]].uses(o->s)) break;
            cur = *o;
            continue;
        }
        int b = d.nodes()[node].boundary_index;
        if (b == B) break;
        int q = ext.matching.partner(b);
        if (q < 0) break;
        W += d.exterior_turn(b, q, ext.entry);
        visit(d.boundary()[q].node, W);
        cur = d.boundary()[q].side;
    }
    tr.terminal = tr.visited.back().node;
    tr.valid = true;
    tr.loops = detail::count_loops(d, st, c, ext, m, on_path);
    return tr;
}

template <class T> T plaquette_product(const LoopModel<T>& lm, const Configuration& c) {
    const auto& st = local_states(lm.model);
    T w(1);
    for (std::size_t r = 0; r < c.size(); ++r) w *= lm.w[r][st[c[r]].label];
    return w;
}

template <class T> T int_pow(const T& x, int k) {
    T r(1);
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

/// plaquette weights times n^(closed loops); the exploration path is not a loop
template <class T>
T config_weight(const RhombicDomain<T>& d, const LoopModel<T>& lm, const Configuration& c, const ExternalDiagram& ext) {
    auto tr = trace_path(d, lm.model, c, ext);
    if (!tr.valid) return T(0);
    return plaquette_product(lm, c) * int_pow(lm.n, tr.loops);
}

struct InternalDiagram {
    ChordDiagram diagram; // on boundary indices
    int interior_loops = 0;
};

/// Connectivity of boundary midpoints through interior arcs only.
template <class T> InternalDiagram internal_chord_diagram(const RhombicDomain<T>& d, Model m, const Configuration& c) {
    const auto& st = local_states(m);
    if (!ConfigEnumerator<T>(d, m, ~0ULL, true).bulk_consistent(c))
        throw malformed_configuration_error("configuration is not bulk consistent");
    const int N = static_cast<int>(d.nodes().size());
    std::vector<char> seen(N, 0);
    std::vector<ChordDiagram::chord> chords;
    auto step = [&](SideRef in) -> std::pair<SideRef, bool> {
        SideRef out{in.r, st[c[in.r]].partner[in.s]};
        seen[d.node_of(out)] = 1;
        if (auto o = d.across(out)) return {*o, true};
        return {out, false};
    };
    for (int b = 0; b < d.boundary_count(); ++b) {
        SideRef s = d.boundary()[b].side;
        int node = d.boundary()[b].node;
        if (seen[node] || !st[c[s.r]].uses(s.s)) continue;
        seen[node] = 1;
        for (;;) {
            auto [nx, internal] = step(s);
            if (!internal) {
                chords.emplace_back(b, d.nodes()[d.node_of(nx)].boundary_index);
                break;
            }
            seen[d.node_of(nx)] = 1;
            s = nx;
        }
    }
    int loops = 0;
    for (int r = 0; r < d.size(); ++r)
        for (int k = 0; k < 4; ++k) {
            if (!st[c[r]].uses(k) || seen[d.node_of({r, k})]) continue;
            ++loops;
            SideRef s{r, k};
            const int start = d.node_of(s);
            do {
                seen[d.node_of(s)] = 1;
                s = step(s).first;
            } while (d.node_of(s) != start);
        }
    return {ChordDiagram(d.boundary_count(), chords), loops};
}

} // namespace looplab
