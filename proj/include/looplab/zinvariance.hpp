#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "observable.hpp"

namespace looplab {

/// internal chord diagram -> sum of plaquette products times n^(interior loops)
template <class T> using DiagramPartition = std::map<ChordDiagram, T>;

template <class T>
DiagramPartition<T> partition_by_diagram(const RhombicDomain<T>& d, const LoopModel<T>& lm,
                                         std::uint64_t cap = default_config_cap()) {
    std::map<ChordDiagram, compensated_sum<T>> acc;
    ConfigEnumerator<T>(d, lm.model, cap).for_each([&](std::uint64_t, const Configuration& c) {
        auto id = internal_chord_diagram(d, lm.model, c);
        acc[id.diagram] += cplx<T>(plaquette_product(lm, c) * int_pow(lm.n, id.interior_loops));
    });
    DiagramPartition<T> out;
    for (auto& [k, v] : acc) out[k] = v.value().real();
    return out;
}

template <class T> void require_same_boundary(const RhombicDomain<T>& a, const RhombicDomain<T>& b) {
    if (boundary_distance(a, b) > T(geom_tol)) throw std::invalid_argument("domains do not share the same boundary");
}

/// one row per diagram occurring in either domain; missing entries count as 0
template <class T> struct DiagramComparison {
    ChordDiagram diagram;
    T p1{}, p2{};
    T diff() const { return rabs(T(p1 - p2)); }
};

template <class T>
std::vector<DiagramComparison<T>> compare_partitions(const RhombicDomain<T>& d1, const LoopModel<T>& lm1,
                                                     const RhombicDomain<T>& d2, const LoopModel<T>& lm2) {
    require_same_boundary(d1, d2);
    auto p1 = partition_by_diagram(d1, lm1), p2 = partition_by_diagram(d2, lm2);
    std::set<ChordDiagram> keys;
    for (auto& [k, v] : p1) keys.insert(k);
    for (auto& [k, v] : p2) keys.insert(k);
    std::vector<DiagramComparison<T>> out;
    for (auto& k : keys) out.push_back({k, p1.count(k) ? p1[k] : T(0), p2.count(k) ? p2[k] : T(0)});
    return out;
}

template <class T>
T z_invariance_residual(const RhombicDomain<T>& d1, const LoopModel<T>& lm1, const RhombicDomain<T>& d2,
                        const LoopModel<T>& lm2) {
    T m(0);
    for (auto& c : compare_partitions(d1, lm1, d2, lm2)) m = std::max(m, c.diff());
    return m;
}

/// psi on the boundary for one entry and external diagram, indexed by boundary point
template <class T>
std::vector<cplx<T>> boundary_observables(const RhombicDomain<T>& d, const LoopModel<T>& lm, const ExternalDiagram& ext) {
    auto ps = psi(d, lm, ext);
    std::vector<cplx<T>> out;
    for (auto& b : d.boundary()) out.push_back(ps[b.node]);
    return out;
}

template <class T>
cplx<T> boundary_observable(const RhombicDomain<T>& d, const LoopModel<T>& lm, int z, const ExternalDiagram& ext) {
    if (z < 0 || z >= d.boundary_count()) throw std::invalid_argument("z is not a boundary midpoint");
    return boundary_observables(d, lm, ext)[z];
}

/// max over (entry, external diagram, z) of |psi_1(z) - psi_2(z)|
template <class T>
T boundary_observable_residual(const RhombicDomain<T>& d1, const LoopModel<T>& lm1, const RhombicDomain<T>& d2,
                               const LoopModel<T>& lm2) {
    require_same_boundary(d1, d2);
    T m(0);
    const int B = d1.boundary_count();
    for (int e = 0; e < B; ++e)
        for (auto& ext : admissible_externals(lm1.model, B, e)) {
            auto a = boundary_observables(d1, lm1, ext), b = boundary_observables(d2, lm2, ext);
            for (int z = 0; z < B; ++z) m = std::max(m, cabs<T>(a[z] - b[z]));
        }
    return m;
}

/// Largest spread of W(entry -> z) among configurations sharing an internal
/// chord diagram. Zero when windings depend only on the diagram.
template <class T> T winding_rigidity_violation(const RhombicDomain<T>& d, Model m, const ExternalDiagram& ext) {
    std::map<std::pair<ChordDiagram, int>, std::pair<T, T>> range;
    ConfigEnumerator<T>(d, m).for_each([&](std::uint64_t, const Configuration& c) {
        auto tr = trace_path(d, m, c, ext);
        if (!tr.valid) return;
        auto id = internal_chord_diagram(d, m, c).diagram;
        for (auto& v : tr.visited) {
            int b = d.nodes()[v.node].boundary_index;
            if (b < 0) continue;
            auto key = std::make_pair(id, b);
            auto it = range.find(key);
            if (it == range.end())
                range[key] = {v.winding, v.winding};
            else
                it->second = {std::min(it->second.first, v.winding), std::max(it->second.second, v.winding)};
        }
    });
    T worst(0);
    for (auto& [k, r] : range) worst = std::max(worst, T(r.second - r.first));
    return worst;
}

} // namespace looplab
