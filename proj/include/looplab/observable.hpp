#pragma once

#include <array>
#include <string>
#include <vector>

#include "enumeration.hpp"

namespace looplab {

/// psi at every midpoint node (boundary and internal).
/// Dense: every visited midpoint collects exp(-i sigma W) w. Dilute: only the
/// open end does; with internal=true the dilute sum also covers paths ending
/// in the bulk, which needs the raw (bulk-inconsistent) states.
template <class T>
std::vector<cplx<T>> psi(const RhombicDomain<T>& d, const LoopModel<T>& lm, const ExternalDiagram& ext,
                         bool internal = false, std::uint64_t cap = default_config_cap()) {
    ext.validate(lm.model, d.boundary_count());
    const int N = static_cast<int>(d.nodes().size());
    std::vector<compensated_sum<T>> acc(N);
    const bool raw = internal && lm.model == Model::dilute;
    ConfigEnumerator<T> en(d, lm.model, cap, raw);
    en.for_each([&](std::uint64_t, const Configuration& c) {
        auto tr = trace_path(d, lm.model, c, ext);
        if (!tr.valid) return;
        T w = plaquette_product(lm, c) * int_pow(lm.n, tr.loops);
        if (lm.model == Model::dense) {
            for (auto& v : tr.visited) acc[v.node] += cis<T>(-lm.sigma * v.winding) * w;
        } else {
            auto& v = tr.visited.back();
            if (internal || d.nodes()[v.node].boundary_index >= 0) acc[v.node] += cis<T>(-lm.sigma * v.winding) * w;
        }
    });
    std::vector<cplx<T>> out(N);
    for (int i = 0; i < N; ++i) out[i] = acc[i].value();
    return out;
}

template <class T> cplx<T> contour_sum(const RhombicDomain<T>& d, const std::vector<cplx<T>>& ps) {
    compensated_sum<T> s;
    for (auto& b : d.boundary()) s += ps[b.node] * b.dz;
    return s.value();
}

template <class T>
cplx<T> contour_sum(const RhombicDomain<T>& d, const LoopModel<T>& lm, const ExternalDiagram& ext,
                    std::uint64_t cap = default_config_cap()) {
    return contour_sum(d, psi(d, lm, ext, false, cap));
}

/// sum of psi dz around each rhombus separately
template <class T>
std::vector<cplx<T>> rhombus_contour_sums(const RhombicDomain<T>& d, const LoopModel<T>& lm, const ExternalDiagram& ext) {
    auto ps = psi(d, lm, ext, true);
    std::vector<cplx<T>> out;
    for (int r = 0; r < d.size(); ++r) {
        compensated_sum<T> s;
        for (int k = 0; k < 4; ++k) s += ps[d.node_of({r, k})] * d.rhombus(r).dz(k);
        out.push_back(s.value());
    }
    return out;
}

template <class T> T decomposition_check(const RhombicDomain<T>& d, const LoopModel<T>& lm, const ExternalDiagram& ext) {
    auto ps = psi(d, lm, ext, true);
    compensated_sum<T> parts;
    for (int r = 0; r < d.size(); ++r)
        for (int k = 0; k < 4; ++k) parts += ps[d.node_of({r, k})] * d.rhombus(r).dz(k);
    return cabs<T>(contour_sum(d, ps) - parts.value());
}

/// one term of a contour sum, divided by the entry's dz and the plaquette weights
template <class T> struct ContourTerm {
    Configuration config;
    int boundary_index;
    T winding;
    int loops;
    cplx<T> coefficient;
};

template <class T>
std::vector<ContourTerm<T>> contour_terms(const RhombicDomain<T>& d, const LoopModel<T>& lm, const ExternalDiagram& ext) {
    std::vector<ContourTerm<T>> out;
    const cplx<T> dz_e = d.boundary()[ext.entry].dz;
    ConfigEnumerator<T>(d, lm.model).for_each([&](std::uint64_t, const Configuration& c) {
        auto tr = trace_path(d, lm.model, c, ext);
        if (!tr.valid) return;
        auto emit = [&](const TraceStep<T>& v) {
            int b = d.nodes()[v.node].boundary_index;
            if (b < 0) return;
            cplx<T> coef = cis<T>(-lm.sigma * v.winding) * int_pow(lm.n, tr.loops) * d.boundary()[b].dz / dz_e;
            out.push_back({c, b, v.winding, tr.loops, coef});
        };
        if (lm.model == Model::dense)
            for (auto& v : tr.visited) emit(v);
        else
            emit(tr.visited.back());
    });
    return out;
}

// ---- calibrated external diagrams ----
// Single rhombus: entry at side 0 (boundary index 0).
// Multi-rhombus domains: entry at boundary index 0, the lowest midpoint.

template <class T = double> struct PatternTerm {
    int label;
    cplx<T> coef;
};

/// Dense single rhombus: the two external diagrams.
inline ExternalDiagram dense_single_external(int which) {
    if (which == 0) return {0, ChordDiagram(4, {{0, 1}, {2, 3}})};
    return {0, ChordDiagram(4, {{0, 3}, {1, 2}})};
}

/// Dilute single rhombus, external diagrams for the four relations.
inline ExternalDiagram dilute_single_external(int which) {
    switch (which) {
    case 0:
        return {0, ChordDiagram(4, {})};
    case 1:
        return {0, ChordDiagram(4, {{1, 2}})};
    case 2:
        return {0, ChordDiagram(4, {{1, 3}})};
    default:
        return {0, ChordDiagram(4, {{2, 3}})};
    }
}

/// coefficient pattern of each single-rhombus relation, term by term
template <class T> std::vector<PatternTerm<T>> dense_single_pattern(int which, const T& alpha, const T& n, const T& sigma) {
    const T P = pi<T>();
    auto f = [&](const T& x) { return phi<T>(x, sigma); };
    cplx<T> one(1);
    if (which == 0)
        return {{L_a, n * one}, {L_a, -n * f(alpha - P)}, {L_b, one}, {L_b, -f(alpha - P)}, {L_b, f(-P)}, {L_b, -f(alpha)}};
    return {{L_a, one}, {L_a, -f(alpha - P)}, {L_a, f(P)}, {L_a, -f(alpha)}, {L_b, n * one}, {L_b, -n * f(alpha)}};
}

template <class T> std::vector<PatternTerm<T>> dilute_single_pattern(int which, const T& alpha, const T& n, const T& sigma) {
    const T P = pi<T>();
    auto f = [&](const T& x) { return phi<T>(x, sigma); };
    cplx<T> one(1);
    switch (which) {
    case 0:
        return {{L_t, one}, {L_u1, -f(alpha - P)}, {L_u2, -f(alpha)}, {L_v, -one}};
    case 1:
        return {{L_u1, f(P)}, {L_u2, n * one}, {L_v, f(alpha - 2 * P)}, {L_a, -f(alpha)}, {L_b, -n * f(alpha)}};
    case 2:
        return {{L_u1, f(alpha + P)}, {L_u2, f(alpha - 2 * P)}, {L_v, n * one}, {L_a, -f(2 * P)}, {L_b, -f(-2 * P)}};
    default:
        return {{L_u1, n * one}, {L_u2, f(-P)}, {L_v, f(alpha + P)}, {L_a, -n * f(alpha - P)}, {L_b, -f(alpha - P)}};
    }
}

/// The five perfect chord diagrams of six points, entry at point 0.
inline ChordDiagram fig_diagram(int k) {
    static const std::array<std::vector<ChordDiagram::chord>, 5> ch{{
        {{0, 1}, {2, 3}, {4, 5}},
        {{0, 5}, {1, 4}, {2, 3}},
        {{0, 1}, {2, 5}, {3, 4}},
        {{0, 5}, {1, 2}, {3, 4}},
        {{0, 3}, {1, 2}, {4, 5}},
    }};
    return ChordDiagram(6, ch.at(k));
}
inline constexpr std::array<const char*, 5> fig_diagram_names{"I", "II", "III", "IV", "V"};

/// Group constant for entry at the base of a pair or hexagon: the closed forms
/// equal kappa * (contour sum) / dz_entry, kappa = -n (dense) or -1 (dilute).
template <class T> cplx<T> base_normalized(const RhombicDomain<T>& d, const LoopModel<T>& lm, const cplx<T>& sum) {
    T kappa = lm.model == Model::dense ? T(-lm.n) : T(-1);
    return kappa * sum / d.boundary()[0].dz;
}

// ---- two rhombi ----

template <class T>
cplx<T> pair_quadratic(const T& alpha, const T& beta, const PlaquetteWeights<T>& wa, const PlaquetteWeights<T>& wb,
                       const T& n, const T& sigma) {
    const T P = pi<T>();
    auto f = [&](const T& x) { return phi<T>(x, sigma); };
    const T aa = wa[L_a], ba = wa[L_b], ab = wb[L_a], bb = wb[L_b];
    return (f(P - beta) - f(alpha - P)) * (n * n * aa * ab) + (f(-beta) - f(alpha)) * (n * n * ba * bb) +
           (f(P - beta) + f(-beta) - f(alpha) - f(alpha - P)) * (n * aa * bb + n * ba * ab);
}

/// closed form with the family weights; alpha, beta any reals
template <class T> cplx<T> two_rhombus_residual(const T& alpha, const T& beta, const DenseParams<T>& p) {
    return pair_quadratic<T>(alpha, beta, dense_weights(alpha, p).table(), dense_weights(beta, p).table(), p.n(),
                             p.sigma());
}

/// the quadratic form at beta = -alpha, rewritten through the inversion residual
template <class T> cplx<T> ghost_pair_closed(const T& alpha, const DenseParams<T>& p) {
    const T P = pi<T>();
    return (phi<T>(P + alpha, p.sigma()) - phi<T>(alpha - P, p.sigma())) * p.n() * dense_inversion_residual(alpha, p);
}

/// enumerated pair contour sum with diagram V, normalized to the quadratic form
template <class T> cplx<T> two_rhombus_enumerated(const RhombicDomain<T>& pair, const LoopModel<T>& lm) {
    ExternalDiagram v{0, fig_diagram(4)};
    return base_normalized(pair, lm, contour_sum(pair, lm, v));
}

// ---- hexagon ----

template <class T> struct HexWeights {
    PlaquetteWeights<T> alpha, beta, gamma;
};

// rhombus ids 0, 1, 2 carry alpha, gamma, beta
template <class T> HexWeights<T> hex_weights(const LoopModel<T>& lm) { return {lm.w[0], lm.w[2], lm.w[1]}; }

template <class T> cplx<T> hexagon_direct_closed(const T& alpha, const T& beta, const HexWeights<T>& w, const T& n, const T& sigma) {
    return (phi<T>(-beta, sigma) - phi<T>(alpha, sigma)) * n * n * dense_yb<T>(w.alpha, w.beta, w.gamma, n);
}

template <class T> cplx<T> hexagon_yb_direct(const RhombicDomain<T>& star, const LoopModel<T>& lm) {
    return base_normalized(star, lm, contour_sum(star, lm, ExternalDiagram{0, fig_diagram(4)}));
}

/// printed prefactors of the five star-triangle differences, diagrams I..V
template <class T> std::array<cplx<T>, 5> star_triangle_prefactors(const T& alpha, const T& beta, const T& n, const T& sigma) {
    const T P = pi<T>();
    auto f = [&](const T& x) { return phi<T>(x, sigma); };
    cplx<T> one(1);
    const T n2 = n * n, n3 = n2 * n;
    return {n * f(alpha - 2 * P) - n * f(alpha) + n3 * f(-beta) - n3 * one,
            n2 * (f(-beta) - f(2 * P - beta)),
            n2 * (f(alpha - 2 * P) - f(alpha)),
            n3 * one - n * f(2 * P - beta) + n * f(-beta) - n3 * f(alpha),
            T(2) * n2 * (f(-beta) - f(alpha))};
}

/// normalized (star - triangle) contour-sum differences for diagrams I..V
template <class T>
std::array<cplx<T>, 5> dense_star_triangle_differences(const RhombicDomain<T>& star, const LoopModel<T>& lm_star,
                                                       const RhombicDomain<T>& tri, const LoopModel<T>& lm_tri) {
    std::array<cplx<T>, 5> out;
    for (int k = 0; k < 5; ++k) {
        ExternalDiagram e{0, fig_diagram(k)};
        out[k] = base_normalized(star, lm_star, contour_sum(star, lm_star, e) - contour_sum(tri, lm_tri, e));
    }
    return out;
}

} // namespace looplab
