#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "appendix.hpp"
#include "report.hpp"
#include "zinvariance.hpp"

namespace looplab {

struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// "start:stop:step" (stop kept when hit within 1e-9 of a step), "a,b,c", or a single value.
inline std::vector<double> parse_grid(const std::string& s) {
    auto num = [&](const std::string& t) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            throw usage_error("bad number '" + t + "' in grid '" + s + "'");
        }
        if (used != t.size() || !std::isfinite(v)) throw usage_error("bad number '" + t + "' in grid '" + s + "'");
        return v;
    };
    auto split = [](const std::string& t, char c) {
        std::vector<std::string> out;
        std::size_t p = 0;
        for (;;) {
            auto q = t.find(c, p);
            out.push_back(t.substr(p, q - p));
            if (q == std::string::npos) break;
            p = q + 1;
        }
        return out;
    };
    if (s.empty()) throw usage_error("empty grid");
    if (s.find(':') != std::string::npos) {
        auto f = split(s, ':');
        if (f.size() != 3) throw usage_error("grid '" + s + "' must be start:stop:step");
        double a = num(f[0]), b = num(f[1]), h = num(f[2]);
        if (!(h > 0)) throw usage_error("grid step must be positive");
        if (b < a) throw usage_error("grid stop below start");
        double cnt = std::floor((b - a) / h + 1e-9);
        if (cnt > 1e6) throw usage_error("grid too large");
        std::vector<double> v;
        for (long i = 0; i <= static_cast<long>(cnt); ++i) v.push_back(a + static_cast<double>(i) * h);
        return v;
    }
    std::vector<double> v;
    for (auto& t : split(s, ',')) v.push_back(num(t));
    return v;
}

inline std::vector<int> parse_int_grid(const std::string& s) {
    std::vector<int> out;
    for (double x : parse_grid(s)) {
        if (x != std::floor(x)) throw usage_error("integer grid expected, got '" + s + "'");
        out.push_back(static_cast<int>(x));
    }
    return out;
}

/// "a:1.01" scales weight a; "sigma:0.1" shifts the spin. Repeatable.
inline void parse_perturbation(const std::string& s, Perturbation& p) {
    auto c = s.find(':');
    if (c == std::string::npos) throw usage_error("perturbation must be key:factor");
    std::string key = s.substr(0, c);
    double v = 0;
    try {
        std::size_t used = 0;
        v = std::stod(s.substr(c + 1), &used);
        if (used != s.size() - c - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw usage_error("bad perturbation value in '" + s + "'");
    }
    if (key == "sigma") {
        p.sigma_shift = v;
        return;
    }
    auto it = std::find(label_names.begin(), label_names.end(), key);
    if (it == label_names.end()) throw usage_error("unknown perturbation key '" + key + "'");
    p.factor[static_cast<std::size_t>(it - label_names.begin())] = v;
}

/// Runs fn(i) for i in [0, count) on a pool of threads; results land in slot i.
template <class R> std::vector<R> run_indexed(std::size_t count, int threads, const std::function<R(std::size_t)>& fn) {
    std::vector<R> out(count);
    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errs(count);
    auto work = [&] {
        for (std::size_t i; (i = next++) < count;) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    if (threads == 1)
        work();
    else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

using Inputs = std::vector<std::pair<std::string, double>>;

inline std::complex<double> to_c(const std::complex<double>& z) { return z; }
template <class T> std::complex<double> to_c(const cplx<T>& z) { return {to_double(z.real()), to_double(z.imag())}; }
inline std::complex<double> to_c(double x) { return {x, 0}; }
template <class T, class = std::enable_if_t<!std::is_same_v<T, double>>> std::complex<double> to_c(const T& x) {
    return {to_double(x), 0};
}

inline bool admissible_gamma(double alpha, double beta) {
    double g = 2 * pi<double>() - alpha - beta;
    return g > 1e-9 && g < pi<double>() - 1e-9;
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
    Model model = Model::dense;
    std::vector<double> alpha = parse_grid("0.1:3.0:0.1");
    std::vector<double> beta = parse_grid("0.1:3.0:0.1");
    std::vector<double> hex_beta = parse_grid("1.9,2.3");
    std::vector<double> lambda = parse_grid("0.1:1.5:0.1");
    std::vector<double> eta = parse_grid("0.05:0.75:0.05");
    std::vector<int> ell{0, 1};
    double tol = 1e-10;
    Perturbation pert;
    bool high = false;
    std::uint64_t seed = 1;
    std::uint64_t cap = default_config_cap();
    int threads = 0;
};

namespace detail {

template <class T> void dense_closed_checks(ResidualReport& rep, const Inputs& in, double alpha_d,
                                            const std::vector<double>& betas, double lambda, int ell,
                                            const Perturbation& pert, double tol) {
    const T alpha(alpha_d);
    DenseParams<T> p{T(lambda), ell};
    const T sig = p.sigma() + T(pert.sigma_shift);
    for (auto& r : dense_single_rhombus_residuals<T>(alpha, p, pert)) rep.add("dense.single.closed", in, to_c(r), tol);
    auto w = dense_weights(alpha, p).table();
    pert.apply(w);
    rep.add("dense.det", in, to_c(dense_determinant<T>(alpha, p.n(), sig)), tol);
    rep.add("dense.inv", in, to_c(dense_inversion_residual<T>(alpha, p, pert)), tol);
    try {
        rep.add("dense.criticality", in, to_c(criticality_residual<T>(alpha, p, pert)), tol);
    } catch (const singular_input_error&) {
    }
    // the pair quadratic at beta = -alpha is the ghost pair; it must reduce to the inversion residual
    auto wm = dense_weights(T(-alpha), p).table();
    pert.apply(wm);
    const T P = pi<T>();
    auto ghost = pair_quadratic<T>(alpha, T(-alpha), w, wm, p.n(), sig);
    auto ghost_closed = (phi<T>(P + alpha, sig) - phi<T>(alpha - P, sig)) * p.n() * dense_inversion<T>(w, wm, p.n());
    rep.add("dense.ghost.match", in, to_c(cplx<T>(ghost - ghost_closed)), tol);
    for (double b : betas) {
        Inputs ib = in;
        ib.insert(ib.begin() + 1, {"beta", b});
        const T beta(b);
        auto wb = dense_weights(beta, p).table();
        pert.apply(wb);
        rep.add("holo.pair.quadratic", ib, to_c(pair_quadratic<T>(alpha, beta, w, wb, p.n(), sig)), tol);
        if (!admissible_gamma(alpha_d, b)) continue;
        const T gamma = 2 * pi<T>() - alpha - beta;
        rep.add("dense.yb", ib, to_c(dense_yb_residual<T>(alpha, beta, gamma, p, pert)), tol);
    }
}

template <class T> void dilute_closed_checks(ResidualReport& rep, const Inputs& in, double alpha_d,
                                             const std::vector<double>& betas, double eta, const Perturbation& pert,
                                             double tol) {
    const T alpha(alpha_d);
    DiluteParams<T> p{T(eta), 0};
    for (auto& r : dilute_single_rhombus_residuals<T>(alpha, p, pert)) rep.add("dilute.single.closed", in, to_c(r), tol);
    for (double b : betas) {
        if (!admissible_gamma(alpha_d, b)) continue;
        Inputs ib = in;
        ib.insert(ib.begin() + 1, {"beta", b});
        const T beta(b), gamma = 2 * pi<T>() - alpha - T(b);
        const std::array<T, 3> ang{alpha, beta, gamma};
        std::array<T, 6> worst{};
        for (auto& perm : all_permutations()) {
            auto r = dilute_yb_residuals<T>(ang[perm[0]], ang[perm[1]], ang[perm[2]], p, pert);
            for (int i = 0; i < 6; ++i)
                if (rabs(r[i]) > rabs(worst[i])) worst[i] = r[i];
        }
        for (int i = 0; i < 6; ++i) rep.add("dilute.yb" + std::to_string(i + 1), ib, to_c(worst[i]), tol);
    }
}

inline void dense_point(ResidualReport& rep, const VerifyOptions& o, double alpha, double lambda, int ell) {
    Inputs in{{"alpha", alpha}, {"lambda", lambda}, {"ell", static_cast<double>(ell)}};
    const double tol = o.tol;
    if (o.high)
        dense_closed_checks<high_real>(rep, in, alpha, o.beta, lambda, ell, o.pert, tol);
    else
        dense_closed_checks<double>(rep, in, alpha, o.beta, lambda, ell, o.pert, tol);

    DenseParams<double> p{lambda, ell};
    auto single = make_domain_single(alpha);
    auto lm = dense_model(single, p, o.pert);
    for (int which = 0; which < 2; ++which) {
        auto s = contour_sum(single, lm, dense_single_external(which), o.cap) / single.boundary()[0].dz;
        auto c = dense_single_closed<double>(alpha, lm.w[0][L_a], lm.w[0][L_b], lm.n, lm.sigma)[which];
        rep.add("holo.single.dense", in, s, tol);
        rep.add("holo.single.dense.match", in, s - c, tol);
    }
    for (double b : o.beta) {
        Inputs ib = in;
        ib.insert(ib.begin() + 1, {"beta", b});
        auto pd = make_domain_pair(alpha, b);
        auto lp = dense_model(pd, p, o.pert);
        auto e = two_rhombus_enumerated(pd, lp);
        rep.add("holo.pair.match", ib, e - pair_quadratic<double>(alpha, b, lp.w[0], lp.w[1], lp.n, lp.sigma), tol);
    }
    for (double b : o.hex_beta) {
        if (!(b > 0 && b < pi<double>()) || !admissible_gamma(alpha, b)) continue;
        Inputs ib = in;
        ib.insert(ib.begin() + 1, {"beta", b});
        const double g = 2 * pi<double>() - alpha - b;
        auto star = make_domain_hexagon(alpha, b, g, Arrangement::star);
        auto tri = make_domain_hexagon(alpha, b, g, Arrangement::triangle);
        auto ls = dense_model(star, p, o.pert), lt = dense_model(tri, p, o.pert);
        auto hw = hex_weights(ls);
        auto direct = hexagon_yb_direct(star, ls);
        rep.add("holo.hexV", ib, direct, tol);
        rep.add("holo.hexV.match", ib, direct - hexagon_direct_closed(alpha, b, hw, ls.n, ls.sigma), tol);
        auto diffs = dense_star_triangle_differences(star, ls, tri, lt);
        auto pref = star_triangle_prefactors(alpha, b, ls.n, ls.sigma);
        const double yb = dense_yb(hw.alpha, hw.beta, hw.gamma, ls.n);
        for (int k = 0; k < 5; ++k) {
            std::string key = std::string("holo.stardiff.") + fig_diagram_names[k];
            rep.add(key, ib, diffs[k], tol);
            rep.add(key + ".match", ib, diffs[k] - pref[k] * yb, tol);
        }
        rep.add("zinv.hexagon.partition", ib, z_invariance_residual(star, ls, tri, lt), tol);
        rep.add("zinv.hexagon.psi", ib, boundary_observable_residual(star, ls, tri, lt), tol);
    }
}

inline void dilute_point(ResidualReport& rep, const VerifyOptions& o, double alpha, double eta) {
    Inputs in{{"alpha", alpha}, {"eta", eta}};
    const double tol = o.tol;
    if (o.high)
        dilute_closed_checks<high_real>(rep, in, alpha, o.beta, eta, o.pert, tol);
    else
        dilute_closed_checks<double>(rep, in, alpha, o.beta, eta, o.pert, tol);

    DiluteParams<double> p{eta, 0};
    auto single = make_domain_single(alpha);
    auto lm = dilute_model(single, p, o.pert);
    auto closed = dilute_single_closed<double>(alpha, lm.w[0], lm.n, lm.sigma);
    for (int which = 0; which < 4; ++which) {
        auto s = contour_sum(single, lm, dilute_single_external(which), o.cap) / single.boundary()[0].dz;
        rep.add("holo.single.dilute", in, s, tol);
        rep.add("holo.single.dilute.match", in, s - closed[which], tol);
    }
    int rank = dilute_system_rank(alpha, lm.n, lm.sigma);
    rep.add("dilute.rank", in, static_cast<double>(rank - 5), 0.0);
    for (double b : o.hex_beta) {
        if (!(b > 0 && b < pi<double>()) || !admissible_gamma(alpha, b)) continue;
        Inputs ib = in;
        ib.insert(ib.begin() + 1, {"beta", b});
        const double g = 2 * pi<double>() - alpha - b;
        auto star = make_domain_hexagon(alpha, b, g, Arrangement::star);
        auto tri = make_domain_hexagon(alpha, b, g, Arrangement::triangle);
        auto ls = dilute_model(star, p, o.pert), lt = dilute_model(tri, p, o.pert);
        for (auto& d : dilute_hexagon_differences(star, ls, tri, lt)) rep.add("dilute.hexdiff", ib, d, tol);
        rep.add("zinv.hexagon.partition", ib, z_invariance_residual(star, ls, tri, lt), tol);
    }
}

} // namespace detail

inline ResidualReport run_verify(const VerifyOptions& o) {
    if (o.alpha.empty()) throw usage_error("empty alpha grid");
    for (double a : o.alpha)
        if (!(a > 0 && a < pi<double>())) throw usage_error("alpha values must lie in (0, pi)");
    for (double b : o.beta)
        if (!(b > 0 && b < pi<double>())) throw usage_error("beta values must lie in (0, pi)");
    if (!(o.tol > 0)) throw usage_error("tolerance must be positive");
    struct Point {
        double alpha, x;
        int ell;
    };
    std::vector<Point> pts;
    ResidualReport head;
    if (o.model == Model::dense) {
        if (o.lambda.empty() || o.ell.empty()) throw usage_error("empty lambda or ell grid");
        for (int ell : o.ell)
            for (double l : o.lambda) {
                DenseParams<double> p{l, ell};
                head.add("dense.spin", {{"lambda", l}, {"ell", double(ell)}}, spin_consistency(p), o.tol);
                for (double a : o.alpha) pts.push_back({a, l, ell});
            }
    } else {
        if (o.eta.empty()) throw usage_error("empty eta grid");
        for (int ell : o.ell)
            if (ell != 0) throw usage_error("dilute weights are only defined for ell = 0");
        for (double e : o.eta) {
            DiluteParams<double> p{e, 0};
            head.add("dilute.spin", {{"eta", e}}, spin_consistency(p), o.tol);
            for (double a : o.alpha) pts.push_back({a, e, 0});
        }
    }
    auto parts = run_indexed<ResidualReport>(pts.size(), o.threads, [&](std::size_t i) {
        ResidualReport r;
        if (o.model == Model::dense)
            detail::dense_point(r, o, pts[i].alpha, pts[i].x, pts[i].ell);
        else
            detail::dilute_point(r, o, pts[i].alpha, pts[i].x);
        return r;
    });
    ResidualReport rep;
    rep.set_meta("version", version);
    rep.set_meta("command", "verify");
    rep.set_meta("model", model_name(o.model));
    rep.set_meta("precision", o.high ? "high" : "double");
    rep.set_meta("seed", std::to_string(o.seed));
    rep.merge(head);
    for (auto& p : parts) rep.merge(p);
    return rep;
}

// ---------------------------------------------------------------- zinv

struct ZinvOptions {
    Model model = Model::dense;
    std::string domain = "hexagon"; // builtin name or a JSON file
    double alpha = 2.0, beta = 2.2;
    double lambda = 0.9;
    int ell = 0;
    double eta = 0.55;
    double tol = 1e-10;
    Perturbation pert;
    std::uint64_t cap = default_config_cap();
    std::uint64_t seed = 1;
    std::string dump; // optional configuration dump path
};

struct ZinvResult {
    ResidualReport report;
    std::vector<DiagramComparison<double>> rows;
    int boundary_count = 0;
    int rhombi = 0;
};

inline std::string zinv_csv(const ZinvResult& z) {
    std::string s = "diagram,P_star,P_triangle,abs_diff\n";
    for (auto& r : z.rows)
        s += r.diagram.encode() + "," + ResidualReport::num(r.p1) + "," + ResidualReport::num(r.p2) + "," +
             ResidualReport::num(r.diff()) + "\n";
    return s;
}

/// Builtin domains: "hexagon" (three rhombi around a vertex) and "hexagon4",
/// "hexagon5", "hexagon6" (extra rhombi glued on the outside). The move is at
/// the central vertex.
inline std::pair<RhombicDomain<double>, RhombicDomain<double>> builtin_move(const std::string& name, double alpha,
                                                                           double beta) {
    if (!admissible_gamma(alpha, beta) || !(alpha > 0 && alpha < pi<double>()) || !(beta > 0 && beta < pi<double>()))
        throw usage_error("alpha, beta and 2pi-alpha-beta must lie in (0, pi)");
    const double g = 2 * pi<double>() - alpha - beta;
    auto star = make_domain_hexagon(alpha, beta, g, Arrangement::star);
    auto tri = make_domain_hexagon(alpha, beta, g, Arrangement::triangle);
    int extra = 0;
    if (name == "hexagon4")
        extra = 1;
    else if (name == "hexagon5")
        extra = 2;
    else if (name == "hexagon6")
        extra = 3;
    else if (name != "hexagon")
        throw usage_error("unknown builtin domain '" + name + "'");
    static const double ang[3] = {1.3, 0.8, 2.1};
    std::vector<cplx<double>> mids;
    for (auto& b : star.boundary()) mids.push_back(b.mid);
    for (int k = 0; k < extra; ++k) {
        // glue onto every other side of the hexagon outline
        int b = 0;
        while (std::abs(star.boundary()[b].mid - mids[2 * k]) > geom_tol) ++b;
        star = attach_rhombus(star, b, ang[k]);
        auto rs = tri.rhombi();
        rs.push_back(star.rhombi().back());
        tri = RhombicDomain<double>(std::move(rs));
    }
    return {star, tri};
}

inline void dump_configs(std::ostream& os, const RhombicDomain<double>& d, const LoopModel<double>& lm) {
    const auto& st = local_states(lm.model);
    ConfigEnumerator<double>(d, lm.model).for_each([&](std::uint64_t, const Configuration& c) {
        std::string labels;
        for (auto s : c) labels += std::string(labels.empty() ? "" : " ") + st[s].name;
        auto id = internal_chord_diagram(d, lm.model, c);
        os << labels << "\t" << ResidualReport::num(plaquette_product(lm, c) * int_pow(lm.n, id.interior_loops))
           << "\t" << id.diagram.encode() << "\n";
    });
}

inline ZinvResult run_zinv(const ZinvOptions& o, std::ostream* dump = nullptr) {
    std::optional<RhombicDomain<double>> d1, d2;
    if (o.domain.size() >= 7 && o.domain.compare(0, 7, "hexagon") == 0 && o.domain.find('.') == std::string::npos) {
        auto pr = builtin_move(o.domain, o.alpha, o.beta);
        d1 = pr.first;
        d2 = pr.second;
    } else {
        d1 = load_domain(o.domain);
        auto vs = reshuffleable_vertices(*d1);
        if (vs.empty()) throw embedding_invalid_error("domain has no vertex admitting a star-triangle move");
        d2 = star_triangle_move(*d1, vs.front());
    }
    // fail fast; every later pass enumerates the same two domains
    ConfigEnumerator<double>(*d1, o.model, o.cap);
    ConfigEnumerator<double>(*d2, o.model, o.cap);
    LoopModel<double> l1, l2;
    Inputs in;
    if (o.model == Model::dense) {
        DenseParams<double> p{o.lambda, o.ell};
        l1 = dense_model(*d1, p, o.pert);
        l2 = dense_model(*d2, p, o.pert);
        in = {{"lambda", o.lambda}, {"ell", double(o.ell)}};
    } else {
        if (o.ell != 0) throw usage_error("dilute weights are only defined for ell = 0");
        DiluteParams<double> p{o.eta, 0};
        l1 = dilute_model(*d1, p, o.pert);
        l2 = dilute_model(*d2, p, o.pert);
        in = {{"eta", o.eta}};
    }
    if (dump) dump_configs(*dump, *d1, l1);
    ZinvResult z;
    z.rhombi = d1->size();
    z.boundary_count = d1->boundary_count();
    z.rows = compare_partitions(*d1, l1, *d2, l2);
    auto& rep = z.report;
    rep.set_meta("version", version);
    rep.set_meta("command", "zinv");
    rep.set_meta("model", model_name(o.model));
    rep.set_meta("precision", "double");
    rep.set_meta("seed", std::to_string(o.seed));
    rep.set_meta("domain", o.domain);
    for (auto& r : z.rows) rep.add("zinv.partition", in, r.p1 - r.p2, o.tol);
    rep.add("zinv.psi", in, boundary_observable_residual(*d1, l1, *d2, l2), o.tol);
    double rig = 0;
    for (int e = 0; e < z.boundary_count; ++e)
        for (auto& ext : admissible_externals(o.model, z.boundary_count, e))
            rig = std::max({rig, winding_rigidity_violation(*d1, o.model, ext), winding_rigidity_violation(*d2, o.model, ext)});
    rep.add("zinv.winding_rigidity", in, rig, 1e-9);
    return z;
}

// ---------------------------------------------------------------- appendix

struct AppendixOptions {
    int draws = 100;
    std::uint64_t seed = 7;
    std::optional<double> alpha, beta, eta;
    double tol = 1e-10;
    int threads = 0;
    int fit_samples = 40;
};

struct AppendixResult {
    nlohmann::ordered_json json;
    bool pass = false;
};

inline AppendixResult run_appendix(const AppendixOptions& o) {
    if (o.draws < 1) throw usage_error("draws must be at least 1");
    struct Draw {
        double alpha, beta, eta;
    };
    std::vector<Draw> ds;
    splitmix64 rng(o.seed);
    for (int i = 0; i < o.draws; ++i) {
        Draw d{};
        do {
            d.alpha = o.alpha ? *o.alpha : rng.uniform(0.05, pi<double>() - 0.05);
            d.beta = o.beta ? *o.beta : rng.uniform(0.05, pi<double>() - 0.05);
        } while (!admissible_gamma(d.alpha, d.beta) && !(o.alpha && o.beta));
        d.eta = o.eta ? *o.eta : rng.uniform(0.05, 0.75);
        ds.push_back(d);
    }
    if (o.alpha && o.beta && !admissible_gamma(*o.alpha, *o.beta))
        throw usage_error("alpha, beta and 2pi-alpha-beta must lie in (0, pi)");

    struct Out {
        bool degenerate = false, trivial = false;
        std::string factor;
        ChainReport chain;
        double row_residual = 0;
        double n = 0, sigma = 0;
    };
    auto outs = run_indexed<Out>(ds.size(), o.threads, [&](std::size_t i) {
        Out r;
        const auto& d = ds[i];
        DiluteParams<double> p{d.eta, 0};
        r.n = p.n();
        r.sigma = p.sigma();
        const double g = 2 * pi<double>() - d.alpha - d.beta;
        std::array<PlaquetteWeights<double>, 3> w{dilute_weights(d.alpha, p).table(), dilute_weights(d.beta, p).table(),
                                                  dilute_weights(g, p).table()};
        auto yb = yb_vector<double>(w, r.n);
        Eigen::VectorXcd y(static_cast<Eigen::Index>(yb.size()));
        for (std::size_t k = 0; k < yb.size(); ++k) y(static_cast<Eigen::Index>(k)) = yb[k];
        r.row_residual = (appendix_system(d.alpha, d.beta, r.n, r.sigma, true) * y).cwiseAbs().maxCoeff();
        try {
            r.chain = elimination_chain(d.alpha, d.beta, r.n, r.sigma);
            r.trivial = r.chain.trivial_nullspace;
        } catch (const degenerate_parameters_error& e) {
            r.degenerate = true;
            r.factor = e.factor;
        }
        return r;
    });

    nlohmann::ordered_json j;
    int trivial = 0;
    double max_row = 0, max_step = 0, min_ratio = 1;
    j["draws"] = o.draws;
    nlohmann::ordered_json deg = nlohmann::ordered_json::array(), nontriv = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < outs.size(); ++i) {
        auto& r = outs[i];
        max_row = std::max(max_row, r.row_residual);
        if (r.degenerate) {
            deg.push_back({{"index", i}, {"alpha", ds[i].alpha}, {"beta", ds[i].beta}, {"eta", ds[i].eta}, {"factor", r.factor}});
            continue;
        }
        max_step = std::max(max_step, r.chain.max_step_residual());
        min_ratio = std::min(min_ratio, r.chain.sv_ratio);
        if (r.trivial)
            ++trivial;
        else
            nontriv.push_back({{"index", i}, {"alpha", ds[i].alpha}, {"beta", ds[i].beta}, {"eta", ds[i].eta},
                               {"sv_ratio", r.chain.sv_ratio}, {"rank", r.chain.rank}});
    }
    j["trivial_nullspace"] = trivial;
    j["degenerate"] = deg;
    j["max_row_residual"] = max_row;
    j["nontrivial"] = nontriv;
    j["max_step_residual"] = max_step;
    j["min_sv_ratio"] = min_ratio;
    j["unknowns"] = yb_unknowns().size();
    j["seed"] = o.seed;
    if (o.draws == 1) {
        auto& d = ds[0];
        auto& r = outs[0];
        nlohmann::ordered_json det;
        det["alpha"] = d.alpha;
        det["beta"] = d.beta;
        det["gamma"] = 2 * pi<double>() - d.alpha - d.beta;
        det["eta"] = d.eta;
        det["n"] = r.n;
        det["sigma"] = r.sigma;
        if (!r.degenerate) {
            det["rank"] = r.chain.rank;
            det["sv_ratio"] = r.chain.sv_ratio;
            det["prefactor"] = {r.chain.prefactor.real(), r.chain.prefactor.imag()};
            nlohmann::ordered_json steps = nlohmann::ordered_json::array();
            for (auto& s : r.chain.steps) steps.push_back({{"step", s.name}, {"residual", s.residual}});
            det["steps"] = steps;
        } else {
            det["factor"] = r.factor;
        }
        auto fit = fit_differences(d.alpha, d.beta, r.n, r.sigma, o.fit_samples, o.seed);
        det["fit_rank"] = fit.rank;
        det["fit_max_residual"] = fit.max_residual;
        auto ext = dilute_hexagon_externals();
        nlohmann::ordered_json map = nlohmann::ordered_json::array();
        for (auto& m : fit.mapping)
            map.push_back({{"row", appendix_row_names[m.row]},
                           {"diagram", ext[m.diagram].matching.encode()},
                           {"scale", {m.scale.real(), m.scale.imag()}}});
        det["mapping"] = map;
        j["detail"] = det;
    }
    const int usable = o.draws - static_cast<int>(deg.size());
    AppendixResult res;
    res.pass = usable > 0 && trivial * 100 >= 99 * usable && max_row <= o.tol && max_step <= o.tol;
    j["pass"] = res.pass;
    res.json = std::move(j);
    return res;
}

} // namespace looplab
