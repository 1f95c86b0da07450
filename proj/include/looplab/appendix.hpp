#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "observable.hpp"

namespace looplab {

// angle slots: 0 = alpha, 1 = beta, 2 = gamma
using Triple = std::array<int, 3>;

/// (function index 1..6, argument order)
struct YBKey {
    int i;
    Triple p;
    friend bool operator==(const YBKey& a, const YBKey& b) { return a.i == b.i && a.p == b.p; }
    friend bool operator<(const YBKey& a, const YBKey& b) { return std::tie(a.i, a.p) < std::tie(b.i, b.p); }
    std::string str() const {
        static const char* nm[3] = {"alpha", "beta", "gamma"};
        return "YB" + std::to_string(i) + "(" + nm[p[0]] + "," + nm[p[1]] + "," + nm[p[2]] + ")";
    }
};

/// Representative under the exact symmetries of the YB functions, with sign:
/// YB2 reverses with a sign, YB5 reverses, YB3 swaps its last two arguments,
/// YB1 swaps its first two, YB6 is fully symmetric.
inline std::pair<YBKey, int> yb_canonical(YBKey k) {
    auto [x, y, z] = k.p;
    Triple rev{z, y, x};
    switch (k.i) {
    case 2:
        if (rev < k.p) return {{2, rev}, -1};
        break;
    case 5:
        if (rev < k.p) return {{5, rev}, 1};
        break;
    case 3:
        if (Triple{x, z, y} < k.p) return {{3, {x, z, y}}, 1};
        break;
    case 1:
        if (Triple{y, x, z} < k.p) return {{1, {y, x, z}}, 1};
        break;
    case 6:
        return {{6, {0, 1, 2}}, 1};
    }
    return {k, 1};
}

inline const std::vector<Triple>& all_permutations() {
    static const std::vector<Triple> p{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    return p;
}

/// the independent YB unknowns, sorted (19 of them)
inline const std::vector<YBKey>& yb_unknowns() {
    static const std::vector<YBKey> u = [] {
        std::vector<YBKey> v;
        for (int i = 1; i <= 6; ++i)
            for (auto& p : all_permutations()) {
                auto k = yb_canonical({i, p}).first;
                if (std::find(v.begin(), v.end(), k) == v.end()) v.push_back(k);
            }
        std::sort(v.begin(), v.end());
        return v;
    }();
    return u;
}

inline int yb_index(const YBKey& k) {
    const auto& u = yb_unknowns();
    return static_cast<int>(std::find(u.begin(), u.end(), k) - u.begin());
}

/// values of the unknowns; w[slot] are the weights of the alpha, beta, gamma rhombi
template <class T> std::vector<T> yb_vector(const std::array<PlaquetteWeights<T>, 3>& w, const T& n) {
    std::vector<T> out;
    for (auto& k : yb_unknowns()) out.push_back(dilute_yb<T>(k.i, w[k.p[0]], w[k.p[1]], w[k.p[2]], n));
    return out;
}

using RowVec = Eigen::RowVectorXcd;

namespace detail {
struct RowTerm {
    std::complex<double> c;
    int i;
    Triple p;
};
inline RowVec make_row(const std::vector<RowTerm>& terms) {
    RowVec r = RowVec::Zero(static_cast<Eigen::Index>(yb_unknowns().size()));
    for (auto& t : terms) {
        auto [k, s] = yb_canonical({t.i, t.p});
        r(yb_index(k)) += t.c * double(s);
    }
    return r;
}

// Rows of the chain for one labelling of the angles: A, B, G are the slots
// playing alpha, beta, gamma.
struct ChainRows {
    RowVec eq[6]; // in display order
    RowVec yb1, yb4, simple1, simple4, simple12, comb14, comb412, final_;
    std::complex<double> prefactor;
};

inline ChainRows chain_rows(const std::array<double, 3>& ang, Triple slot, double n, double sigma) {
    const double P = pi<double>();
    const int A = slot[0], B = slot[1], G = slot[2];
    const double a = ang[A], b = ang[B];
    auto f = [&](double x) { return phi<double>(x, sigma); };
    ChainRows R;
    R.eq[0] = make_row({{f(a), 4, {A, G, B}}, {-n * f(a), 4, {B, G, A}}, {n, 2, {A, B, G}}, {-f(P), 1, {A, G, B}},
                        {f(a + P), 3, {G, A, B}}, {-f(a - 3 * P), 5, {A, G, B}}});
    R.eq[1] = make_row({{f(a - P), 4, {B, G, A}}, {-n * f(a - P), 4, {A, G, B}}, {f(a), 5, {A, G, B}},
                        {-n * f(a), 3, {G, A, B}}, {n, 1, {A, G, B}}, {f(-P), 2, {G, B, A}}});
    R.eq[2] = make_row({{f(-b), 1, {A, G, B}}, {-f(a), 1, {B, G, A}}, {f(P - b), 2, {A, B, G}}, {f(a - P), 2, {G, A, B}}});
    R.eq[3] = make_row({{n * f(P - b), 4, {B, G, A}}, {-f(P - b), 4, {A, G, B}}, {n * f(-b), 3, {G, A, B}},
                        {-f(-b), 5, {A, G, B}}, {-n, 1, {B, G, A}}, {f(P), 2, {B, A, G}}});
    R.eq[4] = make_row({{n * f(-b), 4, {A, G, B}}, {-f(-b), 4, {B, G, A}}, {n, 2, {G, A, B}}, {f(-P), 1, {B, G, A}},
                        {-f(-b - P), 3, {G, A, B}}, {f(3 * P - b), 5, {A, G, B}}});
    R.eq[5] = make_row({{f(a) * (1 - n * n), 6, {A, B, G}}, {n * n, 3, {A, B, G}}, {-n, 5, {B, A, G}},
                        {f(2 * P - b) * n, 5, {A, G, B}}, {-f(2 * P - b), 3, {G, A, B}}, {f(-b - P) * n, 4, {A, G, B}},
                        {-f(-b - P), 4, {B, G, A}}, {f(-P) * n, 4, {B, A, G}}, {-f(-P), 4, {G, A, B}}});
    // YB1 solved from the first equation, written as (lhs - rhs)
    R.yb1 = make_row({{1, 1, {A, G, B}}, {-n * f(-P), 2, {A, B, G}}, {n * f(a - P), 4, {B, G, A}}, {-f(a), 3, {G, A, B}},
                      {-f(a - P), 4, {A, G, B}}, {f(a - 4 * P), 5, {A, G, B}}});
    // YB4 from the second, multiplied through by (n^2 - 1)
    R.yb4 = make_row({{n * n - 1, 4, {B, G, A}}, {-n * n * f(-a), 2, {A, B, G}}, {-f(-a), 2, {G, B, A}},
                      {n * f(-3 * P) - f(P), 5, {A, G, B}}});
    const double n1 = n + 1;
    R.simple1 = make_row({{-f(a - b) - f(a - b - 4 * P) + f(a + b) + f(a + b - 4 * P), 5, {A, G, B}},
                          {-n1 * (f(a - P) - f(a - 2 * b - P)), 2, {B, A, G}},
                          {n1 * (f(P - b) - f(b - P)), 2, {A, B, G}},
                          {n1 * (f(a - b) - f(a + b)), 3, {G, A, B}}});
    R.simple4 = make_row({{f(2 * P - b) - f(-b) - n * f(-b - 2 * P) - n * f(-b) + n * f(b) + n * f(b - 4 * P), 5, {A, G, B}},
                          {n1 * (f(P) - f(P - 2 * b)), 2, {B, A, G}},
                          {n * n1 * (f(-b) - f(b)), 3, {G, A, B}},
                          {n * n1 * (f(-a - b + P) - f(-a + b - P)), 2, {A, B, G}}});
    R.simple12 = make_row({{f(-b) * (f(P) + f(3 * P) - n * f(-3 * P) + n * f(3 * P)) - f(b) * (f(-5 * P) + f(-P)), 5, {A, G, B}},
                           {n * n1 * (f(-2 * b) - 1.0), 2, {B, A, G}},
                           {-n1 * (f(-b - P) - f(b - P)), 3, {G, A, B}},
                           {-n1 * (f(-a - b) - f(-a + b - 2 * P)), 2, {A, B, G}}});
    R.comb14 = make_row({{n1 * (f(P) + n * f(-P)) * (f(-b) - f(b)), 2, {B, A, G}},
                         {-n * f(-4 * P) + n * f(-2 * P) - f(2 * P) + 1.0, 5, {A, G, B}}});
    R.comb412 = make_row({{(n - 1) * n1 * (f(-b) - f(b)), 2, {B, A, G}},
                          {-n * f(-3 * P) + n * f(3 * P) - f(-P) + f(P), 5, {A, G, B}}});
    R.prefactor = n * f(-2 * P) - n * f(2 * P) + f(-4 * P) + f(-2 * P) - f(2 * P) - f(4 * P);
    R.final_ = make_row({{R.prefactor, 5, {A, G, B}}});
    return R;
}
} // namespace detail

inline constexpr std::array<const char*, 6> appendix_row_names{"A1", "A2", "A3", "A4", "A5", "A6"};

/// The six displayed equations (rows over yb_unknowns()); with permute=true,
/// followed by their copies under the other five relabellings of the angles.
inline Eigen::MatrixXcd appendix_system(double alpha, double beta, double n, double sigma, bool permute = false) {
    std::array<double, 3> ang{alpha, beta, 2 * pi<double>() - alpha - beta};
    std::vector<Triple> slots{{0, 1, 2}};
    if (permute)
        for (auto& p : all_permutations())
            if (p != Triple{0, 1, 2}) slots.push_back(p);
    Eigen::MatrixXcd M(static_cast<Eigen::Index>(6 * slots.size()), static_cast<Eigen::Index>(yb_unknowns().size()));
    for (std::size_t s = 0; s < slots.size(); ++s) {
        auto R = detail::chain_rows(ang, slots[s], n, sigma);
        for (int k = 0; k < 6; ++k) M.row(static_cast<Eigen::Index>(6 * s + k)) = R.eq[k];
    }
    return M;
}

/// The 21 dilute external diagrams at the base, in enumeration order.
inline std::vector<ExternalDiagram> dilute_hexagon_externals() { return admissible_externals(Model::dilute, 6, 0); }

/// -(star - triangle)/dz_entry for each of the 21 external diagrams
template <class T>
std::vector<cplx<T>> dilute_hexagon_differences(const RhombicDomain<T>& star, const LoopModel<T>& lm_star,
                                                const RhombicDomain<T>& tri, const LoopModel<T>& lm_tri) {
    std::vector<cplx<T>> out;
    for (auto& e : dilute_hexagon_externals())
        out.push_back(base_normalized(star, lm_star, contour_sum(star, lm_star, e) - contour_sum(tri, lm_tri, e)));
    return out;
}

struct FitResult {
    Eigen::MatrixXcd coef;       // unknowns x 21
    double max_residual = 0;     // over all samples and diagrams
    double max_difference = 0;   // scale of the fitted data
    int rank = 0;                // of the sample matrix
    struct Match {
        int row;                 // appendix row
        int diagram;             // index into dilute_hexagon_externals()
        std::complex<double> scale;
    };
    std::vector<Match> mapping;
};

/// Fit each enumerated difference as a linear combination of YB values, using
/// random off-family weights in [-1, 1]. n and sigma are held fixed.
inline FitResult fit_differences(double alpha, double beta, double n, double sigma, int samples, std::uint64_t seed) {
    const double gamma = 2 * pi<double>() - alpha - beta;
    auto star = make_domain_hexagon(alpha, beta, gamma, Arrangement::star);
    auto tri = make_domain_hexagon(alpha, beta, gamma, Arrangement::triangle);
    const int U = static_cast<int>(yb_unknowns().size());
    Eigen::MatrixXcd Y(samples, U), D(samples, 21);
    splitmix64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        LoopModel<double> lm{Model::dilute, n, sigma, {}};
        for (int r = 0; r < 3; ++r) {
            PlaquetteWeights<double> w;
            for (int l = 0; l < 6; ++l) w[l] = rng.uniform(-1, 1);
            lm.w.push_back(w);
        }
        auto yv = yb_vector<double>({lm.w[0], lm.w[2], lm.w[1]}, n);
        for (int j = 0; j < U; ++j) Y(s, j) = yv[j];
        auto diff = dilute_hexagon_differences(star, lm, tri, lm);
        for (int k = 0; k < 21; ++k) D(s, k) = diff[k];
    }
    FitResult fr;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(Y);
    fr.rank = static_cast<int>(cod.rank());
    fr.coef = cod.solve(D);
    fr.max_residual = (Y * fr.coef - D).cwiseAbs().maxCoeff();
    fr.max_difference = D.cwiseAbs().maxCoeff();
    auto rows = appendix_system(alpha, beta, n, sigma);
    for (int r = 0; r < 6; ++r) {
        RowVec row = rows.row(r);
        for (int k = 0; k < 21; ++k) {
            Eigen::VectorXcd c = fr.coef.col(k);
            if (c.cwiseAbs().maxCoeff() < 1e-9) continue;
            std::complex<double> lam = (row.conjugate() * c)(0) / row.squaredNorm();
            if ((c.transpose() - lam * row).cwiseAbs().maxCoeff() < 1e-8 * std::max(1.0, c.cwiseAbs().maxCoeff()))
                fr.mapping.push_back({r, k, lam});
        }
    }
    return fr;
}

/// relative distance of v from the row space of the given rows
inline double span_residual(const RowVec& v, const std::vector<RowVec>& rows) {
    Eigen::MatrixXcd B(v.size(), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) B.col(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    Eigen::VectorXcd x = B.completeOrthogonalDecomposition().solve(v.transpose());
    return (B * x - v.transpose()).cwiseAbs().maxCoeff() / std::max(1e-300, v.cwiseAbs().maxCoeff());
}

struct ChainStep {
    std::string name;
    double residual;
};

struct ChainReport {
    std::vector<ChainStep> steps; // each intermediate equation is implied by the earlier ones
    std::complex<double> prefactor;
    double sv_ratio = 0;          // smallest / largest singular value of the permuted system
    int rank = 0;
    int unknowns = 0;
    bool trivial_nullspace = false;
    double max_step_residual() const {
        double m = 0;
        for (auto& s : steps) m = std::max(m, s.residual);
        return m;
    }
};

/// Numerical replay of the elimination argument.
inline ChainReport elimination_chain(double alpha, double beta, double n, double sigma) {
    if (std::abs(n * n - 1) < 1e-10) throw degenerate_parameters_error("n^2-1", "degenerate parameters: n^2 - 1 = 0");
    std::array<double, 3> ang{alpha, beta, 2 * pi<double>() - alpha - beta};
    auto R = detail::chain_rows(ang, {0, 1, 2}, n, sigma);
    auto S = detail::chain_rows(ang, {1, 0, 2}, n, sigma); // alpha and beta exchanged
    if (std::abs(R.prefactor) < 1e-10)
        throw degenerate_parameters_error("final prefactor", "degenerate parameters: YB5 prefactor vanishes");
    ChainReport cr;
    cr.prefactor = R.prefactor;
    auto& e = R.eq;
    cr.steps.push_back({"yb1_from_first", span_residual(R.yb1, {e[0]})});
    cr.steps.push_back({"yb4_from_second", span_residual(R.yb4, {e[0], e[1]})});
    cr.steps.push_back({"simple_third", span_residual(R.simple1, {e[0], e[1], e[2], S.eq[0], S.eq[1]})});
    cr.steps.push_back({"simple_fourth", span_residual(R.simple4, {e[0], e[1], e[3], S.eq[0], S.eq[1]})});
    cr.steps.push_back({"simple_fifth", span_residual(R.simple12, {e[0], e[1], e[4], S.eq[0], S.eq[1]})});
    cr.steps.push_back({"eliminate_yb3_a", span_residual(R.comb14, {e[0], e[1], e[2], e[3], S.eq[0], S.eq[1]})});
    cr.steps.push_back({"eliminate_yb3_b", span_residual(R.comb412, {e[0], e[1], e[3], e[4], S.eq[0], S.eq[1]})});
    cr.steps.push_back({"eliminate_yb2", span_residual(R.final_, {e[0], e[1], e[2], e[3], e[4]})});
    auto M = appendix_system(alpha, beta, n, sigma, true);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    auto sv = svd.singularValues();
    cr.unknowns = static_cast<int>(M.cols());
    cr.sv_ratio = sv(sv.size() - 1) / sv(0);
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-8 * sv(0)) ++cr.rank;
    cr.trivial_nullspace = cr.sv_ratio > 1e-8 && cr.rank == cr.unknowns;
    return cr;
}

} // namespace looplab
