#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "numeric.hpp"

namespace looplab {

enum class Model { dense, dilute };

inline const char* model_name(Model m) { return m == Model::dense ? "dense" : "dilute"; }

/// Plaquette weight labels. Dense uses a and b only.
enum Label : int { L_t = 0, L_u1, L_u2, L_v, L_a, L_b };
inline constexpr std::array<const char*, 6> label_names{"t", "u1", "u2", "v", "a", "b"};

inline int label_from_name(const std::string& s) {
    for (int i = 0; i < 6; ++i)
        if (s == label_names[i]) return i;
    throw std::invalid_argument("unknown weight label '" + s + "'");
}

template <class T> struct PlaquetteWeights {
    std::array<T, 6> w{};
    T& operator[](int i) { return w[i]; }
    const T& operator[](int i) const { return w[i]; }
};

/// multiplicative factors applied to weights, for negative controls
struct Perturbation {
    std::array<double, 6> factor{1, 1, 1, 1, 1, 1};
    double sigma_shift = 0;
    bool trivial() const {
        for (double f : factor)
            if (f != 1) return false;
        return sigma_shift == 0;
    }
    template <class T> void apply(PlaquetteWeights<T>& p) const {
        for (int i = 0; i < 6; ++i) p[i] *= T(factor[i]);
    }
};

template <class T = double> struct DenseParams {
    T lambda{1};
    int ell = 0;
    T n() const {
        using std::cos;
        return 2 * cos(lambda);
    }
    // 1 - sigma = 2 lambda / pi - 2 ell
    T sigma() const { return 1 - 2 * lambda / pi<T>() + 2 * ell; }
};

template <class T = double> struct DiluteParams {
    T eta{0.5};
    int ell = 0;
    T n() const {
        using std::cos;
        return -2 * cos(4 * eta);
    }
    // 1 - sigma = 3 eta / pi + ell / 2
    T sigma() const { return 1 - 3 * eta / pi<T>() - T(ell) / 2; }
};

template <class T = double> struct DenseWeights {
    T alpha{}, a{}, b{}, n{};
    PlaquetteWeights<T> table() const {
        PlaquetteWeights<T> p;
        p[L_a] = a;
        p[L_b] = b;
        return p;
    }
};

template <class T = double> struct DiluteWeights {
    T alpha{}, t{}, u1{}, u2{}, v{}, a{}, b{}, n{};
    PlaquetteWeights<T> table() const {
        PlaquetteWeights<T> p;
        p[L_t] = t;
        p[L_u1] = u1;
        p[L_u2] = u2;
        p[L_v] = v;
        p[L_a] = a;
        p[L_b] = b;
        return p;
    }
};

template <class T> inline cplx<T> phi(const T& theta, const T& sigma) { return cis<T>((1 - sigma) * theta); }

template <class T> DenseWeights<T> dense_weights(const T& alpha, const DenseParams<T>& p) {
    using std::sin;
    T k = p.lambda / pi<T>() - p.ell;
    DenseWeights<T> w;
    w.alpha = alpha;
    w.a = (p.ell % 2 ? T(-1) : T(1)) * sin(k * alpha);
    w.b = sin(k * (pi<T>() - alpha));
    w.n = p.n();
    return w;
}

template <class T> DiluteWeights<T> dilute_weights(const T& alpha, const DiluteParams<T>& p) {
    using std::sin;
    if (p.ell != 0) throw std::invalid_argument("dilute weights are only defined for ell = 0");
    const T eta = p.eta;
    T u = 3 * eta / pi<T>() * alpha;
    T ub = 3 * eta / pi<T>() * (pi<T>() - alpha);
    DiluteWeights<T> w;
    w.alpha = alpha;
    w.t = sin(u) * sin(ub) + sin(2 * eta) * sin(3 * eta);
    w.u1 = sin(u) * sin(2 * eta);
    w.u2 = sin(ub) * sin(2 * eta);
    w.v = sin(u) * sin(ub);
    w.a = sin(u) * sin(u - eta);
    w.b = sin(ub) * sin(ub - eta);
    w.n = p.n();
    return w;
}

// ---- single rhombus relations, in terms of arbitrary weights ----

template <class T>
std::array<cplx<T>, 2> dense_single_closed(const T& alpha, const T& a, const T& b, const T& n, const T& sigma) {
    const T P = pi<T>();
    auto f = [&](const T& x) { return phi<T>(x, sigma); };
    cplx<T> one(1);
    cplx<T> r1 = n * (one - f(alpha - P)) * a + (one - f(alpha - P) + f(-P) - f(alpha)) * b;
    cplx<T> r2 = (one - f(alpha - P) + f(P) - f(alpha)) * a + n * (one - f(alpha)) * b;
    return {r1, r2};
}

template <class T>
std::array<cplx<T>, 2> dense_single_rhombus_residuals(const T& alpha, const DenseParams<T>& p,
                                                      const Perturbation& pert = {}) {
    auto w = dense_weights(alpha, p).table();
    pert.apply(w);
    return dense_single_closed<T>(alpha, w[L_a], w[L_b], p.n(), p.sigma() + T(pert.sigma_shift));
}

/// the four dilute relations followed by their conjugates
template <class T>
std::array<cplx<T>, 8> dilute_single_closed(const T& alpha, const PlaquetteWeights<T>& w, const T& n,
                                            const T& sigma) {
    const T P = pi<T>();
    auto f = [&](const T& x) { return phi<T>(x, sigma); };
    const T &t = w[L_t], &u1 = w[L_u1], &u2 = w[L_u2], &v = w[L_v], &a = w[L_a], &b = w[L_b];
    std::array<cplx<T>, 8> r;
    r[0] = cplx<T>(t) - f(alpha - P) * u1 - f(alpha) * u2 - cplx<T>(v);
    r[1] = f(P) * u1 + cplx<T>(n * u2) + f(alpha - 2 * P) * v - f(alpha) * a - n * f(alpha) * b;
    r[2] = f(alpha + P) * u1 + f(alpha - 2 * P) * u2 + cplx<T>(n * v) - f(2 * P) * a - f(-2 * P) * b;
    r[3] = cplx<T>(n * u1) + f(-P) * u2 + f(alpha + P) * v - n * f(alpha - P) * a - f(alpha - P) * b;
    for (int i = 0; i < 4; ++i) r[4 + i] = std::conj(r[i]);
    return r;
}

template <class T>
std::array<cplx<T>, 8> dilute_single_rhombus_residuals(const T& alpha, const DiluteParams<T>& p,
                                                       const Perturbation& pert = {}) {
    auto w = dilute_weights(alpha, p).table();
    pert.apply(w);
    return dilute_single_closed<T>(alpha, w, p.n(), p.sigma() + T(pert.sigma_shift));
}

// ---- Yang-Baxter and inversion ----

template <class T> void check_normalization(const T& a, const T& b, const T& c) {
    if (rabs(T(a + b + c - 2 * pi<T>())) > T(1e-9))
        throw std::invalid_argument("angles must sum to 2*pi");
}

template <class T>
T dense_yb(const PlaquetteWeights<T>& x, const PlaquetteWeights<T>& y, const PlaquetteWeights<T>& z, const T& n) {
    return x[L_b] * y[L_b] * z[L_a] + x[L_b] * y[L_a] * z[L_b] + x[L_a] * y[L_b] * z[L_b] +
           n * x[L_b] * y[L_b] * z[L_b] - x[L_a] * y[L_a] * z[L_a];
}

template <class T>
T dense_yb_residual(const T& alpha, const T& beta, const T& gamma, const DenseParams<T>& p,
                    const Perturbation& pert = {}) {
    check_normalization(alpha, beta, gamma);
    auto wa = dense_weights(alpha, p).table(), wb = dense_weights(beta, p).table(),
         wc = dense_weights(gamma, p).table();
    pert.apply(wa);
    pert.apply(wb);
    pert.apply(wc);
    return dense_yb<T>(wa, wb, wc, p.n());
}

template <class T>
T dense_inversion(const PlaquetteWeights<T>& x, const PlaquetteWeights<T>& xm, const T& n) {
    return x[L_a] * xm[L_b] + x[L_b] * xm[L_a] + n * x[L_a] * xm[L_a];
}

template <class T> T dense_inversion_residual(const T& alpha, const DenseParams<T>& p, const Perturbation& pert = {}) {
    auto w = dense_weights(alpha, p).table(), wm = dense_weights(T(-alpha), p).table();
    pert.apply(w);
    pert.apply(wm);
    return dense_inversion<T>(w, wm, p.n());
}

/// YB_i(x, y, z) for i = 1..6, with arbitrary weight values
template <class T>
T dilute_yb(int i, const PlaquetteWeights<T>& A, const PlaquetteWeights<T>& B, const PlaquetteWeights<T>& C,
            const T& n) {
    switch (i) {
    case 1:
        return A[L_u2] * B[L_u2] * C[L_a] + n * A[L_u2] * B[L_u2] * C[L_b] + A[L_t] * B[L_t] * C[L_u2] -
               A[L_u1] * B[L_u1] * C[L_t] - A[L_v] * B[L_v] * C[L_u2];
    case 2:
        return A[L_t] * B[L_u1] * C[L_v] + A[L_u2] * B[L_v] * C[L_u1] - C[L_t] * B[L_u1] * A[L_v] -
               A[L_u1] * B[L_v] * C[L_u2];
    case 3:
        return A[L_u2] * B[L_b] * C[L_a] + A[L_u2] * B[L_a] * C[L_b] + n * A[L_u2] * B[L_b] * C[L_b] +
               A[L_t] * B[L_u2] * C[L_u2] - A[L_a] * B[L_u1] * C[L_u1];
    case 4:
        return A[L_v] * B[L_u1] * C[L_b] + A[L_u1] * B[L_v] * C[L_u2] - A[L_a] * B[L_u1] * C[L_v];
    case 5:
        return A[L_u1] * B[L_b] * C[L_u1] + A[L_v] * B[L_u2] * C[L_v] - A[L_a] * B[L_u2] * C[L_a];
    case 6:
        return A[L_b] * B[L_b] * C[L_a] + A[L_b] * B[L_a] * C[L_b] + A[L_a] * B[L_b] * C[L_b] +
               n * A[L_b] * B[L_b] * C[L_b] + A[L_u2] * B[L_u2] * C[L_u2] - A[L_a] * B[L_a] * C[L_a];
    }
    throw std::invalid_argument("YB index must be 1..6");
}

template <class T>
std::array<T, 6> dilute_yb_residuals(const T& alpha, const T& beta, const T& gamma, const DiluteParams<T>& p,
                                     const Perturbation& pert = {}) {
    check_normalization(alpha, beta, gamma);
    auto wa = dilute_weights(alpha, p).table(), wb = dilute_weights(beta, p).table(),
         wc = dilute_weights(gamma, p).table();
    pert.apply(wa);
    pert.apply(wb);
    pert.apply(wc);
    std::array<T, 6> r;
    for (int i = 0; i < 6; ++i) r[i] = dilute_yb<T>(i + 1, wa, wb, wc, p.n());
    return r;
}

template <class T> T criticality_residual(const T& alpha, const DenseParams<T>& p, const Perturbation& pert = {}) {
    auto w = dense_weights(alpha, p).table(), s = dense_weights(T(pi<T>() - alpha), p).table();
    pert.apply(w);
    pert.apply(s);
    T den = s[L_b] * w[L_b];
    if (rabs(den) < T(1e-300)) throw singular_input_error("criticality: b(pi-alpha) b(alpha) = 0");
    return (s[L_a] / s[L_b]) * (w[L_a] / w[L_b]) - 1;
}

template <class T> T spin_consistency(const DenseParams<T>& p) {
    using std::cos;
    T n = p.n();
    return rabs(T(n * n - 2 - 2 * cos((1 - p.sigma()) * pi<T>())));
}

template <class T> T spin_consistency(const DiluteParams<T>& p) {
    using std::cos;
    T n = p.n();
    return rabs(T(3 * n - n * n * n - 2 * cos(4 * (1 - p.sigma()) * pi<T>())));
}

/// determinant of the dense single-rhombus relations as a linear system in (a, b)
template <class T> cplx<T> dense_determinant(const T& alpha, const T& n, const T& sigma) {
    auto r1 = dense_single_closed<T>(alpha, T(1), T(0), n, sigma);
    auto r2 = dense_single_closed<T>(alpha, T(0), T(1), n, sigma);
    return r1[0] * r2[1] - r2[0] * r1[1];
}

inline int numerical_rank(const Eigen::MatrixXd& M, double rel = 1e-8) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0) return 0;
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > rel * s(0)) ++r;
    return r;
}

/// the dilute relations as 8 real equations in (t, u1, u2, v, a, b)
inline Eigen::MatrixXd dilute_real_system(double alpha, double n, double sigma) {
    Eigen::MatrixXd M(8, 6);
    for (int j = 0; j < 6; ++j) {
        PlaquetteWeights<double> e;
        e[j] = 1;
        auto r = dilute_single_closed<double>(alpha, e, n, sigma);
        for (int i = 0; i < 4; ++i) {
            M(2 * i, j) = r[i].real();
            M(2 * i + 1, j) = r[i].imag();
        }
    }
    return M;
}

inline int dilute_system_rank(double alpha, double n, double sigma) {
    return numerical_rank(dilute_real_system(alpha, n, sigma));
}

} // namespace looplab
