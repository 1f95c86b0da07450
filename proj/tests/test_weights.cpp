#include <gtest/gtest.h>

#include <looplab/appendix.hpp>
#include <looplab/weights.hpp>

using namespace looplab;
using C = std::complex<double>;

namespace {

// reference values below were computed with mpmath at 50 digits
PlaquetteWeights<double> pw(double t, double u1, double u2, double v, double a, double b) {
    PlaquetteWeights<double> p;
    p[L_t] = t;
    p[L_u1] = u1;
    p[L_u2] = u2;
    p[L_v] = v;
    p[L_a] = a;
    p[L_b] = b;
    return p;
}
const auto X = pw(0.3, -0.7, 0.45, 0.1, 0.9, -0.25);
const auto Y = pw(-0.5, 0.2, 0.6, -0.35, 0.15, 0.8);
const auto Z = pw(0.75, 0.4, -0.2, 0.55, -0.65, 0.35);

void expect_c(C got, C want, double tol) {
    EXPECT_NEAR(got.real(), want.real(), tol);
    EXPECT_NEAR(got.imag(), want.imag(), tol);
}

} // namespace

TEST(Weights, DenseFrozenValues) {
    auto w0 = dense_weights(0.7, DenseParams<double>{1.1, 0});
    EXPECT_NEAR(w0.a, 0.24265199114167299857, 1e-15);
    EXPECT_NEAR(w0.b, 0.75450620120889953754, 1e-15);
    EXPECT_NEAR(w0.n, 0.90719224285115477554, 1e-15);
    auto w1 = dense_weights(0.7, DenseParams<double>{1.1, 1});
    EXPECT_NEAR(w1.a, 0.439373732027994608, 1e-15);
    EXPECT_NEAR(w1.b, -0.99987367811423298864, 1e-15);
    EXPECT_NEAR((DenseParams<double>{1.1, 0}.sigma()), 0.29971825039566052262, 1e-15);
    EXPECT_NEAR((DenseParams<double>{1.1, 1}.sigma()), 2.2997182503956605226, 1e-15);
}

TEST(Weights, DiluteFrozenValues) {
    auto w = dilute_weights(1.0, DiluteParams<double>{0.5, 0});
    EXPECT_NEAR(w.t, 1.2315398990775664382, 1e-15);
    EXPECT_NEAR(w.u1, 0.38668032896432777499, 1e-15);
    EXPECT_NEAR(w.u2, 0.71813835325478727252, 1e-15);
    EXPECT_NEAR(w.v, 0.3921768103589132227, 1e-15);
    EXPECT_NEAR(w.a, -0.010354688240835920272, 1e-15);
    EXPECT_NEAR(w.b, 0.42592970706962322207, 1e-15);
    EXPECT_NEAR(w.n, 0.832293673094284774, 1e-15);
    EXPECT_NEAR((DiluteParams<double>{0.5, 0}.sigma()), 0.52253517072431399269, 1e-15);
    EXPECT_THROW(dilute_weights(1.0, DiluteParams<double>{0.5, 1}), std::invalid_argument);
}

TEST(Weights, DegenerateAnglesEvaluate) {
    DenseParams<double> p{0.9, 0};
    EXPECT_NEAR(dense_weights(0.0, p).a, 0.0, 1e-15);
    EXPECT_NEAR(dense_weights(pi<double>(), p).b, 0.0, 1e-15);
    EXPECT_NEAR(dilute_weights(0.0, DiluteParams<double>{0.4, 0}).u1, 0.0, 1e-15);
}

TEST(Weights, ClosedFormsWithArbitraryWeights) {
    auto r = dense_single_closed<double>(0.7, 0.3, -0.4, 1.2, 0.37);
    expect_c(r[0], {0.48189275222407905712, 0.49786069585069558988}, 1e-14);
    expect_c(r[1], {-0.14614197375538821835, 0.65199897735262768666}, 1e-14);
    auto d = dilute_single_closed<double>(1.1, pw(0.5, -0.3, 0.2, 0.7, -0.6, 0.4), 0.8, 0.45);
    expect_c(d[0], {-0.23457282082967328354, -0.38415733217616322546}, 1e-14);
    expect_c(d[1], {-0.23337126200864561699, -0.33778354776514752964}, 1e-14);
    expect_c(d[2], {0.3853162754323879588, -0.58338906717251949102}, 1e-14);
    expect_c(d[3], {-0.71993867620739653937, 0.23673557260273960354}, 1e-14);
    for (int i = 0; i < 4; ++i) expect_c(d[4 + i], std::conj(d[i]), 0);
    expect_c(dense_determinant<double>(0.9, 0.5, 0.2), {-0.12485184168273464049, 0.074270303770383563784}, 1e-14);
}

TEST(Weights, YangBaxterPolynomialsFrozen) {
    const double n = 0.731;
    const double want[] = {0.0215795, 0.004, -0.226269, -0.141, 0.16, 0.351455};
    for (int i = 1; i <= 6; ++i) EXPECT_NEAR(dilute_yb(i, X, Y, Z, n), want[i - 1], 1e-15) << i;
    EXPECT_NEAR(dense_yb(X, Y, Z, n), 0.405455, 1e-15);
    EXPECT_THROW(dilute_yb(7, X, Y, Z, n), std::invalid_argument);
}

TEST(Weights, DenseSingleRhombusOnFamily) {
    for (int ell : {0, 1})
        for (double lam = 0.1; lam < 1.55; lam += 0.1)
            for (double a = 0.1; a < 3.05; a += 0.1) {
                DenseParams<double> p{lam, ell};
                for (auto& r : dense_single_rhombus_residuals(a, p)) EXPECT_LT(std::abs(r), 1e-12);
                EXPECT_LT(std::abs(dense_determinant(a, p.n(), p.sigma())), 1e-12);
                EXPECT_LT(std::abs(dense_inversion_residual(a, p)), 1e-12);
                EXPECT_LT(std::abs(criticality_residual(a, p)), 1e-12);
            }
}

TEST(Weights, DenseNegativeControls) {
    DenseParams<double> p{0.9, 0};
    Perturbation pert;
    pert.factor[L_a] = 1.01;
    double worst = 0;
    for (double a = 0.1; a < 3.05; a += 0.1)
        for (auto& r : dense_single_rhombus_residuals(a, p, pert)) worst = std::max(worst, std::abs(r));
    EXPECT_GT(worst, 1e-4);
    // determinant off the spin line
    double det = 0;
    for (double a = 0.1; a < 3.05; a += 0.1) det = std::max(det, std::abs(dense_determinant(a, p.n(), p.sigma() + 0.1)));
    EXPECT_GT(det, 1e-3);
    EXPECT_GT(std::abs(dense_yb_residual(2.0, 2.2, 2 * pi<double>() - 4.2, p, pert)), 1e-4);
}

TEST(Weights, SpinConsistency) {
    for (int ell : {0, 1, 2})
        for (double lam = 0.1; lam < 3.1; lam += 0.1) EXPECT_LT(spin_consistency(DenseParams<double>{lam, ell}), 1e-12);
    for (double eta = 0.05; eta < 0.76; eta += 0.05) {
        DiluteParams<double> p{eta, 0};
        EXPECT_LT(spin_consistency(p), 1e-13);
        EXPECT_LT(std::abs(3 * p.n() - p.n() * p.n() * p.n() - 2 * std::cos(12 * eta)), 1e-13);
    }
}

TEST(Weights, DenseYangBaxterAndInversionGrid) {
    int points = 0;
    for (int ell : {0, 1})
        for (double lam = 0.1; lam < 1.55; lam += 0.2)
            for (double a = 0.1; a < 3.1; a += 0.1)
                for (double b = 0.1; b < 3.1; b += 0.1) {
                    double g = 2 * pi<double>() - a - b;
                    if (g <= 0 || g >= pi<double>()) continue;
                    ++points;
                    EXPECT_LT(std::abs(dense_yb_residual(a, b, g, DenseParams<double>{lam, ell})), 1e-12);
                }
    EXPECT_GT(points, 1000);
    EXPECT_THROW(dense_yb_residual(1.0, 1.0, 1.0, DenseParams<double>{0.5, 0}), std::invalid_argument);
}

TEST(Weights, DiluteOnFamily) {
    for (double eta = 0.05; eta < 0.76; eta += 0.05)
        for (double a = 0.1; a < 3.05; a += 0.1) {
            DiluteParams<double> p{eta, 0};
            for (auto& r : dilute_single_rhombus_residuals(a, p)) EXPECT_LT(std::abs(r), 1e-12);
            EXPECT_EQ(dilute_system_rank(a, p.n(), p.sigma()), 5) << eta << " " << a;
            for (double b = 0.3; b < 3.1; b += 0.4) {
                double g = 2 * pi<double>() - a - b;
                if (g <= 0 || g >= pi<double>()) continue;
                std::array<double, 3> ang{a, b, g};
                for (auto& pm : all_permutations())
                    for (auto r : dilute_yb_residuals(ang[pm[0]], ang[pm[1]], ang[pm[2]], p)) EXPECT_LT(std::abs(r), 1e-12);
            }
        }
}

TEST(Weights, DiluteRankDropsOnlyOnFamily) {
    // off the family the relations force the trivial weights
    DiluteParams<double> p{0.4, 0};
    EXPECT_EQ(dilute_system_rank(1.3, p.n(), p.sigma() + 0.1), 6);
    Perturbation pert;
    pert.factor[L_t] = 1.02;
    double worst = 0;
    for (auto& r : dilute_single_rhombus_residuals(1.3, p, pert)) worst = std::max(worst, std::abs(r));
    EXPECT_GT(worst, 1e-4);
}

TEST(Weights, HighPrecisionResiduals) {
    DenseParams<high_real> p{high_real("1.1"), 1};
    auto r = dense_single_rhombus_residuals<high_real>(high_real("0.7"), p);
    EXPECT_LT(to_double(cabs(r[0])), 1e-40);
    EXPECT_LT(to_double(cabs(r[1])), 1e-40);
    high_real a("2.0"), b("2.2");
    high_real g = 2 * pi<high_real>() - a - b;
    EXPECT_LT(to_double(rabs(dense_yb_residual<high_real>(a, b, g, p))), 1e-40);
    DiluteParams<high_real> q{high_real("0.5"), 0};
    for (auto& z : dilute_single_rhombus_residuals<high_real>(high_real("1.0"), q)) EXPECT_LT(to_double(cabs(z)), 1e-40);
    for (auto& z : dilute_yb_residuals<high_real>(a, b, g, q)) EXPECT_LT(to_double(rabs(z)), 1e-40);
    EXPECT_LT(to_double(spin_consistency(q)), 1e-40);
}
