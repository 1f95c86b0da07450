#include <gtest/gtest.h>

#include <set>

#include <looplab/appendix.hpp>

using namespace looplab;

namespace {

PlaquetteWeights<double> random_weights(splitmix64& rng) {
    PlaquetteWeights<double> w;
    for (int l = 0; l < 6; ++l) w[l] = rng.uniform(-1, 1);
    return w;
}

} // namespace

TEST(Appendix, SymmetrySubstitutionsHoldForAnyWeights) {
    splitmix64 rng(21);
    for (int k = 0; k < 200; ++k) {
        auto a = random_weights(rng), b = random_weights(rng), c = random_weights(rng);
        double n = rng.uniform(-2, 2);
        EXPECT_NEAR(dilute_yb(2, c, b, a, n), -dilute_yb(2, a, b, c, n), 1e-13);
        EXPECT_NEAR(dilute_yb(2, c, a, b, n), -dilute_yb(2, b, a, c, n), 1e-13);
        EXPECT_NEAR(dilute_yb(5, b, c, a, n), dilute_yb(5, a, c, b, n), 1e-13);
        EXPECT_NEAR(dilute_yb(3, c, b, a, n), dilute_yb(3, c, a, b, n), 1e-13);
        // two further exact symmetries used to shrink the unknown list
        EXPECT_NEAR(dilute_yb(1, b, a, c, n), dilute_yb(1, a, b, c, n), 1e-13);
        EXPECT_NEAR(dilute_yb(6, b, c, a, n), dilute_yb(6, a, b, c, n), 1e-13);
        EXPECT_NEAR(dilute_yb(6, a, c, b, n), dilute_yb(6, a, b, c, n), 1e-13);
    }
}

TEST(Appendix, UnknownList) {
    auto& u = yb_unknowns();
    EXPECT_EQ(u.size(), 19u);
    std::set<std::string> names;
    for (auto& k : u) names.insert(k.str());
    EXPECT_EQ(names.size(), 19u);
    // every (function, permutation) pair folds onto a listed unknown
    for (int f = 1; f <= 6; ++f)
        for (auto& p : all_permutations()) {
            auto [canon, sign] = yb_canonical(YBKey{f, p});
            EXPECT_LT(yb_index(canon), 19);
            EXPECT_TRUE(sign == 1 || sign == -1 || sign == 0);
        }
}

TEST(Appendix, YBVectorMatchesDirectEvaluation) {
    splitmix64 rng(4);
    std::array<PlaquetteWeights<double>, 3> w{random_weights(rng), random_weights(rng), random_weights(rng)};
    const double n = 0.63;
    auto v = yb_vector<double>(w, n);
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto& k = yb_unknowns()[i];
        EXPECT_NEAR(v[i], dilute_yb(k.i, w[k.p[0]], w[k.p[1]], w[k.p[2]], n), 1e-15);
    }
}

TEST(Appendix, RowsVanishOnStandardSolution) {
    splitmix64 rng(8);
    for (int k = 0; k < 20; ++k) {
        double a, b;
        do {
            a = rng.uniform(0.1, 3.0);
            b = rng.uniform(0.1, 3.0);
        } while (2 * pi<double>() - a - b <= 0.05 || 2 * pi<double>() - a - b >= pi<double>() - 0.05);
        DiluteParams<double> p{rng.uniform(0.05, 0.75), 0};
        std::array<PlaquetteWeights<double>, 3> w{dilute_weights(a, p).table(), dilute_weights(b, p).table(),
                                                  dilute_weights(2 * pi<double>() - a - b, p).table()};
        auto yb = yb_vector<double>(w, p.n());
        Eigen::VectorXcd y(yb.size());
        for (std::size_t i = 0; i < yb.size(); ++i) y(i) = yb[i];
        EXPECT_LT((appendix_system(a, b, p.n(), p.sigma(), true) * y).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_EQ(appendix_system(a, b, p.n(), p.sigma()).rows(), 6);
    }
}

TEST(Appendix, HexagonDifferencesOnFamily) {
    const double third = 2 * pi<double>() / 3;
    auto s = make_domain_hexagon(third, third, third, Arrangement::star);
    auto t = make_domain_hexagon(third, third, third, Arrangement::triangle);
    DiluteParams<double> p{0.55, 0};
    auto ls = dilute_model(s, p), lt = dilute_model(t, p);
    auto d = dilute_hexagon_differences(s, ls, t, lt);
    ASSERT_EQ(d.size(), 21u);
    for (auto& z : d) EXPECT_LT(std::abs(z), 1e-10);
    Perturbation pert;
    pert.factor[L_t] = 1.02;
    auto ps = dilute_model(s, p, pert), pt = dilute_model(t, p, pert);
    double worst = 0;
    for (auto& z : dilute_hexagon_differences(s, ps, t, pt)) worst = std::max(worst, std::abs(z));
    EXPECT_GT(worst, 1e-5);
}

TEST(Appendix, FitIdentifiesEveryDisplayedRow) {
    auto fr = fit_differences(2.0, 2.2, 0.731, 0.45, 40, 17);
    EXPECT_EQ(fr.rank, 19);
    EXPECT_LT(fr.max_residual, 1e-9);
    EXPECT_GT(fr.max_difference, 1e-2);
    std::set<int> rows;
    for (auto& m : fr.mapping) rows.insert(m.row);
    EXPECT_EQ(rows.size(), 6u);
    // the rows are exact differences with unit scale
    auto ext = dilute_hexagon_externals();
    const std::pair<int, const char*> want[] = {{0, "(1-3);u:0,2,4,5"}, {1, "(3-4);u:0,1,2,5"},
                                                {2, ";u:0,1,2,3,4,5"},  {3, "(2-3);u:0,1,4,5"},
                                                {4, "(3-5);u:0,1,2,4"}, {5, "(1-2)(3-4);u:0,5"}};
    for (auto& [row, enc] : want) {
        bool found = false;
        for (auto& m : fr.mapping)
            if (m.row == row && ext[m.diagram].matching.encode() == enc) {
                found = true;
                EXPECT_NEAR(std::abs(m.scale - std::complex<double>(1, 0)), 0, 1e-9);
            }
        EXPECT_TRUE(found) << row;
    }
}

TEST(Appendix, EliminationChain) {
    auto cr = elimination_chain(2.0, 2.1, DiluteParams<double>{0.5, 0}.n(), DiluteParams<double>{0.5, 0}.sigma());
    EXPECT_EQ(cr.unknowns, 19);
    EXPECT_EQ(cr.rank, 19);
    EXPECT_TRUE(cr.trivial_nullspace);
    EXPECT_GT(cr.sv_ratio, 1e-8);
    EXPECT_LT(cr.max_step_residual(), 1e-10);
    EXPECT_EQ(cr.steps.size(), 8u);
    EXPECT_GT(std::abs(cr.prefactor), 1e-10);
}

TEST(Appendix, DegenerateParameters) {
    try {
        elimination_chain(2.0, 2.1, 1.0, 0.4);
        FAIL() << "expected a degenerate-parameters error";
    } catch (const degenerate_parameters_error& e) {
        EXPECT_EQ(e.factor, "n^2-1");
    }
    // sigma = 1 kills the final prefactor
    try {
        elimination_chain(2.0, 2.1, 0.5, 1.0);
        FAIL() << "expected a degenerate-parameters error";
    } catch (const degenerate_parameters_error& e) {
        EXPECT_EQ(e.factor, "final prefactor");
    }
}
