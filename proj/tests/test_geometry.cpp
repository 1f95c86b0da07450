#include <gtest/gtest.h>

#include <looplab/geometry.hpp>

using namespace looplab;
using C = std::complex<double>;

namespace {
const double A = 2.0, B = 2.2, G = 2 * pi<double>() - 4.2;

C dz_sum(const RhombicDomain<double>& d) {
    C s = 0;
    for (auto& b : d.boundary()) s += b.dz;
    return s;
}
} // namespace

TEST(Geometry, SingleRhombus) {
    auto d = make_domain_single(1.1);
    ASSERT_EQ(d.boundary_count(), 4);
    auto& r = d.rhombus(0);
    EXPECT_NEAR(std::abs(r.dz(1) - std::polar(1.0, 1.1)), 0, 1e-15);
    EXPECT_NEAR(r.corner(0), 1.1, 1e-15);
    EXPECT_NEAR(r.corner(1), pi<double>() - 1.1, 1e-15);
    EXPECT_NEAR(r.area(), std::sin(1.1), 1e-15);
    // boundary starts at the lowest midpoint and runs anticlockwise
    for (int k = 0; k < 4; ++k) EXPECT_EQ(d.boundary()[k].side.s, k);
    EXPECT_LT(std::abs(dz_sum(d)), 1e-15);
    EXPECT_THROW(make_domain_single(0.0), std::invalid_argument);
    EXPECT_THROW(make_domain_single(pi<double>()), std::invalid_argument);
}

TEST(Geometry, HexagonBoundaryOrder) {
    auto s = make_domain_hexagon(A, B, G, Arrangement::star);
    auto t = make_domain_hexagon(A, B, G, Arrangement::triangle);
    ASSERT_EQ(s.boundary_count(), 6);
    const std::pair<int, int> want[] = {{2, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 1}, {1, 2}};
    for (int i = 0; i < 6; ++i) {
        EXPECT_EQ(s.boundary()[i].side.r, want[i].first);
        EXPECT_EQ(s.boundary()[i].side.s, want[i].second);
    }
    EXPECT_LT(boundary_distance(s, t), 1e-12);
    EXPECT_LT(std::abs(dz_sum(s)), 1e-14);
    EXPECT_EQ(s.nodes().size(), 9u);
    EXPECT_EQ(s.vertices().size(), 7u);
    EXPECT_EQ(reshuffleable_vertices(s).size(), 1u);
    EXPECT_EQ(reshuffleable_vertices(t).size(), 1u);
    EXPECT_THROW(make_domain_hexagon(1.0, 1.0, 1.0, Arrangement::star), std::invalid_argument);
}

TEST(Geometry, ExteriorTurnsCloseUp) {
    auto s = make_domain_hexagon(A, B, G, Arrangement::star);
    double total = 0;
    for (int i = 0; i < 6; ++i) total += s.tau(i);
    EXPECT_NEAR(total, 2 * pi<double>(), 1e-12);
    // going the short way round and back again cancels
    for (int p = 1; p < 6; ++p)
        for (int q = p + 1; q < 6; ++q) EXPECT_NEAR(s.exterior_turn(p, q, 0) + s.exterior_turn(q, p, 0), 0, 1e-12);
}

TEST(Geometry, StarTriangleMove) {
    auto s = make_domain_hexagon(A, B, G, Arrangement::star);
    auto t = make_domain_hexagon(A, B, G, Arrangement::triangle);
    auto m = star_triangle_move(s, C(0, 0));
    ASSERT_EQ(m.size(), 3);
    for (int r = 0; r < 3; ++r) {
        EXPECT_NEAR(m.rhombus(r).angle, t.rhombus(r).angle, 1e-12);
        for (int k = 0; k < 4; ++k) EXPECT_LT(std::abs(m.rhombus(r).v[k] - t.rhombus(r).v[k]), 1e-12) << r << k;
    }
    auto back = star_triangle_move(m, reshuffleable_vertices(m).front());
    for (int r = 0; r < 3; ++r)
        for (int k = 0; k < 4; ++k) EXPECT_LT(std::abs(back.rhombus(r).v[k] - s.rhombus(r).v[k]), 1e-12);
    EXPECT_THROW(star_triangle_move(s, C(5, 5)), std::invalid_argument);
}

TEST(Geometry, AttachedRhombiKeepInvariants) {
    auto s = make_domain_hexagon(A, B, G, Arrangement::star);
    auto d = attach_rhombus(s, 0, 1.3);
    EXPECT_EQ(d.size(), 4);
    EXPECT_EQ(d.boundary_count(), 8);
    EXPECT_LT(std::abs(dz_sum(d)), 1e-13);
    auto m = star_triangle_move(d, C(0, 0));
    EXPECT_LT(boundary_distance(d, m), 1e-12);
    EXPECT_EQ(reshuffleable_vertices(d).size(), 1u);
}

TEST(Geometry, TrainTracks) {
    auto s = make_domain_hexagon(A, B, G, Arrangement::star);
    auto tr = trace_train_tracks(s);
    ASSERT_EQ(tr.size(), 3u);
    for (auto& t : tr) EXPECT_EQ(t.rhombi.size(), 2u);
    auto one = trace_train_tracks(make_domain_single(0.5));
    EXPECT_EQ(one.size(), 2u);
}

TEST(Geometry, JsonRoundTrip) {
    auto s = attach_rhombus(make_domain_hexagon(A, B, G, Arrangement::star), 2, 0.9);
    auto j = domain_to_json(s);
    auto d = domain_from_json(j);
    ASSERT_EQ(d.size(), s.size());
    for (int r = 0; r < d.size(); ++r) {
        EXPECT_NEAR(d.rhombus(r).angle, s.rhombus(r).angle, 1e-12);
        for (int k = 0; k < 4; ++k) EXPECT_LT(std::abs(d.rhombus(r).v[k] - s.rhombus(r).v[k]), 1e-12);
    }
    EXPECT_EQ(d.adjacency(), s.adjacency());
}

TEST(Geometry, RejectsBadEmbeddings) {
    auto j = domain_to_json(make_domain_hexagon(A, B, G, Arrangement::star));
    // overlapping copy of rhombus 0
    auto k = j;
    k["rhombi"].push_back(j["rhombi"][0]);
    k.erase("adjacency");
    EXPECT_ANY_THROW(domain_from_json(k));
    // not a rhombus
    auto bad = j;
    bad["rhombi"][0]["vertices"][2] = {3.0, 3.0};
    bad.erase("adjacency");
    EXPECT_ANY_THROW(domain_from_json(bad));
    // wrong declared adjacency
    auto adj = j;
    adj["adjacency"].erase(0);
    EXPECT_THROW(domain_from_json(adj), embedding_invalid_error);
    // clockwise vertex order
    auto cw = j;
    auto v = cw["rhombi"][1]["vertices"];
    cw["rhombi"][1]["vertices"] = {v[0], v[3], v[2], v[1]};
    cw.erase("adjacency");
    EXPECT_ANY_THROW(domain_from_json(cw));
    // two rhombi touching only at a corner
    nlohmann::json two;
    two["rhombi"] = {{{"vertices", {{0, 0}, {1, 0}, {1, 1}, {0, 1}}}},
                     {{"vertices", {{1, 1}, {2, 1}, {2, 2}, {1, 2}}}}};
    EXPECT_ANY_THROW(domain_from_json(two));
}
