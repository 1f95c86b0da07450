#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <set>

#include <looplab/combinatorics.hpp>
#include <looplab/numeric.hpp>

using namespace looplab;

namespace {

// every set of disjoint pairs on m points, crossing or not
void all_pairings(int m, int i, std::vector<int>& mate, std::vector<std::vector<ChordDiagram::chord>>& out) {
    if (i == m) {
        std::vector<ChordDiagram::chord> ch;
        for (int a = 0; a < m; ++a)
            if (mate[a] > a) ch.emplace_back(a, mate[a]);
        out.push_back(ch);
        return;
    }
    if (mate[i] >= 0) return all_pairings(m, i + 1, mate, out);
    mate[i] = -2;
    all_pairings(m, i + 1, mate, out);
    mate[i] = -1;
    for (int j = i + 1; j < m; ++j) {
        if (mate[j] != -1) continue;
        mate[i] = j;
        mate[j] = i;
        all_pairings(m, i + 1, mate, out);
        mate[i] = mate[j] = -1;
    }
}

std::set<std::string> brute_force(int m, bool perfect) {
    std::vector<int> mate(m, -1);
    std::vector<std::vector<ChordDiagram::chord>> raw;
    all_pairings(m, 0, mate, raw);
    std::set<std::string> out;
    for (auto& ch : raw) {
        bool ok = !perfect || static_cast<int>(ch.size()) * 2 == m;
        for (std::size_t i = 0; ok && i < ch.size(); ++i)
            for (std::size_t j = i + 1; ok && j < ch.size(); ++j)
                ok = !ChordDiagram::crossing(ch[i], ch[j]);
        if (ok) out.insert(ChordDiagram(m, ch).encode());
    }
    return out;
}

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
    void join(int a, int b) { p[find(a)] = find(b); }
};

// components of the overlay; a component with every point of degree 2 is a closed loop
int uf_closed_loops(const ChordDiagram& a, const ChordDiagram& b) {
    const int m = a.point_count();
    UnionFind uf(m);
    std::vector<int> deg(m, 0);
    for (auto* d : {&a, &b})
        for (auto [x, y] : d->chords()) {
            uf.join(x, y);
            ++deg[x];
            ++deg[y];
        }
    std::map<int, bool> closed;
    for (int i = 0; i < m; ++i) {
        auto r = uf.find(i);
        if (!closed.count(r)) closed[r] = true;
        if (deg[i] < 2) closed[r] = false;
    }
    int k = 0;
    for (auto& [r, c] : closed) k += c;
    return k;
}

} // namespace

TEST(Combinatorics, PerfectCountsAreCatalan) {
    EXPECT_EQ(enumerate_diagrams(6, true).size(), 5u);
    for (int j = 0; j <= 6; ++j) EXPECT_EQ(enumerate_diagrams(2 * j, true).size(), catalan(j)) << j;
    EXPECT_EQ(catalan(10), 16796u);
}

TEST(Combinatorics, PartialCountsAreMotzkin) {
    const std::uint64_t want[] = {1, 1, 2, 4, 9, 21, 51, 127, 323};
    for (int m = 0; m <= 8; ++m) {
        EXPECT_EQ(motzkin(m), want[m]);
        EXPECT_EQ(enumerate_diagrams(m, false).size(), want[m]) << m;
    }
}

TEST(Combinatorics, EnumerationMatchesBruteForce) {
    for (int m = 1; m <= 8; ++m)
        for (bool perfect : {true, false}) {
            if (perfect && m % 2) continue;
            std::set<std::string> got;
            for (auto& d : enumerate_diagrams(m, perfect)) got.insert(d.encode());
            EXPECT_EQ(got, brute_force(m, perfect)) << m << " " << perfect;
        }
}

TEST(Combinatorics, EnumerationOrderIsStable) {
    auto d = enumerate_diagrams(4, false);
    std::vector<std::string> enc;
    for (auto& x : d) enc.push_back(x.encode());
    ASSERT_EQ(enc.size(), 9u);
    EXPECT_EQ(enc[0], ";u:0,1,2,3");
    EXPECT_EQ(enc[1], "(2-3);u:0,1");
    // point 0 unmatched comes first, then 0 paired with 1, 2, 3 in turn
    EXPECT_EQ(enc[4], "(0-1);u:2,3");
    EXPECT_EQ(enc[8], "(0-3)(1-2)");
}

TEST(Combinatorics, EncodeDecodeRoundTrip) {
    for (int m = 0; m <= 7; ++m)
        for (auto& d : enumerate_diagrams(m, false)) EXPECT_EQ(ChordDiagram::decode(m, d.encode()), d);
    ChordDiagram d(6, {{0, 5}, {1, 2}});
    EXPECT_EQ(d.encode(), "(0-5)(1-2);u:3,4");
    EXPECT_EQ(d.partner(5), 0);
    EXPECT_EQ(d.partner(3), -1);
    EXPECT_FALSE(d.perfect());
}

TEST(Combinatorics, RejectsInvalidDiagrams) {
    EXPECT_THROW(ChordDiagram(4, {{0, 2}, {1, 3}}), std::invalid_argument);
    EXPECT_THROW(ChordDiagram(4, {{0, 1}, {1, 2}}), std::invalid_argument);
    EXPECT_THROW(ChordDiagram(4, {{0, 4}}), std::invalid_argument);
    EXPECT_THROW(ChordDiagram(4, {{2, 2}}), std::invalid_argument);
    EXPECT_THROW(ChordDiagram::decode(4, "(0-2)(1-3)"), std::invalid_argument);
    EXPECT_THROW(enumerate_diagrams(5, true), std::invalid_argument);
}

TEST(Combinatorics, GlueMatchesUnionFind) {
    splitmix64 rng(11);
    for (int m : {4, 6, 8}) {
        auto perf = enumerate_diagrams(m, true);
        auto part = enumerate_diagrams(m, false);
        for (auto& a : perf)
            for (auto& b : perf) EXPECT_EQ(glue(a, b).closed_loops, uf_closed_loops(a, b));
        for (int k = 0; k < 200; ++k) {
            auto& a = part[rng.next() % part.size()];
            auto& b = part[rng.next() % part.size()];
            auto g = glue(a, b);
            EXPECT_EQ(g.closed_loops, uf_closed_loops(a, b));
            // chains are disjoint and every point off the chains has degree 2
            std::vector<int> deg(m, 0), on_chain(m, 0);
            for (auto* d : {&a, &b})
                for (auto [x, y] : d->chords()) ++deg[x], ++deg[y];
            for (auto& c : g.chains)
                for (int x : c) EXPECT_EQ(on_chain[x]++, 0);
            for (int i = 0; i < m; ++i)
                if (!on_chain[i]) EXPECT_EQ(deg[i], 2);
        }
    }
}

TEST(Combinatorics, GlueSelfGivesOneLoopPerChord) {
    for (auto& d : enumerate_diagrams(8, true)) EXPECT_EQ(glue(d, d).closed_loops, 4);
    ChordDiagram a(4, {{0, 1}, {2, 3}}), b(4, {{0, 3}, {1, 2}});
    EXPECT_EQ(glue(a, b).closed_loops, 1);
}
