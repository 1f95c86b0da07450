#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace looplab {

/// Non-crossing (possibly partial) matching of points 0..m-1 on a circle,
/// labelled anticlockwise.
class ChordDiagram {
public:
    using chord = std::pair<int, int>;

    ChordDiagram() = default;
    ChordDiagram(int point_count, std::vector<chord> chords) : m_(point_count) {
        if (point_count < 0) throw std::invalid_argument("negative point count");
        std::vector<char> seen(point_count, 0);
        for (auto [a, b] : chords) {
            if (a == b || a < 0 || b < 0 || a >= point_count || b >= point_count)
                throw std::invalid_argument("bad chord endpoint");
            if (seen[a] || seen[b]) throw std::invalid_argument("chords not disjoint");
            seen[a] = seen[b] = 1;
            chords_.emplace_back(std::min(a, b), std::max(a, b));
        }
        std::sort(chords_.begin(), chords_.end());
        for (int i = 0; i < point_count; ++i)
            if (!seen[i]) unmatched_.push_back(i);
        for (std::size_t i = 0; i < chords_.size(); ++i)
            for (std::size_t j = i + 1; j < chords_.size(); ++j)
                if (crossing(chords_[i], chords_[j])) throw std::invalid_argument("crossing chords");
    }

    int point_count() const { return m_; }
    const std::vector<chord>& chords() const { return chords_; }
    const std::vector<int>& unmatched() const { return unmatched_; }
    bool perfect() const { return unmatched_.empty(); }

    /// partner of point p, or -1 if unmatched
    int partner(int p) const {
        for (auto [a, b] : chords_) {
            if (a == p) return b;
            if (b == p) return a;
        }
        return -1;
    }
    std::vector<int> partners() const {
        std::vector<int> r(m_, -1);
        for (auto [a, b] : chords_) {
            r[a] = b;
            r[b] = a;
        }
        return r;
    }

    // "(0-1)(2-5);u:3,4"
    std::string encode() const {
        std::string s;
        for (auto [a, b] : chords_) s += "(" + std::to_string(a) + "-" + std::to_string(b) + ")";
        if (!unmatched_.empty()) {
            s += ";u:";
            for (std::size_t i = 0; i < unmatched_.size(); ++i) {
                if (i) s += ",";
                s += std::to_string(unmatched_[i]);
            }
        }
        return s;
    }

    static ChordDiagram decode(int m, const std::string& s) {
        std::vector<chord> ch;
        std::size_t i = 0;
        while (i < s.size() && s[i] == '(') {
            std::size_t dash = s.find('-', i), close = s.find(')', i);
            if (dash == std::string::npos || close == std::string::npos || dash > close)
                throw std::invalid_argument("bad diagram encoding: " + s);
            ch.emplace_back(std::stoi(s.substr(i + 1, dash - i - 1)),
                            std::stoi(s.substr(dash + 1, close - dash - 1)));
            i = close + 1;
        }
        ChordDiagram d(m, ch);
        if (i < s.size()) {
            if (s.compare(i, 3, ";u:") != 0) throw std::invalid_argument("bad diagram encoding: " + s);
            std::vector<int> u;
            std::size_t j = i + 3;
            while (j < s.size()) {
                std::size_t k = s.find(',', j);
                if (k == std::string::npos) k = s.size();
                u.push_back(std::stoi(s.substr(j, k - j)));
                j = k + 1;
            }
            if (u != d.unmatched()) throw std::invalid_argument("unmatched list inconsistent: " + s);
        }
        return d;
    }

    static bool crossing(chord x, chord y) {
        auto in = [](int p, chord c) { return c.first < p && p < c.second; };
        return in(y.first, x) != in(y.second, x);
    }

    friend bool operator==(const ChordDiagram& x, const ChordDiagram& y) {
        return x.m_ == y.m_ && x.chords_ == y.chords_;
    }
    friend bool operator<(const ChordDiagram& x, const ChordDiagram& y) {
        return std::tie(x.m_, x.chords_) < std::tie(y.m_, y.chords_);
    }

private:
    int m_ = 0;
    std::vector<chord> chords_;
    std::vector<int> unmatched_;
};

namespace detail {
// first point pairs with k or stays unmatched, increasing k
inline void enumerate_rec(const std::vector<int>& pts, std::size_t lo, std::size_t hi, bool perfect,
                          std::vector<ChordDiagram::chord>& acc,
                          const std::function<void()>& emit_tail) {
    if (lo >= hi) {
        emit_tail();
        return;
    }
    if (!perfect) {
        enumerate_rec(pts, lo + 1, hi, perfect, acc, emit_tail);
    }
    for (std::size_t k = lo + 1; k < hi; ++k) {
        if (perfect && (k - lo) % 2 == 0) continue;
        acc.emplace_back(pts[lo], pts[k]);
        enumerate_rec(pts, lo + 1, k, perfect, acc, [&] {
            enumerate_rec(pts, k + 1, hi, perfect, acc, emit_tail);
        });
        acc.pop_back();
    }
}
} // namespace detail

/// Non-crossing matchings of the given labels (in cyclic order), as chord lists.
inline std::vector<std::vector<ChordDiagram::chord>> enumerate_matchings(const std::vector<int>& pts,
                                                                         bool perfect) {
    if (perfect && pts.size() % 2) throw std::invalid_argument("perfect matching needs an even point count");
    std::vector<std::vector<ChordDiagram::chord>> out;
    std::vector<ChordDiagram::chord> acc;
    detail::enumerate_rec(pts, 0, pts.size(), perfect, acc, [&] { out.push_back(acc); });
    return out;
}

inline std::vector<ChordDiagram> enumerate_diagrams(int m, bool perfect) {
    if (m < 0) throw std::invalid_argument("negative point count");
    if (perfect && m % 2) throw std::invalid_argument("perfect matching needs an even point count");
    std::vector<int> pts(m);
    for (int i = 0; i < m; ++i) pts[i] = i;
    std::vector<ChordDiagram> out;
    for (auto& ch : enumerate_matchings(pts, perfect)) out.emplace_back(m, ch);
    return out;
}

inline std::uint64_t catalan(int j) {
    std::vector<std::uint64_t> c(j + 1, 0);
    c[0] = 1;
    for (int i = 1; i <= j; ++i)
        for (int k = 0; k < i; ++k) c[i] += c[k] * c[i - 1 - k];
    return c[j];
}

// M_m = M_{m-1} + sum_k M_k M_{m-2-k}
inline std::uint64_t motzkin(int m) {
    std::vector<std::uint64_t> M(std::max(m + 1, 1), 0);
    M[0] = 1;
    for (int i = 1; i <= m; ++i) {
        M[i] = M[i - 1];
        for (int k = 0; k + 2 <= i; ++k) M[i] += M[k] * M[i - 2 - k];
    }
    return M[m];
}

struct GlueResult {
    int closed_loops = 0;
    std::vector<std::vector<int>> chains;
};

/// Overlay two diagrams on the same points and trace the union of their chords.
/// Chains start at the smallest free endpoint, run with inner chords first when
/// the start is matched on the inner side.
inline GlueResult glue(const ChordDiagram& inner, const ChordDiagram& outer) {
    if (inner.point_count() != outer.point_count())
        throw std::invalid_argument("glue: point counts differ");
    const int m = inner.point_count();
    auto pin = inner.partners(), pout = outer.partners();
    std::vector<char> used(m, 0);
    GlueResult r;
    for (int s = 0; s < m; ++s) {
        if (used[s]) continue;
        int deg = (pin[s] >= 0) + (pout[s] >= 0);
        if (deg == 2) continue;
        std::vector<int> chain{s};
        used[s] = 1;
        int cur = s;
        bool use_inner = pin[s] >= 0;
        for (;;) {
            int nxt = use_inner ? pin[cur] : pout[cur];
            if (nxt < 0) break;
            chain.push_back(nxt);
            used[nxt] = 1;
            cur = nxt;
            use_inner = !use_inner;
        }
        r.chains.push_back(std::move(chain));
    }
    for (int s = 0; s < m; ++s) {
        if (used[s]) continue;
        ++r.closed_loops;
        int cur = s;
        bool use_inner = true;
        do {
            used[cur] = 1;
            cur = use_inner ? pin[cur] : pout[cur];
            use_inner = !use_inner;
        } while (cur != s);
    }
    return r;
}

} // namespace looplab
