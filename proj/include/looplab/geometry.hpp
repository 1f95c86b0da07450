#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "numeric.hpp"

namespace looplab {

inline constexpr double geom_tol = 1e-9;

/// Unit rhombus. v[0] is the tagged corner, vertices anticlockwise.
/// Side k runs v[k] -> v[k+1].
template <class T = double> struct Rhombus {
    int id = 0;
    T angle{};
    std::array<cplx<T>, 4> v{};

    static Rhombus make(int id, cplx<T> v0, cplx<T> e1, T angle) {
        Rhombus r;
        r.id = id;
        r.angle = angle;
        cplx<T> e2 = e1 * cis<T>(angle);
        r.v = {v0, v0 + e1, v0 + e1 + e2, v0 + e2};
        return r;
    }

    T corner(int k) const { return (k % 2 == 0) ? angle : T(pi<T>() - angle); }
    cplx<T> mid(int k) const { return (v[k] + v[(k + 1) % 4]) / T(2); }
    cplx<T> dz(int k) const { return v[(k + 1) % 4] - v[k]; }
    T area() const {
        using std::sin;
        return sin(angle);
    }

    void validate() const {
        if (!(angle > T(0) && angle < pi<T>())) throw std::invalid_argument("rhombus angle outside (0, pi)");
        for (int k = 0; k < 4; ++k)
            if (rabs(T(cabs(dz(k)) - 1)) > T(geom_tol)) throw std::invalid_argument("rhombus side is not unit length");
        if (cabs<T>(dz(0) + dz(2)) > T(geom_tol) || cabs<T>(dz(1) + dz(3)) > T(geom_tol))
            throw std::invalid_argument("rhombus opposite sides not parallel");
        cplx<T> e1 = dz(0), e2 = v[3] - v[0];
        using std::atan2;
        cplx<T> q = e2 * std::conj(e1);
        T ang = atan2(q.imag(), q.real());
        if (rabs(T(ang - angle)) > T(geom_tol)) throw std::invalid_argument("tagged corner angle mismatch");
    }
};

struct SideRef {
    int r = -1, s = -1;
    friend bool operator==(SideRef a, SideRef b) { return a.r == b.r && a.s == b.s; }
    friend bool operator<(SideRef a, SideRef b) { return std::tie(a.r, a.s) < std::tie(b.r, b.s); }
};

/// Midpoint of one side, shared by one or two rhombi.
template <class T> struct MidNode {
    cplx<T> z;
    std::vector<SideRef> sides;
    int boundary_index = -1;
};

template <class T> struct BoundarySide {
    SideRef side;
    int node = -1;
    cplx<T> mid, dz;
};

template <class T = double> class RhombicDomain {
public:
    RhombicDomain() = default;
    explicit RhombicDomain(std::vector<Rhombus<T>> rh) : rhombi_(std::move(rh)) { build(); }

    const std::vector<Rhombus<T>>& rhombi() const { return rhombi_; }
    const Rhombus<T>& rhombus(int r) const { return rhombi_.at(r); }
    int size() const { return static_cast<int>(rhombi_.size()); }

    const std::vector<MidNode<T>>& nodes() const { return nodes_; }
    int node_of(SideRef s) const { return node_of_[s.r][s.s]; }
    /// neighbouring side across a shared midpoint
    std::optional<SideRef> across(SideRef s) const {
        const auto& nd = nodes_[node_of(s)];
        if (nd.sides.size() < 2) return std::nullopt;
        return nd.sides[0] == s ? nd.sides[1] : nd.sides[0];
    }

    const std::vector<BoundarySide<T>>& boundary() const { return boundary_; }
    int boundary_count() const { return static_cast<int>(boundary_.size()); }
    const std::vector<cplx<T>>& vertices() const { return verts_; }
    /// boundary polygon, starting at the start vertex of boundary side 0
    std::vector<cplx<T>> boundary_polygon() const {
        std::vector<cplx<T>> p;
        for (auto& b : boundary_) p.push_back(rhombi_[b.side.r].v[b.side.s]);
        return p;
    }

    /// anticlockwise turn from boundary side i to side i+1
    T tau(int i) const { return tau_[i]; }

    /// turning of an exterior chord leaving at p and re-entering at q, with entry e;
    /// the chord runs around the boundary arc that does not contain e
    T exterior_turn(int p, int q, int e) const {
        const int m = boundary_count();
        auto pos = [&](int x) { return ((x - e) % m + m) % m; };
        T s(0);
        if (pos(p) < pos(q)) {
            for (int i = p; i != q; i = (i + 1) % m) s += tau_[i];
            return pi<T>() + s;
        }
        for (int i = q; i != p; i = (i + 1) % m) s += tau_[i];
        return -(pi<T>() + s);
    }

    std::vector<std::pair<SideRef, SideRef>> adjacency() const {
        std::vector<std::pair<SideRef, SideRef>> a;
        for (auto& nd : nodes_)
            if (nd.sides.size() == 2) a.emplace_back(std::min(nd.sides[0], nd.sides[1]), std::max(nd.sides[0], nd.sides[1]));
        std::sort(a.begin(), a.end());
        return a;
    }

private:
    int vertex_id(const cplx<T>& z) {
        for (std::size_t i = 0; i < verts_.size(); ++i)
            if (cabs<T>(verts_[i] - z) < T(geom_tol)) return static_cast<int>(i);
        verts_.push_back(z);
        return static_cast<int>(verts_.size()) - 1;
    }

    void build() {
        if (rhombi_.empty()) throw std::invalid_argument("empty domain");
        for (auto& r : rhombi_) r.validate();
        const int F = size();
        node_of_.assign(F, {-1, -1, -1, -1});
        std::vector<std::array<int, 4>> vid(F);
        for (int r = 0; r < F; ++r)
            for (int k = 0; k < 4; ++k) vid[r][k] = vertex_id(rhombi_[r].v[k]);
        for (int r = 0; r < F; ++r)
            for (int k = 0; k < 4; ++k) {
                cplx<T> z = rhombi_[r].mid(k);
                int found = -1;
                for (std::size_t i = 0; i < nodes_.size(); ++i)
                    if (cabs<T>(nodes_[i].z - z) < T(geom_tol)) found = static_cast<int>(i);
                if (found < 0) {
                    nodes_.push_back({z, {}, -1});
                    found = static_cast<int>(nodes_.size()) - 1;
                }
                nodes_[found].sides.push_back({r, k});
                node_of_[r][k] = found;
            }
        for (auto& nd : nodes_) {
            if (nd.sides.size() > 2) throw embedding_invalid_error("more than two rhombi share a side");
            if (nd.sides.size() == 2) {
                auto [r1, s1] = nd.sides[0];
                auto [r2, s2] = nd.sides[1];
                if (r1 == r2) throw embedding_invalid_error("rhombus glued to itself");
                // shared sides coincide with opposite orientation
                if (vid[r1][s1] != vid[r2][(s2 + 1) % 4] || vid[r1][(s1 + 1) % 4] != vid[r2][s2])
                    throw embedding_invalid_error("overlapping or misaligned rhombi");
            }
        }
        // boundary, anticlockwise, starting at the lowest (then leftmost) midpoint
        std::vector<SideRef> bs;
        for (auto& nd : nodes_)
            if (nd.sides.size() == 1) bs.push_back(nd.sides[0]);
        auto less_yx = [&](SideRef a, SideRef b) {
            cplx<T> za = rhombi_[a.r].mid(a.s), zb = rhombi_[b.r].mid(b.s);
            if (rabs(T(za.imag() - zb.imag())) > T(geom_tol)) return za.imag() < zb.imag();
            return za.real() < zb.real();
        };
        SideRef start = *std::min_element(bs.begin(), bs.end(), less_yx);
        std::map<int, SideRef> by_start;
        for (auto s : bs) {
            int v0 = vid[s.r][s.s];
            if (by_start.count(v0)) throw embedding_invalid_error("boundary pinches at a vertex");
            by_start[v0] = s;
        }
        std::vector<SideRef> order{start};
        for (;;) {
            SideRef cur = order.back();
            int v1 = vid[cur.r][(cur.s + 1) % 4];
            auto it = by_start.find(v1);
            if (it == by_start.end()) throw embedding_invalid_error("open boundary");
            if (it->second == start) break;
            order.push_back(it->second);
            if (order.size() > bs.size()) throw embedding_invalid_error("boundary does not close");
        }
        if (order.size() != bs.size()) throw embedding_invalid_error("domain is not simply connected");
        for (std::size_t i = 0; i < order.size(); ++i) {
            auto s = order[i];
            int nd = node_of_[s.r][s.s];
            nodes_[nd].boundary_index = static_cast<int>(i);
            boundary_.push_back({s, nd, rhombi_[s.r].mid(s.s), rhombi_[s.r].dz(s.s)});
        }
        const int m = boundary_count();
        using std::atan2;
        for (int i = 0; i < m; ++i) {
            cplx<T> q = boundary_[(i + 1) % m].dz * std::conj(boundary_[i].dz);
            tau_.push_back(atan2(q.imag(), q.real()));
        }
        cplx<T> sum(0);
        for (auto& b : boundary_) sum += b.dz;
        if (cabs(sum) > T(geom_tol)) throw embedding_invalid_error("boundary does not close");
        // disk: V - E + F = 1; no overlaps: polygon area equals total rhombus area
        const int V = static_cast<int>(verts_.size()), E = static_cast<int>(nodes_.size());
        if (V - E + F != 1) throw embedding_invalid_error("Euler characteristic of a disk violated");
        T area(0), rhombus_area(0);
        auto poly = boundary_polygon();
        for (std::size_t i = 0; i < poly.size(); ++i) {
            auto a = poly[i], b = poly[(i + 1) % poly.size()];
            area += (a.real() * b.imag() - b.real() * a.imag()) / 2;
        }
        for (auto& r : rhombi_) rhombus_area += r.area();
        if (rabs(T(area - rhombus_area)) > T(1e-7)) throw embedding_invalid_error("rhombi overlap");
    }

    std::vector<Rhombus<T>> rhombi_;
    std::vector<cplx<T>> verts_;
    std::vector<MidNode<T>> nodes_;
    std::vector<std::array<int, 4>> node_of_;
    std::vector<BoundarySide<T>> boundary_;
    std::vector<T> tau_;
};

// ---- constructors ----

template <class T> void check_open_angle(const T& a, const char* name) {
    if (!(a > T(0) && a < pi<T>())) throw std::invalid_argument(std::string(name) + " must lie in (0, pi)");
}

template <class T> RhombicDomain<T> make_domain_single(const T& alpha) {
    check_open_angle(alpha, "alpha");
    return RhombicDomain<T>({Rhombus<T>::make(0, {0, 0}, {1, 0}, alpha)});
}

enum class Arrangement { star, triangle };

namespace detail {
// rhombi around a centre, anticlockwise with angles x, y, z; tags at the centre
template <class T> std::vector<Rhombus<T>> three_around(const T& x, const T& y, const T& z, bool triangle) {
    cplx<T> d1(1, 0), d2 = d1 * cis<T>(x), d3 = d2 * cis<T>(y);
    if (!triangle)
        return {Rhombus<T>::make(0, {0, 0}, d1, x), Rhombus<T>::make(1, {0, 0}, d2, y),
                Rhombus<T>::make(2, {0, 0}, d3, z)};
    cplx<T> c = d1 + d2 + d3;
    return {Rhombus<T>::make(0, c, -d1, x), Rhombus<T>::make(1, c, -d2, y), Rhombus<T>::make(2, c, -d3, z)};
}
} // namespace detail

/// Hexagon tiled by three rhombi with opening angles alpha, beta, gamma.
/// Rhombus 0 has angle alpha, rhombus 1 gamma, rhombus 2 beta; going
/// anticlockwise around the centre they appear as alpha, gamma, beta.
template <class T>
RhombicDomain<T> make_domain_hexagon(const T& alpha, const T& beta, const T& gamma, Arrangement arr) {
    check_open_angle(alpha, "alpha");
    check_open_angle(beta, "beta");
    check_open_angle(gamma, "gamma");
    if (rabs(T(alpha + beta + gamma - 2 * pi<T>())) > T(1e-9)) throw std::invalid_argument("angles must sum to 2*pi");
    return RhombicDomain<T>(detail::three_around(alpha, gamma, beta, arr == Arrangement::triangle));
}

/// The alpha and beta rhombi of the star hexagon, sharing one side.
template <class T> RhombicDomain<T> make_domain_pair(const T& alpha, const T& beta) {
    check_open_angle(alpha, "alpha");
    check_open_angle(beta, "beta");
    cplx<T> d3 = cis<T>(-beta);
    return RhombicDomain<T>({Rhombus<T>::make(0, {0, 0}, {1, 0}, alpha), Rhombus<T>::make(1, {0, 0}, d3, beta)});
}

/// Glue a new rhombus onto the outside of boundary side b. Its tag sits at the
/// end vertex of that side.
template <class T> RhombicDomain<T> attach_rhombus(const RhombicDomain<T>& d, int b, const T& angle) {
    check_open_angle(angle, "angle");
    if (b < 0 || b >= d.boundary_count()) throw std::invalid_argument("boundary index out of range");
    auto side = d.boundary()[b].side;
    const auto& rh = d.rhombus(side.r);
    cplx<T> p = rh.v[side.s], q = rh.v[(side.s + 1) % 4];
    auto rs = d.rhombi();
    rs.push_back(Rhombus<T>::make(d.size(), q, p - q, angle));
    return RhombicDomain<T>(std::move(rs));
}

/// Rhombus from four anticlockwise vertices with the tag at index `tag`.
template <class T> Rhombus<T> rhombus_from_vertices(int id, std::array<cplx<T>, 4> v, int tag) {
    Rhombus<T> r;
    r.id = id;
    for (int k = 0; k < 4; ++k) r.v[k] = v[(k + tag) % 4];
    cplx<T> q = (r.v[3] - r.v[0]) * std::conj(r.v[1] - r.v[0]);
    using std::atan2;
    r.angle = atan2(q.imag(), q.real());
    r.validate();
    return r;
}

/// interior vertices where exactly three rhombi meet
template <class T> std::vector<int> reshuffleable_vertices(const RhombicDomain<T>& d) {
    std::vector<int> out;
    const auto& V = d.vertices();
    std::set<int> on_boundary;
    for (auto& b : d.boundary()) {
        auto& rh = d.rhombus(b.side.r);
        for (int k : {b.side.s, (b.side.s + 1) % 4})
            for (std::size_t i = 0; i < V.size(); ++i)
                if (cabs<T>(V[i] - rh.v[k]) < T(geom_tol)) on_boundary.insert(static_cast<int>(i));
    }
    for (std::size_t i = 0; i < V.size(); ++i) {
        if (on_boundary.count(static_cast<int>(i))) continue;
        int deg = 0;
        for (auto& rh : d.rhombi())
            for (int k = 0; k < 4; ++k)
                if (cabs<T>(rh.v[k] - V[i]) < T(geom_tol)) ++deg;
        if (deg == 3) out.push_back(static_cast<int>(i));
    }
    return out;
}

/// Retile the hexagon around interior vertex `vertex` in the other arrangement.
/// Rhombus ids, list positions, angles and tag classes are kept.
template <class T> RhombicDomain<T> star_triangle_move(const RhombicDomain<T>& d, int vertex) {
    auto cand = reshuffleable_vertices(d);
    if (std::find(cand.begin(), cand.end(), vertex) == cand.end())
        throw std::invalid_argument("location is not a reshuffleable hexagon");
    cplx<T> x = d.vertices()[vertex];
    struct Inc {
        int r, k;
        cplx<T> f1, f2;
    };
    std::vector<Inc> inc;
    for (int r = 0; r < d.size(); ++r)
        for (int k = 0; k < 4; ++k)
            if (cabs<T>(d.rhombus(r).v[k] - x) < T(geom_tol))
                inc.push_back({r, k, d.rhombus(r).v[(k + 1) % 4] - x, d.rhombus(r).v[(k + 3) % 4] - x});
    cplx<T> D(0);
    for (auto& c : inc) D += c.f1 + c.f2;
    cplx<T> xn = x + D / T(2);
    auto rs = d.rhombi();
    for (auto& c : inc) {
        std::array<cplx<T>, 4> v{xn, xn - c.f1, xn - c.f1 - c.f2, xn - c.f2};
        // old corner k+j maps to new corner j; the tag was at old corner 0
        int tag = ((0 - c.k) % 4 + 4) % 4;
        rs[c.r] = rhombus_from_vertices<T>(d.rhombus(c.r).id, v, tag);
    }
    return RhombicDomain<T>(std::move(rs));
}

template <class T> RhombicDomain<T> star_triangle_move(const RhombicDomain<T>& d, const cplx<T>& location) {
    const auto& V = d.vertices();
    for (std::size_t i = 0; i < V.size(); ++i)
        if (cabs<T>(V[i] - location) < T(geom_tol)) return star_triangle_move(d, static_cast<int>(i));
    throw std::invalid_argument("location is not a vertex of the domain");
}

/// max distance between the boundary polygons, or +inf if they differ in length
template <class T> T boundary_distance(const RhombicDomain<T>& a, const RhombicDomain<T>& b) {
    auto pa = a.boundary_polygon(), pb = b.boundary_polygon();
    if (pa.size() != pb.size()) return T(1e300);
    T m(0);
    for (std::size_t i = 0; i < pa.size(); ++i) m = std::max(m, T(cabs<T>(pa[i] - pb[i])));
    return m;
}

// ---- train tracks ----

template <class T> struct Transversal {
    cplx<T> direction;
    std::vector<SideRef> member_sides;
    std::vector<int> rhombi;
};

template <class T> std::vector<Transversal<T>> trace_train_tracks(const RhombicDomain<T>& d) {
    const int F = d.size();
    // node (r, p): the strip through sides p and p+2 of rhombus r
    std::vector<int> comp(2 * F, -1);
    std::vector<Transversal<T>> out;
    for (int start = 0; start < 2 * F; ++start) {
        if (comp[start] >= 0) continue;
        int id = static_cast<int>(out.size());
        Transversal<T> tr;
        std::vector<int> stack{start};
        comp[start] = id;
        while (!stack.empty()) {
            int nd = stack.back();
            stack.pop_back();
            int r = nd / 2, p = nd % 2;
            tr.rhombi.push_back(r);
            for (int s : {p, p + 2}) {
                tr.member_sides.push_back({r, s});
                if (auto o = d.across({r, s})) {
                    int nn = 2 * o->r + o->s % 2;
                    if (comp[nn] < 0) {
                        comp[nn] = id;
                        stack.push_back(nn);
                    } else if (comp[nn] != id) {
                        throw embedding_invalid_error("inconsistent train track");
                    }
                }
            }
        }
        std::sort(tr.rhombi.begin(), tr.rhombi.end());
        std::sort(tr.member_sides.begin(), tr.member_sides.end());
        for (std::size_t i = 1; i < tr.rhombi.size(); ++i)
            if (tr.rhombi[i] == tr.rhombi[i - 1]) throw embedding_invalid_error("train track crosses itself");
        auto s0 = tr.member_sides.front();
        cplx<T> dir = d.rhombus(s0.r).dz(s0.s);
        for (auto s : tr.member_sides) {
            cplx<T> e = d.rhombus(s.r).dz(s.s);
            if (rabs(T((e * std::conj(dir)).imag())) > T(geom_tol))
                throw embedding_invalid_error("train track sides not parallel");
        }
        // canonical sign: direction in the upper half plane
        if (dir.imag() < -T(geom_tol) || (rabs(dir.imag()) <= T(geom_tol) && dir.real() < 0)) dir = -dir;
        tr.direction = dir;
        out.push_back(std::move(tr));
    }
    std::set<std::pair<int, int>> crossings;
    for (int r = 0; r < F; ++r) {
        auto key = std::minmax(comp[2 * r], comp[2 * r + 1]);
        if (!crossings.insert(key).second) throw embedding_invalid_error("two train tracks cross twice");
    }
    return out;
}

// ---- JSON ----

template <class T> nlohmann::json domain_to_json(const RhombicDomain<T>& d) {
    nlohmann::json j;
    j["rhombi"] = nlohmann::json::array();
    for (auto& r : d.rhombi()) {
        nlohmann::json v = nlohmann::json::array();
        for (auto& z : r.v) v.push_back({to_double(z.real()), to_double(z.imag())});
        j["rhombi"].push_back({{"id", r.id}, {"angle", to_double(r.angle)}, {"vertices", v}, {"tag", 0}});
    }
    j["adjacency"] = nlohmann::json::array();
    for (auto [a, b] : d.adjacency()) j["adjacency"].push_back({{a.r, a.s}, {b.r, b.s}});
    return j;
}

/// Vertices are anticlockwise; "tag" indexes the tagged vertex. Adjacency sides
/// are numbered from the tagged corner. All invariants are rechecked.
inline RhombicDomain<double> domain_from_json(const nlohmann::json& j) {
    std::vector<Rhombus<double>> rs;
    for (auto& jr : j.at("rhombi")) {
        auto& jv = jr.at("vertices");
        if (jv.size() != 4) throw std::invalid_argument("rhombus needs four vertices");
        std::array<cplx<double>, 4> v;
        for (int k = 0; k < 4; ++k) v[k] = {jv[k].at(0).get<double>(), jv[k].at(1).get<double>()};
        int tag = jr.value("tag", 0);
        if (tag < 0 || tag > 3) throw std::invalid_argument("tag must be 0..3");
        auto r = rhombus_from_vertices<double>(jr.value("id", static_cast<int>(rs.size())), v, tag);
        if (jr.contains("angle") && std::abs(jr["angle"].get<double>() - r.angle) > geom_tol)
            throw std::invalid_argument("declared angle does not match vertices");
        rs.push_back(r);
    }
    RhombicDomain<double> d(std::move(rs));
    if (j.contains("adjacency")) {
        std::vector<std::pair<SideRef, SideRef>> given;
        for (auto& e : j["adjacency"]) {
            SideRef a{e.at(0).at(0).get<int>(), e.at(0).at(1).get<int>()};
            SideRef b{e.at(1).at(0).get<int>(), e.at(1).at(1).get<int>()};
            given.emplace_back(std::min(a, b), std::max(a, b));
        }
        std::sort(given.begin(), given.end());
        if (given != d.adjacency()) throw embedding_invalid_error("declared adjacency does not match geometry");
    }
    return d;
}

inline RhombicDomain<double> load_domain(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open domain file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("domain file is not valid JSON: ") + e.what());
    }
    return domain_from_json(j);
}

} // namespace looplab
