#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "grac/errors.hpp"

namespace grac {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Volume of a primitive cell of the triangular lattice (sqrt(3)/2).
inline constexpr double kCellVolume = 0.86602540378443864676;
// Area of one triangle of the canonical triangulation (cell volume / 2).
inline constexpr double kTriangleArea = kCellVolume / 2.0;

// Direction indices live in {1,...,6}; all entry points accept any
// integer and wrap it back into that range.
constexpr int wrap_dir(int j) noexcept {
    int r = (j - 1) % 6;
    if (r < 0) r += 6;
    return r + 1;
}

// Integer steps of the six lattice directions in (n1, n2) coordinates.
constexpr std::array<std::array<int, 2>, 6> kDirectionSteps = {{
    {{1, 0}}, {{0, 1}}, {{-1, 1}}, {{-1, 0}}, {{0, -1}}, {{1, -1}},
}};

// A lattice site x = n1*a1 + n2*a2.
struct Site {
    int n1 = 0;
    int n2 = 0;

    friend constexpr auto operator<=>(const Site&, const Site&) = default;

    constexpr Site neighbour(int j) const noexcept {
        const auto& s = kDirectionSteps[wrap_dir(j) - 1];
        return Site{n1 + s[0], n2 + s[1]};
    }
};

inline Vec2 position(Site x) {
    return Vec2(x.n1 + 0.5 * x.n2, kCellVolume * x.n2);
}

// a_j as a real vector; a1 = (1,0) and a_j = Q6^{j-1} a1.
inline const Vec2& lattice_direction(int j) {
    static const std::array<Vec2, 6> dirs = {
        Vec2(1.0, 0.0),  Vec2(0.5, kCellVolume),   Vec2(-0.5, kCellVolume),
        Vec2(-1.0, 0.0), Vec2(-0.5, -kCellVolume), Vec2(0.5, -kCellVolume),
    };
    return dirs[wrap_dir(j) - 1];
}

// Graph (hop) distance between two sites.
inline int hop_distance(Site a, Site b) {
    const int m = a.n1 - b.n1;
    const int n = a.n2 - b.n2;
    return (std::abs(m) + std::abs(n) + std::abs(m + n)) / 2;
}

inline std::string to_string(Site x) {
    return "(" + std::to_string(x.n1) + "," + std::to_string(x.n2) + ")";
}

enum class Orientation : std::uint8_t { up, down };

// One triangle of the canonical triangulation in its unique (base,
// orientation) representation: up = conv{b, b+a1, b+a2}, down =
// conv{b, b+a2, b+a3}.
struct Triangle {
    Site base;
    Orientation orient = Orientation::up;

    friend constexpr auto operator<=>(const Triangle&, const Triangle&) = default;

    bool up() const noexcept { return orient == Orientation::up; }
};

inline std::array<Site, 3> vertices(Triangle t) {
    if (t.up()) return {t.base, t.base.neighbour(1), t.base.neighbour(2)};
    return {t.base, t.base.neighbour(2), t.base.neighbour(3)};
}

// T_{x,j} = conv{x, x+a_j, x+a_{j+1}}, canonicalized.
inline Triangle incident_triangle(Site x, int j) {
    switch (wrap_dir(j)) {
        case 1: return {x, Orientation::up};
        case 2: return {x, Orientation::down};
        case 3: return {x.neighbour(4), Orientation::up};
        case 4: return {x.neighbour(5), Orientation::down};
        case 5: return {x.neighbour(5), Orientation::up};
        default: return {x.neighbour(6), Orientation::down};
    }
}

// x_{T,j}: the unique vertex of T with both x_{T,j} and x_{T,j}+a_j in T.
inline Site bond_site(Triangle t, int j) {
    const Site b = t.base;
    if (t.up()) {
        switch (wrap_dir(j)) {
            case 1:
            case 2: return b;
            case 3:
            case 4: return b.neighbour(1);
            default: return b.neighbour(2);  // 5, 6
        }
    }
    switch (wrap_dir(j)) {
        case 1:
        case 6: return b.neighbour(3);
        case 2:
        case 3: return b;
        default: return b.neighbour(2);  // 4, 5
    }
}

// T_j: the neighbouring triangle across the edge of T that contains the
// direction-j bond. The same edge carries j and j+3, so T_j = T_{j+3}.
inline Triangle neighbour_triangle(Triangle t, int j) {
    const Site b = t.base;
    const int k = wrap_dir(j) % 3;  // 1,4 -> 1; 2,5 -> 2; 3,0(=6) -> 0
    if (t.up()) {
        switch (k) {
            case 1: return {b.neighbour(6), Orientation::down};
            case 2: return {b, Orientation::down};
            default: return {b.neighbour(1), Orientation::down};
        }
    }
    switch (k) {
        case 1: return {b.neighbour(3), Orientation::up};
        case 2: return {b, Orientation::up};
        default: return {b.neighbour(4), Orientation::up};
    }
}

// Direction index of the edge containing the direction-j bond when that
// edge is traversed anticlockwise with respect to T.
inline int ccw_edge_dir(Triangle t, int j) {
    const int k = wrap_dir(j) % 3;
    if (t.up()) return k == 1 ? 1 : (k == 2 ? 5 : 3);
    return k == 1 ? 4 : (k == 2 ? 2 : 6);
}

// Canonical undirected lattice edge: the bond (tail, tail + a_dir) with
// dir restricted to {1,2,3}.
struct Edge {
    Site tail;
    int dir = 1;

    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge canonical_edge(Site x, int j) {
    const int d = wrap_dir(j);
    if (d <= 3) return Edge{x, d};
    return Edge{x.neighbour(d), d - 3};
}

inline Vec2 edge_midpoint(Edge f) {
    return position(f.tail) + 0.5 * lattice_direction(f.dir);
}

// The two triangles sharing the edge (x, x+a_j): T_{x,j} and T_{x,j-1}.
inline std::array<Triangle, 2> edge_triangles(Edge f) {
    return {incident_triangle(f.tail, f.dir),
            incident_triangle(f.tail, f.dir - 1)};
}

inline std::array<Edge, 3> triangle_edges(Triangle t) {
    const Site b = t.base;
    if (t.up()) {
        return {Edge{b, 1}, Edge{b.neighbour(1), 3}, Edge{b, 2}};
    }
    return {Edge{b.neighbour(3), 1}, Edge{b, 2}, Edge{b, 3}};
}

// Anticlockwise direction (w.r.t. t) of each entry of triangle_edges(t).
inline std::array<int, 3> triangle_edge_ccw_dirs(Triangle t) {
    if (t.up()) return {1, 3, 5};
    return {4, 2, 6};
}

// Rhombic computational window in index space.
struct IndexBox {
    int n1_min = 0, n1_max = -1;
    int n2_min = 0, n2_max = -1;

    static IndexBox centered(int radius) {
        return IndexBox{-radius, radius, -radius, radius};
    }

    int width() const noexcept { return n1_max - n1_min + 1; }
    int height() const noexcept { return n2_max - n2_min + 1; }
    std::int64_t site_count() const noexcept {
        return static_cast<std::int64_t>(width()) * height();
    }

    bool contains(Site x) const noexcept {
        return x.n1 >= n1_min && x.n1 <= n1_max && x.n2 >= n2_min && x.n2 <= n2_max;
    }

    bool contains(Triangle t) const noexcept {
        for (Site v : vertices(t))
            if (!contains(v)) return false;
        return true;
    }

    // Hops from x to the box boundary (0 when x lies on it).
    int margin(Site x) const noexcept {
        return std::min(std::min(x.n1 - n1_min, n1_max - x.n1),
                        std::min(x.n2 - n2_min, n2_max - x.n2));
    }

    std::int64_t index(Site x) const {
        if (!contains(x)) throw OutOfWindow("site " + to_string(x) + " outside window");
        return static_cast<std::int64_t>(x.n2 - n2_min) * width() + (x.n1 - n1_min);
    }

    Site site(std::int64_t idx) const noexcept {
        const int w = width();
        return Site{n1_min + static_cast<int>(idx % w), n2_min + static_cast<int>(idx / w)};
    }

    IndexBox shrunk(int m) const noexcept {
        return IndexBox{n1_min + m, n1_max - m, n2_min + m, n2_max - m};
    }
    IndexBox grown(int m) const noexcept { return shrunk(-m); }

    template <class F>
    void for_each_site(F&& f) const {
        for (int n2 = n2_min; n2 <= n2_max; ++n2)
            for (int n1 = n1_min; n1 <= n1_max; ++n1) f(Site{n1, n2});
    }

    friend constexpr auto operator<=>(const IndexBox&, const IndexBox&) = default;
};

// Indexed enumeration of all triangles whose vertices lie in a box.
class BoxTriangles {
public:
    explicit BoxTriangles(const IndexBox& box) : box_(box) {
        up_cols_ = box.width() - 1;
        rows_ = box.height() - 1;
        count_ = 2 * static_cast<std::int64_t>(up_cols_) * rows_;
    }

    const IndexBox& box() const noexcept { return box_; }
    std::int64_t count() const noexcept { return count_; }

    bool contains(Triangle t) const noexcept { return box_.contains(t); }

    std::int64_t index(Triangle t) const {
        if (!contains(t)) throw OutOfWindow("triangle outside window");
        const int row = t.base.n2 - box_.n2_min;
        const int col = t.base.n1 - box_.n1_min - (t.up() ? 0 : 1);
        const std::int64_t half = static_cast<std::int64_t>(up_cols_) * rows_;
        return (t.up() ? 0 : half) + static_cast<std::int64_t>(row) * up_cols_ + col;
    }

    Triangle triangle(std::int64_t idx) const noexcept {
        const std::int64_t half = static_cast<std::int64_t>(up_cols_) * rows_;
        const bool up = idx < half;
        const std::int64_t r = up ? idx : idx - half;
        const int row = static_cast<int>(r / up_cols_);
        const int col = static_cast<int>(r % up_cols_);
        return Triangle{Site{box_.n1_min + col + (up ? 0 : 1), box_.n2_min + row},
                        up ? Orientation::up : Orientation::down};
    }

    template <class F>
    void for_each(F&& f) const {
        for (std::int64_t i = 0; i < count_; ++i) f(triangle(i));
    }

private:
    IndexBox box_;
    int up_cols_ = 0;
    int rows_ = 0;
    std::int64_t count_ = 0;
};

// Indexed enumeration of the canonical edges whose two incident
// triangles both lie in a box.
class BoxEdges {
public:
    explicit BoxEdges(const IndexBox& box) : box_(box), tris_(box) {
        index_.assign(3 * box.site_count(), -1);
        std::int64_t n = 0;
        for (int d = 1; d <= 3; ++d) {
            box.for_each_site([&](Site x) {
                const Edge f{x, d};
                const auto ts = edge_triangles(f);
                if (tris_.contains(ts[0]) && tris_.contains(ts[1])) {
                    index_[slot(f)] = n;
                    edges_.push_back(f);
                    ++n;
                }
            });
        }
    }

    const IndexBox& box() const noexcept { return box_; }
    std::int64_t count() const noexcept { return static_cast<std::int64_t>(edges_.size()); }

    bool contains(Edge f) const noexcept {
        return box_.contains(f.tail) && index_[slot(f)] >= 0;
    }

    std::int64_t index(Edge f) const {
        if (!box_.contains(f.tail)) throw OutOfWindow("edge tail outside window");
        const std::int64_t i = index_[slot(f)];
        if (i < 0) throw OutOfWindow("edge lacks an in-window triangle pair");
        return i;
    }

    Edge edge(std::int64_t idx) const noexcept { return edges_[idx]; }

    template <class F>
    void for_each(F&& f) const {
        for (const Edge& e : edges_) f(e);
    }

private:
    std::int64_t slot(Edge f) const {
        return (f.dir - 1) * box_.site_count() + box_.index(f.tail);
    }

    IndexBox box_;
    BoxTriangles tris_;
    std::vector<std::int64_t> index_;
    std::vector<Edge> edges_;
};

}  // namespace grac
