#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <vector>

#include "grac/geometry.hpp"

namespace grac {

enum class Region : std::uint8_t { atomistic, interface, continuum };

inline char region_code(Region r) {
    switch (r) {
        case Region::atomistic: return 'A';
        case Region::interface: return 'I';
        default: return 'C';
    }
}

// Local interface-site classes; the complete catalog of admissible
// configurations up to lattice symmetry.
enum class InterfaceSiteKind : std::uint8_t {
    flat,            // I-neighbours opposite; 2 atomistic, 2 continuum neighbours
    convex_corner,   // I-neighbours two apart; 1 atomistic neighbour between them
    concave_corner,  // I-neighbours two apart; 1 continuum neighbour between them
    irregular,       // anything else (inadmissible)
};

struct AdmissibilityReport {
    bool pass = false;
    std::vector<Site> violations;        // sites breaking the two-I/one-C rule
    std::vector<Site> boundary_skipped;  // I-sites whose neighbourhood leaves the window
    std::vector<Site> adjacent_corners;  // warning: touching corner sites
};

// Classification of the window into atomistic A, interface I and
// continuum C, with the induced triangle and edge classes.
class RegionPartition {
public:
    // Builds the partition from an explicit atom-site set. min_interface_margin
    // guards the distance between I and the window boundary; presets that
    // truncate an infinite geometry pass 0 and accept window effects.
    static RegionPartition build(const std::vector<Site>& atoms, const IndexBox& box,
                                 int min_interface_margin = 3) {
        RegionPartition p(box);
        for (Site a : atoms) {
            if (!box.contains(a)) throw OutOfWindow("atom site " + to_string(a) + " outside window");
            p.site_class_[box.index(a)] = Region::atomistic;
        }
        box.for_each_site([&](Site x) {
            if (p.region(x) == Region::atomistic) return;
            for (int j = 1; j <= 6; ++j) {
                const Site n = x.neighbour(j);
                if (box.contains(n) && p.region(n) == Region::atomistic) {
                    p.site_class_[box.index(x)] = Region::interface;
                    if (box.margin(x) < min_interface_margin)
                        throw TooCloseToBoundary("interface site " + to_string(x) +
                                                 " within margin " +
                                                 std::to_string(min_interface_margin));
                    return;
                }
            }
        });
        box.for_each_site([&](Site x) {
            const Region r = p.region(x);
            if (r == Region::atomistic) p.atom_sites_.push_back(x);
            else if (r == Region::interface) p.interface_sites_.push_back(x);
        });
        p.classify_triangles_and_edges();
        return p;
    }

    const IndexBox& box() const noexcept { return box_; }
    const BoxTriangles& triangulation() const noexcept { return tris_; }
    const BoxEdges& edge_set() const noexcept { return edges_; }

    Region region(Site x) const { return site_class_[box_.index(x)]; }

    Region region(Triangle t) const { return tri_class_[tris_.index(t)]; }

    Region region(Edge f) const { return edge_class_[edges_.index(f)]; }

    const std::vector<Site>& atom_sites() const noexcept { return atom_sites_; }
    const std::vector<Site>& interface_sites() const noexcept { return interface_sites_; }

    std::vector<Site> sites(Region r) const {
        std::vector<Site> out;
        box_.for_each_site([&](Site x) {
            if (region(x) == r) out.push_back(x);
        });
        return out;
    }

    std::vector<Triangle> triangles(Region r) const {
        std::vector<Triangle> out;
        tris_.for_each([&](Triangle t) {
            if (region(t) == r) out.push_back(t);
        });
        return out;
    }

    std::vector<Edge> edges(Region r) const {
        std::vector<Edge> out;
        edges_.for_each([&](Edge f) {
            if (region(f) == r) out.push_back(f);
        });
        return out;
    }

    // I_ext = sites within one hop of I.
    std::vector<Site> extended_interface() const {
        std::vector<char> mark(box_.site_count(), 0);
        for (Site x : interface_sites_) {
            mark[box_.index(x)] = 1;
            for (int j = 1; j <= 6; ++j) {
                const Site n = x.neighbour(j);
                if (box_.contains(n)) mark[box_.index(n)] = 1;
            }
        }
        std::vector<Site> out;
        box_.for_each_site([&](Site x) {
            if (mark[box_.index(x)]) out.push_back(x);
        });
        return out;
    }

    // Neighbour directions from x that land in I (within the window).
    std::vector<int> interface_neighbour_dirs(Site x) const {
        std::vector<int> dirs;
        for (int j = 1; j <= 6; ++j) {
            const Site n = x.neighbour(j);
            if (box_.contains(n) && region(n) == Region::interface) dirs.push_back(j);
        }
        return dirs;
    }

    InterfaceSiteKind interface_site_kind(Site x) const {
        const auto dirs = interface_neighbour_dirs(x);
        if (dirs.size() != 2) return InterfaceSiteKind::irregular;
        int sep = wrap_dir(dirs[1] - dirs[0]);
        sep = std::min(sep, 6 - sep);
        if (sep == 3) return InterfaceSiteKind::flat;
        if (sep != 2) return InterfaceSiteKind::irregular;
        // The lone direction between the two I-neighbours decides the type.
        const int between =
            wrap_dir(dirs[1] - dirs[0]) == 2 ? wrap_dir(dirs[0] + 1) : wrap_dir(dirs[1] + 1);
        const Site mid = x.neighbour(between);
        if (!box_.contains(mid)) return InterfaceSiteKind::irregular;
        switch (region(mid)) {
            case Region::atomistic: return InterfaceSiteKind::convex_corner;
            case Region::continuum: return InterfaceSiteKind::concave_corner;
            default: return InterfaceSiteKind::irregular;
        }
    }

    // Each x in I must have exactly two I-neighbours and at least one
    // C-neighbour. I-sites whose 1-neighbourhood leaves the window are
    // skipped and reported.
    AdmissibilityReport check_admissible() const {
        AdmissibilityReport rep;
        std::vector<Site> corners;
        for (Site x : interface_sites_) {
            if (box_.margin(x) < 1) {
                rep.boundary_skipped.push_back(x);
                continue;
            }
            int n_i = 0, n_c = 0;
            for (int j = 1; j <= 6; ++j) {
                const Region r = region(x.neighbour(j));
                if (r == Region::interface) ++n_i;
                if (r == Region::continuum) ++n_c;
            }
            if (n_i != 2 || n_c < 1) {
                rep.violations.push_back(x);
                continue;
            }
            const auto kind = interface_site_kind(x);
            if (kind == InterfaceSiteKind::irregular) rep.violations.push_back(x);
            else if (kind != InterfaceSiteKind::flat) corners.push_back(x);
        }
        for (std::size_t i = 0; i < corners.size(); ++i)
            for (std::size_t k = i + 1; k < corners.size(); ++k)
                if (hop_distance(corners[i], corners[k]) == 1) {
                    rep.adjacent_corners.push_back(corners[i]);
                    rep.adjacent_corners.push_back(corners[k]);
                }
        rep.pass = rep.violations.empty();
        return rep;
    }

    // True iff I lies on a single lattice line (n2, n1 or n1+n2 constant).
    bool is_planar() const {
        if (interface_sites_.size() < 2) return false;
        const Site s0 = interface_sites_.front();
        bool c1 = true, c2 = true, c3 = true;
        for (Site x : interface_sites_) {
            c1 &= (x.n2 == s0.n2);
            c2 &= (x.n1 == s0.n1);
            c3 &= (x.n1 + x.n2 == s0.n1 + s0.n2);
        }
        return c1 || c2 || c3;
    }

    void export_csv(std::ostream& os) const {
        os << "n1,n2,class\n";
        box_.for_each_site([&](Site x) {
            os << x.n1 << ',' << x.n2 << ',' << region_code(region(x)) << '\n';
        });
    }

private:
    explicit RegionPartition(const IndexBox& box)
        : box_(box),
          tris_(box),
          edges_(box),
          site_class_(box.site_count(), Region::continuum) {}

    void classify_triangles_and_edges() {
        tri_class_.resize(tris_.count());
        tris_.for_each([&](Triangle t) {
            int a = 0, c = 0;
            for (Site v : vertices(t)) {
                const Region r = region(v);
                if (r == Region::atomistic) ++a;
                if (r == Region::continuum) ++c;
            }
            Region rt = Region::interface;
            if (a == 3) rt = Region::atomistic;
            if (c == 3) rt = Region::continuum;
            tri_class_[tris_.index(t)] = rt;
        });
        edge_class_.resize(edges_.count());
        edges_.for_each([&](Edge f) {
            const auto ts = edge_triangles(f);
            Region re = Region::interface;
            for (Triangle t : ts) {
                const Region rt = region(t);
                if (rt != Region::interface) re = rt;
            }
            edge_class_[edges_.index(f)] = re;
        });
    }

    IndexBox box_;
    BoxTriangles tris_;
    BoxEdges edges_;
    std::vector<Region> site_class_;
    std::vector<Region> tri_class_;
    std::vector<Region> edge_class_;
    std::vector<Site> atom_sites_;
    std::vector<Site> interface_sites_;
};

// ---------------------------------------------------------------------
// Geometry presets.

inline int hex_radius(Site x) {
    return (std::abs(x.n1) + std::abs(x.n2) + std::abs(x.n1 + x.n2)) / 2;
}

// A = lower half-plane {x2 < 0}; the flat-interface configuration with
// I = {x2 = 0}.
inline std::vector<Site> half_plane_sites(const IndexBox& box) {
    std::vector<Site> a;
    box.for_each_site([&](Site x) {
        if (x.n2 < 0) a.push_back(x);
    });
    return a;
}

// A = hexagon of the given hop radius around the origin.
inline std::vector<Site> hexagon_sites(int radius, const IndexBox& box) {
    std::vector<Site> a;
    box.for_each_site([&](Site x) {
        if (hex_radius(x) <= radius) a.push_back(x);
    });
    return a;
}

// A = lattice triangle {n1 >= 0, n2 >= 0, n1 + n2 <= side}.
inline std::vector<Site> triangle_sites(int side, const IndexBox& box) {
    std::vector<Site> a;
    box.for_each_site([&](Site x) {
        if (x.n1 >= 0 && x.n2 >= 0 && x.n1 + x.n2 <= side) a.push_back(x);
    });
    return a;
}

// A = 240-degree wedge {n2 <= -1} u {n1 + n2 <= -1}: one interface
// corner at the origin that is concave seen from the atomistic side.
inline std::vector<Site> wedge_sites(const IndexBox& box) {
    std::vector<Site> a;
    box.for_each_site([&](Site x) {
        if (x.n2 <= -1 || x.n1 + x.n2 <= -1) a.push_back(x);
    });
    return a;
}

// A = rasterized slanted half-plane {n1 + 2 n2 <= -1}; the interface is
// a staircase of alternating convex and concave corners.
inline std::vector<Site> zigzag_sites(const IndexBox& box) {
    std::vector<Site> a;
    box.for_each_site([&](Site x) {
        if (x.n1 + 2 * x.n2 <= -1) a.push_back(x);
    });
    return a;
}

// A = sites whose position lies inside (or on the boundary of) a closed
// polygon, by even-odd rasterization.
inline std::vector<Site> polygon_sites(const std::vector<Vec2>& poly, const IndexBox& box) {
    if (poly.size() < 3) throw Error("polygon needs at least 3 vertices");
    auto inside = [&](const Vec2& p) {
        bool in = false;
        for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
            const Vec2& u = poly[i];
            const Vec2& v = poly[(i + 1) % n];
            const Vec2 e = v - u;
            const Vec2 w = p - u;
            const double cross = e[0] * w[1] - e[1] * w[0];
            const double t = w.dot(e) / e.squaredNorm();
            if (std::abs(cross) < 1e-12 && t >= -1e-12 && t <= 1.0 + 1e-12) return true;
            if ((u[1] <= p[1]) != (v[1] <= p[1])) {
                const double xc = u[0] + (p[1] - u[1]) / (v[1] - u[1]) * (v[0] - u[0]);
                if (xc > p[0]) in = !in;
            }
        }
        return in;
    };
    std::vector<Site> a;
    box.for_each_site([&](Site x) {
        if (inside(position(x))) a.push_back(x);
    });
    return a;
}

}  // namespace grac
