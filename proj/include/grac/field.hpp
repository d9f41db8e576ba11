#pragma once

#include <charconv>
#include <cmath>
#include <concepts>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "grac/geometry.hpp"

namespace grac {

// Anything that behaves like a deformation y : L -> R^2 of the lattice:
// pointwise values and forward finite differences D_j y(x) = y(x+a_j) - y(x).
template <class Y>
concept DeformationLike = requires(const Y& y, Site x, int j) {
    { y.value(x) } -> std::convertible_to<Vec2>;
    { y.diff(x, j) } -> std::convertible_to<Vec2>;
};

// Exact homogeneous deformation y_F(x) = F x; finite differences are
// F a_j exactly, independent of any window.
struct HomogeneousState {
    Mat2 F = Mat2::Identity();

    Vec2 value(Site x) const { return F * position(x); }
    Vec2 diff(Site, int j) const { return F * lattice_direction(j); }
};

// Compactly supported displacement u on a window; the deformation it
// represents is y = id + u, with u == 0 outside the stored support.
// Evaluation outside the window throws OutOfWindow.
class LatticeField {
public:
    explicit LatticeField(const IndexBox& box)
        : box_(box), u_(static_cast<std::size_t>(box.site_count()), Vec2::Zero()) {}

    // The truncated homogeneous displacement u = (F - I) x on the whole
    // window. Such a field is *not* compactly supported; prefer
    // HomogeneousState. Kept for window-truncation experiments and
    // flagged via truncated_homogeneous().
    static LatticeField truncated_homogeneous(const IndexBox& box, const Mat2& F) {
        LatticeField v(box);
        box.for_each_site([&](Site x) { v.displacement(x) = (F - Mat2::Identity()) * position(x); });
        v.truncated_homogeneous_ = true;
        return v;
    }

    const IndexBox& box() const noexcept { return box_; }
    bool truncated_homogeneous() const noexcept { return truncated_homogeneous_; }

    Vec2& displacement(Site x) { return u_[static_cast<std::size_t>(box_.index(x))]; }
    const Vec2& displacement(Site x) const { return u_[static_cast<std::size_t>(box_.index(x))]; }

    Vec2 value(Site x) const { return position(x) + displacement(x); }

    // D_j y(x) for the deformation y = id + u. The affine part is added
    // as the exact direction vector so that iterated differences cancel
    // it identically.
    Vec2 diff(Site x, int j) const {
        return lattice_direction(j) + displacement(x.neighbour(j)) - displacement(x);
    }

    Vec2 displacement_diff(Site x, int j) const {
        return displacement(x.neighbour(j)) - displacement(x);
    }

    // Hops between the support of u and the window boundary.
    int support_margin() const {
        int m = std::min(box_.width(), box_.height());
        box_.for_each_site([&](Site x) {
            if (!displacement(x).isZero(0.0)) m = std::min(m, box_.margin(x));
        });
        return m;
    }

private:
    IndexBox box_;
    std::vector<Vec2> u_;
    bool truncated_homogeneous_ = false;
};

template <DeformationLike Y>
Vec2 fdiff(const Y& y, Site x, int j) {
    return y.diff(x, j);
}

template <DeformationLike Y>
Vec2 iterated_diff2(const Y& y, Site x, int i, int j) {
    return y.diff(x.neighbour(i), j) - y.diff(x, j);
}

template <DeformationLike Y>
Vec2 iterated_diff3(const Y& y, Site x, int i, int j, int k) {
    return iterated_diff2(y, x.neighbour(i), j, k) - iterated_diff2(y, x, j, k);
}

// |D^2 y(x)| = max_{i,j} |D_i D_j y(x)|.
template <DeformationLike Y>
double second_difference_magnitude(const Y& y, Site x) {
    double m = 0.0;
    for (int i = 1; i <= 6; ++i)
        for (int j = 1; j <= 6; ++j) m = std::max(m, iterated_diff2(y, x, i, j).norm());
    return m;
}

// |D^3 y(x)| = max_{i,j,k} |D_i D_j D_k y(x)|.
template <DeformationLike Y>
double third_difference_magnitude(const Y& y, Site x) {
    double m = 0.0;
    for (int i = 1; i <= 6; ++i)
        for (int j = 1; j <= 6; ++j)
            for (int k = 1; k <= 6; ++k) m = std::max(m, iterated_diff3(y, x, i, j, k).norm());
    return m;
}

// Discrete l^p norm of a set of per-site magnitudes; p may be infinity.
inline double lp_norm(const std::vector<double>& values, double p) {
    if (!(p >= 1.0)) throw Error("lp_norm requires p >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (double v : values) s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

template <DeformationLike Y, class R>
double lp_norm_of(const Y& y, const R& sites, double p,
                  double (*magnitude)(const Y&, Site)) {
    std::vector<double> vals;
    for (Site x : sites) vals.push_back(magnitude(y, x));
    return lp_norm(vals, p);
}

// Constant gradient of the P1 interpolant of y on T. Satisfies
// (p1_gradient a_j) = D_j y(x_{T,j}) for every j.
template <DeformationLike Y>
Mat2 p1_gradient(const Y& y, Triangle t) {
    Mat2 g;
    if (t.up()) {
        // columns from D_1 y(b) and D_2 y(b); a1 = e1.
        const Vec2 g1 = y.diff(t.base, 1);
        const Vec2 g2 = y.diff(t.base, 2);
        g.col(0) = g1;
        g.col(1) = (g2 - 0.5 * g1) / kCellVolume;
    } else {
        const Vec2 g2 = y.diff(t.base, 2);
        const Vec2 g3 = y.diff(t.base, 3);
        g.col(0) = g2 - g3;
        g.col(1) = 0.5 * (g2 + g3) / kCellVolume;
    }
    return g;
}

// ---------------------------------------------------------------------
// Plain-text serialization: one row per site, "n1 n2 u1 u2", values in
// shortest round-trip decimal form.

inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

inline void write_field(std::ostream& os, const LatticeField& f) {
    const IndexBox& b = f.box();
    os << "# field " << b.n1_min << ' ' << b.n1_max << ' ' << b.n2_min << ' '
       << b.n2_max << '\n';
    b.for_each_site([&](Site x) {
        const Vec2& u = f.displacement(x);
        os << x.n1 << ' ' << x.n2 << ' ' << format_double(u[0]) << ' '
           << format_double(u[1]) << '\n';
    });
}

inline LatticeField read_field(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw Error("empty field stream");
    std::istringstream head(line);
    std::string hash, tag;
    IndexBox box;
    head >> hash >> tag >> box.n1_min >> box.n1_max >> box.n2_min >> box.n2_max;
    if (hash != "#" || tag != "field" || !head) throw Error("bad field header: " + line);
    LatticeField f(box);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        Site x;
        double u1 = 0.0, u2 = 0.0;
        row >> x.n1 >> x.n2 >> u1 >> u2;
        if (!row) throw Error("bad field row: " + line);
        f.displacement(x) = Vec2(u1, u2);
    }
    return f;
}

}  // namespace grac
