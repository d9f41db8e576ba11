#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "grac/geometry.hpp"

namespace grac {

// The six nearest-neighbour difference vectors (D_1 y, ..., D_6 y) seen
// by a site potential. Index k holds direction k+1.
using DiffTuple = std::array<Vec2, 6>;
// Second derivatives d^2 V / dg_i dg_j as 2x2 blocks.
using HessGrid = std::array<std::array<Mat2, 6>, 6>;

inline const Vec2& at_dir(const DiffTuple& g, int j) { return g[wrap_dir(j) - 1]; }
inline Vec2& at_dir(DiffTuple& g, int j) { return g[wrap_dir(j) - 1]; }

// The reference tuple a = (a_1, ..., a_6).
inline DiffTuple reference_diffs() {
    DiffTuple a;
    for (int j = 1; j <= 6; ++j) a[j - 1] = lattice_direction(j);
    return a;
}

inline DiffTuple deformed_diffs(const Mat2& F) {
    DiffTuple g;
    for (int j = 1; j <= 6; ++j) g[j - 1] = F * lattice_direction(j);
    return g;
}

// The point-symmetry flip g -> (-g_{j+3})_j.
inline DiffTuple point_flip(const DiffTuple& g) {
    DiffTuple h;
    for (int j = 1; j <= 6; ++j) h[j - 1] = -at_dir(g, j + 3);
    return h;
}

enum class DerivativeMode { analytic, finite_difference };

// A six-slot multi-body site potential V with V(a) = 0.
class SitePotential {
public:
    virtual ~SitePotential() = default;

    virtual std::string name() const = 0;
    virtual double value(const DiffTuple& g) const = 0;
    virtual DiffTuple gradient(const DiffTuple& g) const { return fd_gradient(g); }
    virtual HessGrid hessian(const DiffTuple& g) const { return fd_hessian(g); }
    virtual bool point_symmetric() const { return false; }

    double fd_step() const noexcept { return fd_step_; }
    void set_fd_step(double h) noexcept { fd_step_ = h; }
    bool richardson() const noexcept { return richardson_; }
    void set_richardson(bool r) noexcept { richardson_ = r; }

    // Central finite differences of value().
    DiffTuple fd_gradient(const DiffTuple& g) const {
        if (!richardson_) return fd_gradient_step(g, fd_step_);
        const DiffTuple d1 = fd_gradient_step(g, fd_step_);
        const DiffTuple d2 = fd_gradient_step(g, fd_step_ / 2.0);
        DiffTuple out;
        for (int k = 0; k < 6; ++k) out[k] = (4.0 * d2[k] - d1[k]) / 3.0;
        return out;
    }

    // Central finite differences of gradient().
    HessGrid fd_hessian(const DiffTuple& g) const {
        HessGrid h;
        DiffTuple gp = g;
        for (int j = 0; j < 6; ++j)
            for (int c = 0; c < 2; ++c) {
                const double old = gp[j][c];
                gp[j][c] = old + fd_step_;
                const DiffTuple dp = gradient(gp);
                gp[j][c] = old - fd_step_;
                const DiffTuple dm = gradient(gp);
                gp[j][c] = old;
                for (int i = 0; i < 6; ++i) {
                    const Vec2 col = (dp[i] - dm[i]) / (2.0 * fd_step_);
                    h[i][j].col(c) = col;
                }
            }
        return h;
    }

private:
    DiffTuple fd_gradient_step(const DiffTuple& g, double h) const {
        DiffTuple d;
        DiffTuple gp = g;
        for (int j = 0; j < 6; ++j)
            for (int c = 0; c < 2; ++c) {
                const double old = gp[j][c];
                gp[j][c] = old + h;
                const double vp = value(gp);
                gp[j][c] = old - h;
                const double vm = value(gp);
                gp[j][c] = old;
                d[j][c] = (vp - vm) / (2.0 * h);
            }
        return d;
    }

    double fd_step_ = 1e-5;
    bool richardson_ = false;
};

// V(g) = 1/2 sum_j kappa_j |g_j - a_j|^2, kappa_{j+3} = kappa_j >= 0.
class QuadraticPotential final : public SitePotential {
public:
    explicit QuadraticPotential(const std::array<double, 6>& kappa,
                                DerivativeMode mode = DerivativeMode::analytic)
        : kappa_(kappa), mode_(mode) {
        for (int j = 0; j < 3; ++j)
            if (kappa_[j] != kappa_[j + 3])
                throw SymmetryViolation("quadratic weights need kappa_{j+3} = kappa_j");
    }

    std::string name() const override { return "quadratic"; }
    bool point_symmetric() const override { return true; }

    double value(const DiffTuple& g) const override {
        const DiffTuple a = reference_diffs();
        double s = 0.0;
        for (int k = 0; k < 6; ++k) s += kappa_[k] * (g[k] - a[k]).squaredNorm();
        return 0.5 * s;
    }

    DiffTuple gradient(const DiffTuple& g) const override {
        if (mode_ == DerivativeMode::finite_difference) return fd_gradient(g);
        const DiffTuple a = reference_diffs();
        DiffTuple d;
        for (int k = 0; k < 6; ++k) d[k] = kappa_[k] * (g[k] - a[k]);
        return d;
    }

    HessGrid hessian(const DiffTuple& g) const override {
        if (mode_ == DerivativeMode::finite_difference) return fd_hessian(g);
        HessGrid h;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                h[i][j] = (i == j) ? Mat2(kappa_[i] * Mat2::Identity()) : Mat2(Mat2::Zero());
        return h;
    }

private:
    std::array<double, 6> kappa_;
    DerivativeMode mode_;
};

// Morse pair interaction V(g) = 1/2 sum_j phi(|g_j|) - 3 phi(1) with
// phi(r) = D (1 - exp(-alpha (r - r0)))^2.
class MorsePotential final : public SitePotential {
public:
    MorsePotential(double D, double alpha, double r0,
                   DerivativeMode mode = DerivativeMode::analytic)
        : D_(D), alpha_(alpha), r0_(r0), mode_(mode) {}

    std::string name() const override { return "morse"; }
    bool point_symmetric() const override { return true; }

    double value(const DiffTuple& g) const override {
        double s = 0.0;
        for (int k = 0; k < 6; ++k) s += phi(g[k].norm());
        return 0.5 * s - 3.0 * phi(1.0);
    }

    DiffTuple gradient(const DiffTuple& g) const override {
        if (mode_ == DerivativeMode::finite_difference) return fd_gradient(g);
        DiffTuple d;
        for (int k = 0; k < 6; ++k) {
            const double r = g[k].norm();
            d[k] = 0.5 * dphi(r) / r * g[k];
        }
        return d;
    }

    HessGrid hessian(const DiffTuple& g) const override {
        if (mode_ == DerivativeMode::finite_difference) return fd_hessian(g);
        HessGrid h;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) h[i][j].setZero();
        for (int k = 0; k < 6; ++k) {
            const double r = g[k].norm();
            const Vec2 n = g[k] / r;
            const Mat2 nn = n * n.transpose();
            h[k][k] = 0.5 * (ddphi(r) * nn + dphi(r) / r * (Mat2::Identity() - nn));
        }
        return h;
    }

private:
    double phi(double r) const {
        const double e = 1.0 - std::exp(-alpha_ * (r - r0_));
        return D_ * e * e;
    }
    double dphi(double r) const {
        const double x = std::exp(-alpha_ * (r - r0_));
        return 2.0 * D_ * (1.0 - x) * alpha_ * x;
    }
    double ddphi(double r) const {
        const double x = std::exp(-alpha_ * (r - r0_));
        return 2.0 * D_ * alpha_ * alpha_ * x * (2.0 * x - 1.0);
    }

    double D_, alpha_, r0_;
    DerivativeMode mode_;
};

// Bond-angle interaction V(g) = k_theta sum_j (cos theta_j - 1/2)^2 with
// theta_j the angle between g_j and g_{j+1}; vanishes at g = a since all
// reference angles are 60 degrees.
class BondAnglePotential final : public SitePotential {
public:
    explicit BondAnglePotential(double k_theta,
                                DerivativeMode mode = DerivativeMode::analytic)
        : k_(k_theta), mode_(mode) {}

    std::string name() const override { return "bond_angle"; }
    bool point_symmetric() const override { return true; }

    double value(const DiffTuple& g) const override {
        double s = 0.0;
        for (int j = 1; j <= 6; ++j) {
            const double c = cos_angle(at_dir(g, j), at_dir(g, j + 1));
            s += (c - 0.5) * (c - 0.5);
        }
        return k_ * s;
    }

    DiffTuple gradient(const DiffTuple& g) const override {
        if (mode_ == DerivativeMode::finite_difference) return fd_gradient(g);
        DiffTuple d;
        for (auto& v : d) v.setZero();
        for (int j = 1; j <= 6; ++j) {
            const Vec2& p = at_dir(g, j);
            const Vec2& q = at_dir(g, j + 1);
            const double c = cos_angle(p, q);
            const double w = 2.0 * k_ * (c - 0.5);
            // d cos(p,q)/dp = (q/|q| - c p/|p|)/|p|, symmetrically for q.
            at_dir(d, j) += w * (q / q.norm() - c * p / p.norm()) / p.norm();
            at_dir(d, j + 1) += w * (p / p.norm() - c * q / q.norm()) / q.norm();
        }
        return d;
    }

private:
    double cos_angle(const Vec2& p, const Vec2& q) const {
        const double np = p.norm(), nq = q.norm();
        if (np < 1e-8 || nq < 1e-8) throw DegenerateBond("bond length below 1e-8");
        return p.dot(q) / (np * nq);
    }

    double k_;
    DerivativeMode mode_;
};

// Cauchy-Born stored energy density W(F) = V(F a) / Omega_0; W(I) = 0.
inline double cb_density(const SitePotential& V, const Mat2& F) {
    return V.value(deformed_diffs(F)) / kCellVolume;
}

// dW(F) = (1/Omega_0) sum_j d_j V(F a) (x) a_j.
inline Mat2 cb_stress(const SitePotential& V, const Mat2& F) {
    const DiffTuple d = V.gradient(deformed_diffs(F));
    Mat2 s = Mat2::Zero();
    for (int j = 1; j <= 6; ++j) s += at_dir(d, j) * lattice_direction(j).transpose();
    return s / kCellVolume;
}

// Sampled estimates of the global multilinear-form bounds M2, M3;
// maxima over the probe set, never global constants.
struct PotentialBounds {
    double m2 = 0.0;
    double m3 = 0.0;
    std::size_t probe_count = 0;
};

inline double spectral_norm(const Mat2& m) {
    return m.jacobiSvd().singularValues()(0);
}

inline PotentialBounds estimate_bounds(const SitePotential& V,
                                       const std::vector<DiffTuple>& probes) {
    if (probes.empty()) throw Error("estimate_bounds needs a non-empty probe set");
    PotentialBounds b;
    b.probe_count = probes.size();
    const double h = V.fd_step();
    for (const DiffTuple& g : probes) {
        const HessGrid hess = V.hessian(g);
        double s2 = 0.0;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) s2 += spectral_norm(hess[i][j]);
        b.m2 = std::max(b.m2, s2);

        // Third derivatives by central differences of the Hessian; the
        // trilinear-form norm is sampled over unit directions.
        double s3 = 0.0;
        DiffTuple gp = g;
        std::array<HessGrid, 12> dh;
        for (int k = 0; k < 6; ++k)
            for (int c = 0; c < 2; ++c) {
                const double old = gp[k][c];
                gp[k][c] = old + h;
                const HessGrid hp = V.hessian(gp);
                gp[k][c] = old - h;
                const HessGrid hm = V.hessian(gp);
                gp[k][c] = old;
                for (int i = 0; i < 6; ++i)
                    for (int j = 0; j < 6; ++j)
                        dh[2 * k + c][i][j] = (hp[i][j] - hm[i][j]) / (2.0 * h);
            }
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                for (int k = 0; k < 6; ++k) {
                    double best = 0.0;
                    for (int s = 0; s < 8; ++s) {
                        const double t = 3.14159265358979323846 * s / 8.0;
                        const Vec2 h3(std::cos(t), std::sin(t));
                        const Mat2 m =
                            dh[2 * k + 0][i][j] * h3[0] + dh[2 * k + 1][i][j] * h3[1];
                        best = std::max(best, spectral_norm(m));
                    }
                    s3 += best;
                }
        b.m3 = std::max(b.m3, s3);
    }
    return b;
}

}  // namespace grac
