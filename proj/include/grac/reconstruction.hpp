#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <map>
#include <ostream>
#include <vector>

#include "grac/partition.hpp"
#include "grac/potential.hpp"

namespace grac {

// Reduced reconstruction coefficients C_{x,j} for the one-sided,
// energy-consistent ansatz: the full tensor is C_{x,j,j} = C_{x,j},
// C_{x,j,j+-1} = 1 - C_{x,j}, zero otherwise. Values are 1 on A and 2/3
// on C; interface sites carry six stored values each.
class ReconstructionParams {
public:
    ReconstructionParams(const RegionPartition& partition,
                         std::vector<std::array<double, 6>> interface_values)
        : partition_(&partition), values_(std::move(interface_values)) {
        index_.assign(partition.box().site_count(), -1);
        const auto& sites = partition.interface_sites();
        for (std::size_t k = 0; k < sites.size(); ++k)
            index_[partition.box().index(sites[k])] = static_cast<std::int64_t>(k);
    }

    // The original quasicontinuum coupling: V^i = V, i.e. C == 1 on I.
    static ReconstructionParams qce(const RegionPartition& p) {
        std::vector<std::array<double, 6>> v(p.interface_sites().size());
        for (auto& a : v) a.fill(1.0);
        return ReconstructionParams(p, std::move(v));
    }

    const RegionPartition& partition() const noexcept { return *partition_; }

    double coeff(Site x, int j) const {
        if (!partition_->box().contains(x)) return 2.0 / 3.0;  // window fallback
        switch (partition_->region(x)) {
            case Region::atomistic: return 1.0;
            case Region::continuum: return 2.0 / 3.0;
            default: return values_[interface_index(x)][wrap_dir(j) - 1];
        }
    }

    double tensor(Site x, int j, int i) const {
        const int dj = wrap_dir(j), di = wrap_dir(i);
        if (di == dj) return coeff(x, j);
        if (di == wrap_dir(dj + 1) || di == wrap_dir(dj - 1)) return 1.0 - coeff(x, j);
        return 0.0;
    }

    // R_x applied to a tuple of finite differences:
    // (R_x d)_j = C_{x,j} d_j + (1 - C_{x,j}) (d_{j-1} + d_{j+1}).
    DiffTuple reconstruct(Site x, const DiffTuple& d) const {
        DiffTuple out;
        for (int j = 1; j <= 6; ++j) {
            const double c = coeff(x, j);
            out[j - 1] = c * at_dir(d, j) + (1.0 - c) * (at_dir(d, j - 1) + at_dir(d, j + 1));
        }
        return out;
    }

    // max |C_{x,j,i}| over interface sites.
    double max_tensor_entry() const {
        double m = 1.0;
        for (const auto& a : values_)
            for (double c : a) m = std::max({m, std::abs(c), std::abs(1.0 - c)});
        return m;
    }

    std::array<double, 6>& interface_values(Site x) { return values_[interface_index(x)]; }
    const std::array<double, 6>& interface_values(Site x) const {
        return values_[interface_index(x)];
    }

    void export_csv(std::ostream& os) const {
        os << "n1,n2,j,value\n";
        for (Site x : partition_->interface_sites())
            for (int j = 1; j <= 6; ++j)
                os << x.n1 << ',' << x.n2 << ',' << j << ',' << coeff(x, j) << '\n';
    }

private:
    std::size_t interface_index(Site x) const {
        const std::int64_t k = index_[partition_->box().index(x)];
        if (k < 0) throw Error("site " + to_string(x) + " is not an interface site");
        return static_cast<std::size_t>(k);
    }

    const RegionPartition* partition_;
    std::vector<std::array<double, 6>> values_;
    std::vector<std::int64_t> index_;
};

namespace detail {

inline Region region_or_continuum(const RegionPartition& p, Site x) {
    return p.box().contains(x) ? p.region(x) : Region::continuum;
}

}  // namespace detail

// Patch-test-consistent parameters for a general admissible interface:
// C_{x,j} = 1 when x+a_j lands in A, 2/3 when it lands in C, and a per
// interface-edge free value (reciprocity C_{x,j} = C_{x+a_j,j+3} holds
// by keying on the undirected edge).
inline ReconstructionParams assign_general(const RegionPartition& p,
                                           const std::map<Edge, double>& free_values = {},
                                           double default_free = 2.0 / 3.0) {
    const auto rep = p.check_admissible();
    if (!rep.pass)
        throw InadmissiblePartition("partition fails the interface assumption at " +
                                    std::to_string(rep.violations.size()) + " site(s)");
    std::vector<std::array<double, 6>> values(p.interface_sites().size());
    std::size_t k = 0;
    for (Site x : p.interface_sites()) {
        for (int j = 1; j <= 6; ++j) {
            const Site n = x.neighbour(j);
            switch (detail::region_or_continuum(p, n)) {
                case Region::atomistic: values[k][j - 1] = 1.0; break;
                case Region::continuum: values[k][j - 1] = 2.0 / 3.0; break;
                default: {
                    const auto it = free_values.find(canonical_edge(x, j));
                    values[k][j - 1] = it == free_values.end() ? default_free : it->second;
                }
            }
        }
        ++k;
    }
    return ReconstructionParams(p, std::move(values));
}

// Patch-test-consistent parameters for the flat interface I = {x2 = 0}
// with A below: constants c2, c3 (continuum side), c5, c6 (atomistic
// side) along I, plus one free value per in-plane interface edge.
inline ReconstructionParams assign_flat(const RegionPartition& p, double c2, double c3,
                                        double c5, double c6,
                                        const std::map<Edge, double>& d_values = {},
                                        double default_d = 2.0 / 3.0) {
    if (!p.is_planar()) throw NotPlanar("assign_flat needs a planar interface");
    const auto& ifs = p.interface_sites();
    for (Site x : ifs)
        if (x.n2 != ifs.front().n2)
            throw NotPlanar("assign_flat needs the interface along the a1 axis");
    if (detail::region_or_continuum(p, ifs.front().neighbour(5)) != Region::atomistic)
        throw NotPlanar("assign_flat expects the atomistic side below the interface");

    std::vector<std::array<double, 6>> values(ifs.size());
    std::size_t k = 0;
    for (Site x : ifs) {
        for (int j : {1, 4}) {
            const auto it = d_values.find(canonical_edge(x, j));
            values[k][j - 1] = it == d_values.end() ? default_d : it->second;
        }
        values[k][1] = c2;
        values[k][2] = c3;
        values[k][4] = c5;
        values[k][5] = c6;
        ++k;
    }
    return ReconstructionParams(p, std::move(values));
}

// ---------------------------------------------------------------------
// The force-consistency constraint system over the reduced parameters.
//
// One row per (test site x in I u I- u I+, direction j in {1,2,3}):
//   -C_{x-a_{j-1},j} + C_{x-a_j,j} - C_{x-a_{j+1},j}
//   +C_{x-a_{j+2},j+3} - C_{x-a_{j+3},j+3} + C_{x-a_{j+4},j+3}
//   +C_{x,j} - C_{x,j+3} = 0,
// with parameters on A (=1) and C (=2/3) moved to the right-hand side.

class PatchConstraintSystem {
public:
    explicit PatchConstraintSystem(const RegionPartition& p) : partition_(&p) {
        const IndexBox& box = p.box();
        col_.assign(6 * box.site_count(), -1);
        for (Site x : p.interface_sites())
            for (int j = 1; j <= 6; ++j) {
                col_[slot(x, j)] = static_cast<int>(unknowns_.size());
                unknowns_.push_back({x, j});
            }

        // Test sites: I plus every A/C site adjacent to I, window margin
        // permitting (all referenced sites must carry a known class).
        std::vector<char> seen(box.site_count(), 0);
        std::vector<Site> tests;
        for (Site x : p.interface_sites()) {
            for (int j = 0; j <= 6; ++j) {
                const Site t = j == 0 ? x : x.neighbour(j);
                if (!box.contains(t) || box.margin(t) < 1) continue;
                if (seen[box.index(t)]) continue;
                seen[box.index(t)] = 1;
                tests.push_back(t);
            }
        }

        matrix_ = Eigen::MatrixXd::Zero(3 * static_cast<Eigen::Index>(tests.size()),
                                        static_cast<Eigen::Index>(unknowns_.size()));
        rhs_ = Eigen::VectorXd::Zero(matrix_.rows());
        Eigen::Index r = 0;
        for (Site x : tests)
            for (int j = 1; j <= 3; ++j, ++r) {
                add_term(r, x.neighbour(j + 2), j, -1.0);      // x - a_{j-1}
                add_term(r, x.neighbour(j + 3), j, +1.0);      // x - a_j
                add_term(r, x.neighbour(j + 4), j, -1.0);      // x - a_{j+1}
                add_term(r, x.neighbour(j + 5), j + 3, +1.0);  // x - a_{j+2}
                add_term(r, x.neighbour(j), j + 3, -1.0);      // x - a_{j+3}
                add_term(r, x.neighbour(j + 1), j + 3, +1.0);  // x - a_{j+4}
                add_term(r, x, j, +1.0);
                add_term(r, x, j + 3, -1.0);
            }
        rows_ = r;
        test_sites_ = std::move(tests);
    }

    const RegionPartition& partition() const noexcept { return *partition_; }
    const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
    const Eigen::VectorXd& rhs() const noexcept { return rhs_; }
    const std::vector<std::pair<Site, int>>& unknowns() const noexcept { return unknowns_; }
    const std::vector<Site>& test_sites() const noexcept { return test_sites_; }

    int column(Site x, int j) const { return col_[slot(x, j)]; }

    Eigen::VectorXd vector_from(const ReconstructionParams& r) const {
        Eigen::VectorXd v(unknowns_.size());
        for (std::size_t k = 0; k < unknowns_.size(); ++k)
            v[static_cast<Eigen::Index>(k)] = r.coeff(unknowns_[k].first, unknowns_[k].second);
        return v;
    }

    ReconstructionParams params_from(const Eigen::VectorXd& v) const {
        std::vector<std::array<double, 6>> values(partition_->interface_sites().size());
        std::size_t s = 0;
        for (Site x : partition_->interface_sites()) {
            for (int j = 1; j <= 6; ++j)
                values[s][j - 1] = v[column(x, j)];
            ++s;
        }
        return ReconstructionParams(*partition_, std::move(values));
    }

    double residual(const Eigen::VectorXd& v) const {
        return (matrix_ * v - rhs_).template lpNorm<Eigen::Infinity>();
    }

private:
    std::int64_t slot(Site x, int j) const {
        return (wrap_dir(j) - 1) * partition_->box().site_count() +
               partition_->box().index(x);
    }

    void add_term(Eigen::Index row, Site z, int m, double sign) {
        switch (detail::region_or_continuum(*partition_, z)) {
            case Region::atomistic: rhs_[row] -= sign * 1.0; return;
            case Region::continuum: rhs_[row] -= sign * (2.0 / 3.0); return;
            default: matrix_(row, column(z, m)) += sign;
        }
    }

    const RegionPartition* partition_;
    std::vector<std::pair<Site, int>> unknowns_;
    std::vector<Site> test_sites_;
    std::vector<int> col_;
    Eigen::MatrixXd matrix_;
    Eigen::VectorXd rhs_;
    Eigen::Index rows_ = 0;
};

struct ConstraintSolution {
    Eigen::VectorXd particular;  // minimum-norm solution
    Eigen::MatrixXd nullspace;   // orthonormal basis, one column per dimension
    int dimension = 0;
    int rank = 0;
    double residual = 0.0;
};

// Rank-revealing solve of the constraint system; singular values below
// 1e-10 (relative to the largest) count as zero.
inline ConstraintSolution solve_constraints(const PatchConstraintSystem& sys) {
    const Eigen::MatrixXd& A = sys.matrix();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = sv.size() ? sv(0) * 1e-10 : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;

    ConstraintSolution sol;
    sol.rank = rank;
    sol.dimension = static_cast<int>(A.cols()) - rank;

    Eigen::VectorXd uy = svd.matrixU().transpose() * sys.rhs();
    Eigen::VectorXd z = Eigen::VectorXd::Zero(A.cols());
    for (int i = 0; i < rank; ++i) z(i) = uy(i) / sv(i);
    sol.particular = svd.matrixV() * z;
    sol.nullspace = svd.matrixV().rightCols(sol.dimension);
    sol.residual = sys.residual(sol.particular);
    if (sol.residual > 1e-9 * (1.0 + sys.rhs().lpNorm<Eigen::Infinity>())) {
        std::string msg = "constraint system infeasible; residual " +
                          std::to_string(sol.residual) + " at rows:";
        const Eigen::VectorXd r = A * sol.particular - sys.rhs();
        for (Eigen::Index i = 0; i < r.size() && msg.size() < 400; ++i)
            if (std::abs(r(i)) > 1e-9) msg += " " + std::to_string(i);
        throw Infeasible(msg);
    }
    return sol;
}

}  // namespace grac
