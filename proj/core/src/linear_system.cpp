#include "klshell/linear_system.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace kl {

namespace {
using Scalar = SparseSymmetricSystem::Scalar;
using SpMat = Eigen::SparseMatrix<Scalar>;
using LVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
}  // namespace

SparseSymmetricSystem::SparseSymmetricSystem(int num_dofs)
    : n_(num_dofs),
      rhs_(Eigen::VectorXd::Zero(num_dofs)),
      fixed_(num_dofs, false),
      fixed_value_(num_dofs, 0.0),
      parent_(num_dofs) {
    for (int i = 0; i < n_; ++i) parent_[i] = i;
}

int SparseSymmetricSystem::representative(int dof) const {
    while (parent_[dof] != dof) dof = parent_[dof];
    return dof;
}

void SparseSymmetricSystem::fix_dof(int dof, double value) {
    const int r = representative(dof);
    fixed_[r] = true;
    fixed_value_[r] = value;
}

void SparseSymmetricSystem::tie_dofs(int master, int slave) {
    const int rm = representative(master);
    const int rs = representative(slave);
    if (rm == rs) return;
    if (fixed_[rs] && !fixed_[rm]) {
        fixed_[rm] = true;
        fixed_value_[rm] = fixed_value_[rs];
    }
    parent_[rs] = rm;
}

int SparseSymmetricSystem::count_free_dofs() const {
    int count = 0;
    for (int i = 0; i < n_; ++i)
        if (parent_[i] == i && !fixed_[i]) ++count;
    return count;
}

Eigen::SparseMatrix<double> SparseSymmetricSystem::assembled_matrix() const {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(triplets_.size());
    for (const auto& e : triplets_) t.emplace_back(e.row(), e.col(), static_cast<double>(e.value()));
    Eigen::SparseMatrix<double> K(n_, n_);
    K.setFromTriplets(t.begin(), t.end());
    return K;
}

double SparseSymmetricSystem::symmetry_error() const {
    Eigen::SparseMatrix<double> K = assembled_matrix();
    Eigen::SparseMatrix<double> D = Eigen::SparseMatrix<double>(K.transpose()) - K;
    double m = 0.0;
    for (int k = 0; k < D.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(D, k); it; ++it)
            m = std::max(m, std::abs(it.value()));
    return m;
}

void SparseSymmetricSystem::dump_matrix(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open matrix dump file " + path);
    Eigen::SparseMatrix<double> K = assembled_matrix();
    for (int k = 0; k < K.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(K, k); it; ++it)
            out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

SparseSymmetricSystem::Solution SparseSymmetricSystem::solve(const SolveOptions& options) const {
    // map full dof -> reduced index (or -1 when eliminated)
    std::vector<int> reduced(n_, -1);
    int m = 0;
    for (int i = 0; i < n_; ++i)
        if (parent_[i] == i && !fixed_[i]) reduced[i] = m++;

    std::vector<Eigen::Triplet<Scalar>> red_triplets;
    red_triplets.reserve(triplets_.size());
    LVec f = LVec::Zero(m);
    for (int i = 0; i < n_; ++i) {
        const int r = representative(i);
        if (!fixed_[r] && reduced[r] >= 0) f[reduced[r]] += static_cast<Scalar>(rhs_[i]);
    }
    for (const auto& t : triplets_) {
        const int ri = representative(t.row());
        const int rj = representative(t.col());
        const bool fi = fixed_[ri];
        const bool fj = fixed_[rj];
        if (fi && fj) continue;
        if (!fi && fj) {
            f[reduced[ri]] -= t.value() * static_cast<Scalar>(fixed_value_[rj]);
        } else if (fi && !fj) {
            // handled by the symmetric partner entry
            continue;
        } else {
            red_triplets.emplace_back(reduced[ri], reduced[rj], t.value());
        }
    }

    Solution sol;
    sol.free_dofs = m;
    sol.values = Eigen::VectorXd::Zero(n_);

    if (m > 0) {
        SpMat K(m, m);
        K.setFromTriplets(red_triplets.begin(), red_triplets.end());

        LVec diag = K.diagonal();
        Scalar dmin = std::numeric_limits<Scalar>::infinity(), dmax = 0.0;
        for (int i = 0; i < m; ++i) {
            if (diag[i] <= 0.0) {
                for (int j = 0; j < n_; ++j)
                    if (parent_[j] == j && reduced[representative(j)] == i)
                        throw std::runtime_error("singular or non-positive diagonal at dof " + std::to_string(j));
                throw std::runtime_error("singular diagonal at reduced dof " + std::to_string(i));
            }
            dmin = std::min(dmin, diag[i]);
            dmax = std::max(dmax, diag[i]);
        }
        sol.diagonal_ratio = static_cast<double>(dmax / dmin);

        LVec scale = LVec::Ones(m);
        if (options.diagonal_scaling)
            for (int i = 0; i < m; ++i) scale[i] = 1.0L / std::sqrt(diag[i]);

        SpMat Ks = scale.asDiagonal() * K * scale.asDiagonal();
        const LVec fs = scale.asDiagonal() * f;

        Eigen::SimplicialLDLT<SpMat> ldlt(Ks);
        if (ldlt.info() != Eigen::Success)
            throw std::runtime_error("direct factorization failed: system not symmetric positive definite");
        // tiny negative pivots are round-off on severely cut supports; a
        // negative pivot beyond that scale means a genuinely indefinite
        // system
        const Scalar pmin = ldlt.vectorD().minCoeff();
        const Scalar pmax = ldlt.vectorD().maxCoeff();
        if (pmin < -1e-10L * std::max(pmax, Scalar(1)))
            throw std::runtime_error("direct factorization failed: system not symmetric positive definite");

        LVec xs = ldlt.solve(fs);
        if (options.iterative_refinement) {
            const Scalar fsnorm = std::max(fs.norm(), Scalar(1e-300));
            Scalar prev = std::numeric_limits<Scalar>::infinity();
            for (int it = 0; it < 4; ++it) {
                const LVec r = fs - Ks * xs;
                const Scalar rn = r.norm();
                if (rn < 1e-18L * fsnorm || rn >= 0.5L * prev) break;
                prev = rn;
                xs += ldlt.solve(r);
            }
        }
        const LVec x = scale.asDiagonal() * xs;

        const Scalar fnorm = f.norm();
        const Scalar resid = (K * x - f).norm();
        sol.relative_residual = static_cast<double>((fnorm > 0.0L) ? resid / fnorm : resid);

        for (int i = 0; i < n_; ++i) {
            const int r = representative(i);
            sol.values[i] = fixed_[r] ? fixed_value_[r] : static_cast<double>(x[reduced[r]]);
        }
    } else {
        for (int i = 0; i < n_; ++i) sol.values[i] = fixed_value_[representative(i)];
    }
    return sol;
}

}  // namespace kl
