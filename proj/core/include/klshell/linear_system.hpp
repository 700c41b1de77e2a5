#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace kl {

/// Assembled symmetric stiffness and load with constraint bookkeeping.
/// Fixed dofs are eliminated by condensation, linear ties (cross-points) by
/// master-slave substitution; the reduced matrix is solved by a direct
/// symmetric factorization after diagonal scaling. Entries are accumulated
/// and factored in extended precision: the super-penalty terms scale like
/// h^{-beta} and their round-off would otherwise floor the attainable
/// accuracy on fine meshes.
class SparseSymmetricSystem {
public:
    using Scalar = long double;

    explicit SparseSymmetricSystem(int num_dofs);

    int num_dofs() const { return n_; }

    void add(int row, int col, double value) { triplets_.emplace_back(row, col, value); }
    void add(int row, int col, Scalar value) { triplets_.emplace_back(row, col, value); }
    void add_rhs(int row, double value) { rhs_[row] += value; }

    /// Prescribes dof = value (later calls overwrite earlier ones).
    void fix_dof(int dof, double value);
    bool is_fixed(int dof) const { return fixed_[dof]; }

    /// Ties slave = master; chains are resolved, cycles collapse to one
    /// representative. A tie to a fixed dof propagates the fixed value.
    void tie_dofs(int master, int slave);

    struct SolveOptions {
        bool diagonal_scaling = true;
        bool iterative_refinement = true;
    };

    struct Solution {
        Eigen::VectorXd values;       ///< full-length coefficient vector
        double relative_residual = 0.0;
        double diagonal_ratio = 0.0;  ///< max/min stiffness diagonal, conditioning proxy
        int free_dofs = 0;
    };

    /// Throws std::runtime_error naming the dof on a structurally singular
    /// diagonal, or on factorization breakdown.
    Solution solve(const SolveOptions& options) const;
    Solution solve() const { return solve(SolveOptions{}); }

    /// Number of dofs that remain after constraint elimination.
    int count_free_dofs() const;

    /// Max absolute asymmetry of the assembled (pre-constraint) matrix.
    double symmetry_error() const;

    /// Assembled (pre-constraint) matrix in double precision.
    Eigen::SparseMatrix<double> assembled_matrix() const;

    /// Coordinate-format text dump "i j value" of the assembled matrix.
    void dump_matrix(const std::string& path) const;

    const Eigen::VectorXd& rhs() const { return rhs_; }

private:
    int n_;
    std::vector<Eigen::Triplet<Scalar>> triplets_;
    Eigen::VectorXd rhs_;
    std::vector<bool> fixed_;
    std::vector<double> fixed_value_;
    std::vector<int> parent_;  ///< union-find over ties

    int representative(int dof) const;
};

}  // namespace kl
