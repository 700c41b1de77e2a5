#pragma once

#include <vector>

#include "klshell/knots.hpp"
#include "klshell/types.hpp"

namespace kl {

/// Values and parametric derivatives of the nonzero tensor-product basis
/// functions at one point. Derivative rows use the triangular layout of
/// deriv_index(); curves only populate the pure-xi derivatives.
struct TensorBasisEval {
    int dim = 2;
    int span[2] = {0, 0};
    int count[2] = {1, 1};  ///< nonzero functions per direction (p+1)
    int order = 0;
    std::vector<double> data;  ///< rows: derivative slot, cols: local function

    int num_local() const { return count[0] * count[1]; }
    double value(int deriv, int local) const { return data[static_cast<std::size_t>(deriv) * num_local() + local]; }
    double& value(int deriv, int local) { return data[static_cast<std::size_t>(deriv) * num_local() + local]; }

    /// Local function (i, j) relative to the first nonzero function.
    int local_index(int i, int j) const { return j * count[0] + i; }
};

/// Tensor-product B-spline/NURBS space in one or two parametric directions.
/// Weights, when present, are strictly positive (one per control index) and
/// evaluation applies the rational quotient rules up to derivative order 3.
class SplineSpace {
public:
    explicit SplineSpace(KnotVector kx);
    SplineSpace(KnotVector kx, KnotVector ky);
    SplineSpace(KnotVector kx, std::vector<double> weights);
    SplineSpace(KnotVector kx, KnotVector ky, std::vector<double> weights);

    int dim() const { return static_cast<int>(kvs_.size()); }
    bool rational() const { return !weights_.empty(); }
    const std::vector<double>& weights() const { return weights_; }
    const KnotVector& knot_vector(int dir) const { return kvs_[dir]; }
    int degree(int dir) const { return kvs_[dir].degree(); }

    int num_functions(int dir) const { return kvs_[dir].num_functions(); }
    int num_functions() const;

    /// Flat function index, xi fastest: flat = j * n_xi + i.
    int flat_index(int i, int j = 0) const { return j * num_functions(0) + i; }

    std::vector<double> breakpoints(int dir) const { return kvs_[dir].breakpoints(); }
    int num_elements(int dir) const { return kvs_[dir].num_elements(); }
    int num_elements() const;

    TensorBasisEval evaluate(double u, int order) const;            ///< curves
    TensorBasisEval evaluate(const Vec2& uv, int order) const;      ///< surfaces

    /// Global flat indices of the nonzero functions of an evaluation, in
    /// local order.
    std::vector<int> global_indices(const TensorBasisEval& eval) const;

    /// Inserts knots per direction; pass an empty list to leave a direction
    /// untouched. Weights are carried through the same transfer.
    struct Refined;
    Refined h_refined(const std::vector<std::vector<double>>& new_knots) const;

    /// One dyadic refinement (midpoint of every nonempty span, all directions).
    Refined dyadic_refined() const;

    bool operator==(const SplineSpace& other) const = default;

private:
    std::vector<KnotVector> kvs_;
    std::vector<double> weights_;

    void check_weights() const;
};

struct SplineSpace::Refined {
    SplineSpace space;
    std::vector<std::vector<double>> transfer;  ///< per-direction, row-major n_fine x n_coarse
};

}  // namespace kl
