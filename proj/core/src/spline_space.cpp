#include "klshell/spline_space.hpp"

#include <cmath>
#include <stdexcept>

namespace kl {

SplineSpace::SplineSpace(KnotVector kx) { kvs_.push_back(std::move(kx)); }

SplineSpace::SplineSpace(KnotVector kx, KnotVector ky) {
    kvs_.push_back(std::move(kx));
    kvs_.push_back(std::move(ky));
}

SplineSpace::SplineSpace(KnotVector kx, std::vector<double> weights) : weights_(std::move(weights)) {
    kvs_.push_back(std::move(kx));
    check_weights();
}

SplineSpace::SplineSpace(KnotVector kx, KnotVector ky, std::vector<double> weights)
    : weights_(std::move(weights)) {
    kvs_.push_back(std::move(kx));
    kvs_.push_back(std::move(ky));
    check_weights();
}

void SplineSpace::check_weights() const {
    if (static_cast<int>(weights_.size()) != num_functions())
        throw std::invalid_argument("spline space: weight count does not match basis dimension");
    for (double w : weights_)
        if (!(w > 0.0)) throw std::invalid_argument("spline space: weights must be strictly positive");
}

int SplineSpace::num_functions() const {
    int n = 1;
    for (const auto& kv : kvs_) n *= kv.num_functions();
    return n;
}

int SplineSpace::num_elements() const {
    int n = 1;
    for (const auto& kv : kvs_) n *= kv.num_elements();
    return n;
}

namespace {

// Binomial coefficients up to the order-3 derivatives we support.
constexpr double kBinom[4][4] = {
    {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};

// Rational correction in place: data holds derivatives of w_f * B_f; divide
// through by the weight function W via the Leibniz inversion
//   R^(d) = (N^(d) - sum_{e<d} C(d,e) R^(e) W^(d-e)) / W.
void rationalize(TensorBasisEval& eval, const std::vector<double>& wders) {
    const int n = eval.num_local();
    const double w0 = wders[0];
    if (eval.dim == 1) {
        for (int k = 0; k <= eval.order; ++k) {
            for (int f = 0; f < n; ++f) {
                double v = eval.value(k, f);
                for (int e = 0; e < k; ++e) v -= kBinom[k][e] * eval.value(e, f) * wders[k - e];
                eval.value(k, f) = v / w0;
            }
        }
        return;
    }
    for (int o = 0; o <= eval.order; ++o) {
        for (int a = o; a >= 0; --a) {
            const int b = o - a;
            const int d = deriv_index(a, b);
            for (int f = 0; f < n; ++f) {
                double v = eval.value(d, f);
                for (int c = 0; c <= a; ++c)
                    for (int e = 0; e <= b; ++e) {
                        if (c == a && e == b) continue;
                        v -= kBinom[a][c] * kBinom[b][e] * eval.value(deriv_index(c, e), f) *
                             wders[deriv_index(a - c, b - e)];
                    }
                eval.value(d, f) = v / w0;
            }
        }
    }
}

}  // namespace

TensorBasisEval SplineSpace::evaluate(double u, int order) const {
    if (dim() != 1) throw std::logic_error("curve evaluation on a surface space");
    if (order > 3) throw std::invalid_argument("derivative order capped at 3");
    const BasisEval1D bu = kvs_[0].evaluate(u, order);

    TensorBasisEval eval;
    eval.dim = 1;
    eval.order = order;
    eval.span[0] = bu.span;
    eval.count[0] = degree(0) + 1;
    eval.count[1] = 1;
    eval.data.assign(static_cast<std::size_t>(order + 1) * eval.count[0], 0.0);
    for (int k = 0; k <= order; ++k)
        for (int i = 0; i < eval.count[0]; ++i) eval.value(k, i) = bu.value(k, i);

    if (rational()) {
        const int first = bu.first_function();
        std::vector<double> wders(order + 1, 0.0);
        for (int k = 0; k <= order; ++k)
            for (int i = 0; i < eval.count[0]; ++i) wders[k] += weights_[first + i] * eval.value(k, i);
        for (int k = 0; k <= order; ++k)
            for (int i = 0; i < eval.count[0]; ++i) eval.value(k, i) *= weights_[first + i];
        rationalize(eval, wders);
    }
    return eval;
}

TensorBasisEval SplineSpace::evaluate(const Vec2& uv, int order) const {
    if (dim() != 2) throw std::logic_error("surface evaluation on a curve space");
    if (order > 3) throw std::invalid_argument("derivative order capped at 3");
    const BasisEval1D bu = kvs_[0].evaluate(uv[0], order);
    const BasisEval1D bv = kvs_[1].evaluate(uv[1], order);

    TensorBasisEval eval;
    eval.dim = 2;
    eval.order = order;
    eval.span[0] = bu.span;
    eval.span[1] = bv.span;
    eval.count[0] = degree(0) + 1;
    eval.count[1] = degree(1) + 1;
    const int n = eval.num_local();
    eval.data.assign(static_cast<std::size_t>(num_derivs_2d(order)) * n, 0.0);

    for (int o = 0; o <= order; ++o)
        for (int a = o; a >= 0; --a) {
            const int b = o - a;
            const int d = deriv_index(a, b);
            for (int j = 0; j < eval.count[1]; ++j)
                for (int i = 0; i < eval.count[0]; ++i)
                    eval.value(d, eval.local_index(i, j)) = bu.value(a, i) * bv.value(b, j);
        }

    if (rational()) {
        const int fi = bu.first_function();
        const int fj = bv.first_function();
        std::vector<double> local_w(n);
        for (int j = 0; j < eval.count[1]; ++j)
            for (int i = 0; i < eval.count[0]; ++i)
                local_w[eval.local_index(i, j)] = weights_[flat_index(fi + i, fj + j)];

        std::vector<double> wders(num_derivs_2d(order), 0.0);
        for (int d = 0; d < num_derivs_2d(order); ++d)
            for (int f = 0; f < n; ++f) wders[d] += local_w[f] * eval.value(d, f);
        for (int d = 0; d < num_derivs_2d(order); ++d)
            for (int f = 0; f < n; ++f) eval.value(d, f) *= local_w[f];
        rationalize(eval, wders);
    }
    return eval;
}

std::vector<int> SplineSpace::global_indices(const TensorBasisEval& eval) const {
    std::vector<int> idx(eval.num_local());
    const int fi = eval.span[0] - degree(0);
    if (dim() == 1) {
        for (int i = 0; i < eval.count[0]; ++i) idx[i] = fi + i;
        return idx;
    }
    const int fj = eval.span[1] - degree(1);
    for (int j = 0; j < eval.count[1]; ++j)
        for (int i = 0; i < eval.count[0]; ++i) idx[eval.local_index(i, j)] = flat_index(fi + i, fj + j);
    return idx;
}

SplineSpace::Refined SplineSpace::h_refined(const std::vector<std::vector<double>>& new_knots) const {
    if (static_cast<int>(new_knots.size()) != dim())
        throw std::invalid_argument("h_refined: one knot list per direction required");

    std::vector<KnotVector> fine;
    std::vector<std::vector<double>> transfer;
    for (int d = 0; d < dim(); ++d) {
        auto [kv, t] = insert_knots(kvs_[d], new_knots[d]);
        fine.push_back(std::move(kv));
        transfer.push_back(std::move(t));
    }

    std::vector<double> w;
    if (rational()) {
        // weights follow the homogeneous-coordinate transfer
        const int n0c = kvs_[0].num_functions();
        const int n0f = fine[0].num_functions();
        if (dim() == 1) {
            w.assign(n0f, 0.0);
            for (int i = 0; i < n0f; ++i)
                for (int k = 0; k < n0c; ++k) w[i] += transfer[0][static_cast<std::size_t>(i) * n0c + k] * weights_[k];
        } else {
            const int n1c = kvs_[1].num_functions();
            const int n1f = fine[1].num_functions();
            std::vector<double> tmp(static_cast<std::size_t>(n0f) * n1c, 0.0);
            for (int j = 0; j < n1c; ++j)
                for (int i = 0; i < n0f; ++i)
                    for (int k = 0; k < n0c; ++k)
                        tmp[static_cast<std::size_t>(j) * n0f + i] +=
                            transfer[0][static_cast<std::size_t>(i) * n0c + k] * weights_[static_cast<std::size_t>(j) * n0c + k];
            w.assign(static_cast<std::size_t>(n0f) * n1f, 0.0);
            for (int j = 0; j < n1f; ++j)
                for (int l = 0; l < n1c; ++l) {
                    const double t = transfer[1][static_cast<std::size_t>(j) * n1c + l];
                    if (t == 0.0) continue;
                    for (int i = 0; i < n0f; ++i)
                        w[static_cast<std::size_t>(j) * n0f + i] += t * tmp[static_cast<std::size_t>(l) * n0f + i];
                }
        }
    }

    SplineSpace space = (dim() == 1)
                            ? (w.empty() ? SplineSpace(fine[0]) : SplineSpace(fine[0], std::move(w)))
                            : (w.empty() ? SplineSpace(fine[0], fine[1])
                                         : SplineSpace(fine[0], fine[1], std::move(w)));
    return {std::move(space), std::move(transfer)};
}

SplineSpace::Refined SplineSpace::dyadic_refined() const {
    std::vector<std::vector<double>> mids(dim());
    for (int d = 0; d < dim(); ++d) {
        const auto bp = breakpoints(d);
        for (std::size_t i = 0; i + 1 < bp.size(); ++i) mids[d].push_back(0.5 * (bp[i] + bp[i + 1]));
    }
    return h_refined(mids);
}

}  // namespace kl
