#include "klshell/knots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kl {

KnotVector::KnotVector(std::vector<double> knots, int degree)
    : knots_(std::move(knots)), degree_(degree) {
    if (degree_ < 0) throw std::invalid_argument("knot vector: negative degree");
    if (static_cast<int>(knots_.size()) < degree_ + 2)
        throw std::invalid_argument("knot vector: too few knots for degree " + std::to_string(degree_));
    for (std::size_t i = 1; i < knots_.size(); ++i)
        if (knots_[i] < knots_[i - 1])
            throw std::invalid_argument("knot vector: knots must be non-decreasing");
    if (domain_max() <= domain_min())
        throw std::invalid_argument("knot vector: empty parametric domain");
}

KnotVector KnotVector::uniform_open(int degree, int elements, double a, double b) {
    if (elements < 1) throw std::invalid_argument("uniform_open: need at least one element");
    std::vector<double> k;
    k.reserve(2 * (degree + 1) + elements - 1);
    for (int i = 0; i <= degree; ++i) k.push_back(a);
    for (int i = 1; i < elements; ++i) k.push_back(a + (b - a) * i / elements);
    for (int i = 0; i <= degree; ++i) k.push_back(b);
    return KnotVector(std::move(k), degree);
}

bool KnotVector::is_open() const {
    for (int i = 0; i <= degree_; ++i) {
        if (knots_[i] != knots_[0]) return false;
        if (knots_[knots_.size() - 1 - i] != knots_.back()) return false;
    }
    return true;
}

std::vector<double> KnotVector::breakpoints() const {
    std::vector<double> bp;
    const double lo = domain_min();
    const double hi = domain_max();
    for (std::size_t i = degree_; i + degree_ < knots_.size(); ++i) {
        const double v = knots_[i];
        if (v < lo || v > hi) continue;
        if (bp.empty() || v > bp.back()) bp.push_back(v);
    }
    return bp;
}

int KnotVector::find_span(double u) const {
    const int n = num_functions();
    const double lo = domain_min();
    const double hi = domain_max();
    const double tol = 1e-12 * std::max(1.0, std::abs(hi) + std::abs(lo));
    if (u < lo - tol || u > hi + tol)
        throw std::domain_error("parameter " + std::to_string(u) + " outside knot domain [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]");
    u = std::clamp(u, lo, hi);
    if (u >= knots_[n]) {
        // right end: last span with positive length
        int s = n - 1;
        while (s > degree_ && knots_[s + 1] <= knots_[s]) --s;
        return s;
    }
    int low = degree_, high = n;
    while (high - low > 1) {
        const int mid = (low + high) / 2;
        if (u < knots_[mid]) high = mid; else low = mid;
    }
    return low;
}

// Derivatives of the nonzero basis functions, The NURBS Book alg. A2.3.
BasisEval1D KnotVector::evaluate(double u, int order) const {
    const int p = degree_;
    const int span = find_span(u);
    u = std::clamp(u, domain_min(), domain_max());

    BasisEval1D out;
    out.span = span;
    out.degree = p;
    out.data.assign(static_cast<std::size_t>(order + 1) * (p + 1), 0.0);

    std::vector<double> ndu((p + 1) * (p + 1));
    std::vector<double> left(p + 1), right(p + 1);
    auto NDU = [&](int i, int j) -> double& { return ndu[i * (p + 1) + j]; };

    NDU(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = u - knots_[span + 1 - j];
        right[j] = knots_[span + j] - u;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            NDU(j, r) = right[r + 1] + left[j - r];
            const double temp = NDU(r, j - 1) / NDU(j, r);
            NDU(r, j) = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        NDU(j, j) = saved;
    }
    for (int j = 0; j <= p; ++j) out.data[j] = NDU(j, p);

    const int nd = std::min(order, p);
    std::vector<double> a(2 * (p + 1));
    auto A = [&](int i, int j) -> double& { return a[i * (p + 1) + j]; };

    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        A(0, 0) = 1.0;
        for (int k = 1; k <= nd; ++k) {
            double d = 0.0;
            const int rk = r - k, pk = p - k;
            if (r >= k) {
                A(s2, 0) = A(s1, 0) / NDU(pk + 1, rk);
                d = A(s2, 0) * NDU(rk, pk);
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                A(s2, j) = (A(s1, j) - A(s1, j - 1)) / NDU(pk + 1, rk + j);
                d += A(s2, j) * NDU(rk + j, pk);
            }
            if (r <= pk) {
                A(s2, k) = -A(s1, k - 1) / NDU(pk + 1, r);
                d += A(s2, k) * NDU(r, pk);
            }
            out.data[k * (p + 1) + r] = d;
            std::swap(s1, s2);
        }
    }
    double r = p;
    for (int k = 1; k <= nd; ++k) {
        for (int j = 0; j <= p; ++j) out.data[k * (p + 1) + j] *= r;
        r *= (p - k);
    }
    return out;
}

std::vector<double> KnotVector::greville() const {
    std::vector<double> g(num_functions());
    for (int i = 0; i < num_functions(); ++i) {
        double s = 0.0;
        for (int j = 1; j <= degree_; ++j) s += knots_[i + j];
        g[i] = (degree_ > 0) ? s / degree_ : 0.5 * (knots_[i] + knots_[i + 1]);
    }
    return g;
}

namespace {

int knot_multiplicity(const std::vector<double>& knots, double u) {
    int m = 0;
    for (double k : knots)
        if (k == u) ++m;
    return m;
}

}  // namespace

std::pair<KnotVector, std::vector<double>> insert_knots(const KnotVector& kv,
                                                        const std::vector<double>& new_knots) {
    std::vector<double> knots = kv.knots();
    const int p = kv.degree();
    int n = kv.num_functions();

    // transfer starts as identity, grows one row per inserted knot
    std::vector<double> transfer(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) transfer[static_cast<std::size_t>(i) * n + i] = 1.0;
    const int n_coarse = n;

    std::vector<double> sorted = new_knots;
    std::sort(sorted.begin(), sorted.end());

    for (double u : sorted) {
        if (u <= kv.domain_min() || u >= kv.domain_max())
            throw std::invalid_argument("insert_knots: new knot must lie strictly inside the domain");
        if (knot_multiplicity(knots, u) >= p + 1)
            throw std::invalid_argument("insert_knots: knot multiplicity would exceed degree+1");

        // Boehm single insertion: row i of the new coefficients is
        // alpha_i * old_i + (1 - alpha_i) * old_{i-1}.
        int span = 0;
        while (span + 1 < static_cast<int>(knots.size()) && knots[span + 1] <= u) ++span;

        std::vector<double> next(static_cast<std::size_t>(n + 1) * n_coarse, 0.0);
        for (int i = 0; i <= n; ++i) {
            double alpha;
            if (i <= span - p) alpha = 1.0;
            else if (i > span) alpha = 0.0;
            else alpha = (u - knots[i]) / (knots[i + p] - knots[i]);
            for (int j = 0; j < n_coarse; ++j) {
                double v = 0.0;
                if (alpha != 0.0 && i < n) v += alpha * transfer[static_cast<std::size_t>(i) * n_coarse + j];
                if (alpha != 1.0 && i > 0) v += (1.0 - alpha) * transfer[static_cast<std::size_t>(i - 1) * n_coarse + j];
                next[static_cast<std::size_t>(i) * n_coarse + j] = v;
            }
        }
        transfer = std::move(next);
        knots.insert(std::upper_bound(knots.begin(), knots.end(), u), u);
        ++n;
    }
    return {KnotVector(std::move(knots), p), std::move(transfer)};
}

KnotVector reduced_knot_vector(const KnotVector& kv) {
    const int p = kv.degree();
    if (p < 2)
        throw std::invalid_argument("reduced_knot_vector: interface degree must be at least 2");
    if (!kv.is_open())
        throw std::invalid_argument("reduced_knot_vector: expected an open knot vector");
    const auto& k = kv.knots();
    std::vector<double> r(k.begin() + 2, k.end() - 2);
    return KnotVector(std::move(r), p - 2);
}

}  // namespace kl
