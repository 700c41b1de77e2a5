#pragma once

#include <vector>
#include <utility>

namespace kl {

/// Row-major table of basis values and derivatives at one parameter:
/// row d holds the d-th derivatives of the p+1 functions that are nonzero
/// on the containing knot span.
struct BasisEval1D {
    int span = 0;        ///< knot span index, functions span-p..span are nonzero
    int degree = 0;
    std::vector<double> data;  ///< (order+1) x (degree+1), row-major

    int orders() const { return static_cast<int>(data.size()) / (degree + 1); }
    double value(int order, int local) const { return data[order * (degree + 1) + local]; }
    int first_function() const { return span - degree; }
};

/// Open (clamped) knot vector of a univariate B-spline basis.
///
/// Knots are non-decreasing; with n = knots.size() - degree - 1 basis
/// functions. Construction validates monotonicity and n >= 1.
class KnotVector {
public:
    KnotVector() = default;
    KnotVector(std::vector<double> knots, int degree);

    /// Uniform open knot vector on [a, b] with `elements` equal spans.
    static KnotVector uniform_open(int degree, int elements, double a = 0.0, double b = 1.0);

    int degree() const { return degree_; }
    int num_functions() const { return static_cast<int>(knots_.size()) - degree_ - 1; }
    const std::vector<double>& knots() const { return knots_; }
    double domain_min() const { return knots_[degree_]; }
    double domain_max() const { return knots_[knots_.size() - degree_ - 1]; }
    bool is_open() const;

    /// Distinct knot values in the open domain interior plus the two ends.
    std::vector<double> breakpoints() const;
    int num_elements() const { return static_cast<int>(breakpoints().size()) - 1; }

    /// Span index k with knots[k] <= u < knots[k+1] (right end maps to the
    /// last nonempty span). Throws std::domain_error outside the domain.
    int find_span(double u) const;

    /// Values and derivatives up to `order` of the p+1 nonzero functions at u.
    /// Orders above the degree come back as zeros.
    BasisEval1D evaluate(double u, int order) const;

    /// Greville abscissae (knot averages), one per basis function.
    std::vector<double> greville() const;

    bool operator==(const KnotVector& other) const = default;

private:
    std::vector<double> knots_;
    int degree_ = 0;
};

/// Inserts `new_knots` (each strictly inside the domain, multiplicities
/// allowed up to p+1 total) and returns the refined knot vector together
/// with the coefficient transfer matrix T (dense, n_fine x n_coarse,
/// row-major) such that fine = T * coarse reproduces the spline exactly.
std::pair<KnotVector, std::vector<double>> insert_knots(const KnotVector& kv,
                                                        const std::vector<double>& new_knots);

/// Knot vector of the degree-reduced (p-2) interface space: drops the first
/// and last two knots of an open degree-p vector. Requires p >= 2.
KnotVector reduced_knot_vector(const KnotVector& kv);

}  // namespace kl
