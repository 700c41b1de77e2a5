#include "doctest.h"

#include <cmath>
#include <random>

#include "klshell/trimming.hpp"

using namespace kl;

namespace {

SplineSpace unit_square(int degree, int elements) {
    return SplineSpace(KnotVector::uniform_open(degree, elements), KnotVector::uniform_open(degree, elements));
}

// parabola eta = xi^2 as a quadratic Bezier: (0,0), (1/2,0), (1,1)
ParamCurve parabola() { return ParamCurve::quadratic(Vec2(0, 0), Vec2(0.5, 0), Vec2(1, 1)); }

}  // namespace

TEST_SUITE_BEGIN("trimming");

TEST_CASE("no curves leaves everything active") {
    TrimmedDomain dom(unit_square(2, 4));
    for (int e = 0; e < dom.num_elements(); ++e) CHECK(dom.label(e) == CellLabel::Inside);
    CHECK(static_cast<int>(dom.active_functions().size()) == 36);
    CHECK(dom.kept_area(gauss_rule(3)) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("vertical line on a 4x4 mesh cuts exactly one column") {
    // traveling up, the left of the curve is xi < 0.3
    TrimCurve tc{ParamCurve::line(Vec2(0.3, 0.0), Vec2(0.3, 1.0)), true};
    TrimmedDomain dom(unit_square(1, 4), {tc});
    for (int ej = 0; ej < 4; ++ej) {
        CHECK(dom.label(0, ej) == CellLabel::Inside);
        CHECK(dom.label(1, ej) == CellLabel::Cut);
        CHECK(dom.label(2, ej) == CellLabel::Outside);
        CHECK(dom.label(3, ej) == CellLabel::Outside);
    }
    CHECK(dom.kept_area(gauss_rule(3)) == doctest::Approx(0.3).epsilon(1e-13));

    // flipping the orientation flag keeps the complement
    TrimCurve rc{tc.curve, false};
    TrimmedDomain comp(unit_square(1, 4), {rc});
    CHECK(comp.kept_area(gauss_rule(3)) == doctest::Approx(0.7).epsilon(1e-13));
    for (int ej = 0; ej < 4; ++ej) CHECK(comp.label(0, ej) == CellLabel::Outside);
}

TEST_CASE("parabola classification matches a Monte-Carlo membership oracle") {
    // keep eta > xi^2: traveling from (0,0) to (1,1) the region lies left
    TrimCurve tc{parabola(), true};
    TrimmedDomain dom(unit_square(2, 8), {tc});
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    const int samples_per_cell = 8000;
    for (int e = 0; e < dom.num_elements(); ++e) {
        Vec2 lo, hi;
        dom.element_bounds(e, lo, hi);
        int in = 0;
        for (int s = 0; s < samples_per_cell; ++s) {
            const double x = lo[0] + (hi[0] - lo[0]) * dist(rng);
            const double y = lo[1] + (hi[1] - lo[1]) * dist(rng);
            if (y > x * x) ++in;
        }
        if (in == samples_per_cell) {
            CHECK(dom.label(e) == CellLabel::Inside);
        } else if (in == 0) {
            CHECK(dom.label(e) == CellLabel::Outside);
        } else {
            CHECK(dom.label(e) == CellLabel::Cut);
        }
    }
}

TEST_CASE("gridline intersection") {
    SUBCASE("diagonal line") {
        ParamCurve c = ParamCurve::line(Vec2(0, 0), Vec2(1, 1));
        const auto r = c.axis_crossings(0, 0.5);
        REQUIRE(r.size() == 1);
        CHECK(r[0] == doctest::Approx(0.5).epsilon(1e-13));
    }
    SUBCASE("quadratic bezier: eta(t) = 2t(1-t) crossings") {
        ParamCurve c = ParamCurve::quadratic(Vec2(0, 0), Vec2(0.5, 1), Vec2(1, 0));
        // 2t(1-t) = 1/4 has the roots 1/2 +- sqrt(2)/4
        const auto r = c.axis_crossings(1, 0.25);
        REQUIRE(r.size() == 2);
        CHECK(r[0] == doctest::Approx(0.5 - std::sqrt(2.0) / 4).epsilon(1e-12));
        CHECK(r[1] == doctest::Approx(0.5 + std::sqrt(2.0) / 4).epsilon(1e-12));
        for (double t : r) CHECK(std::abs(c.point(t)[1] - 0.25) < 1e-12);
    }
    SUBCASE("line outside the bounding box") {
        ParamCurve c = ParamCurve::line(Vec2(0.1, 0.1), Vec2(0.4, 0.2));
        CHECK(c.axis_crossings(0, 0.9).empty());
    }
    SUBCASE("tangency along a knot line is rejected") {
        ParamCurve c = ParamCurve::line(Vec2(0.5, 0.0), Vec2(0.5, 1.0));
        CHECK_THROWS(c.axis_crossings(0, 0.5));
    }
}

TEST_CASE("straight chord areas are exact") {
    SUBCASE("trapezoid below a slanted chord") {
        // chord from (0, 0.2) to (1, 0.6), keep below (left of travel right-to-left)
        TrimCurve tc{ParamCurve::line(Vec2(1.0, 0.6), Vec2(0.0, 0.2)), true};
        auto cells = reparametrize_cut_element({tc}, Vec2(0, 0), Vec2(1, 1));
        double area = 0.0;
        for (const auto& c : cells) area += c.area(gauss_rule(3));
        CHECK(std::abs(area - 0.4) < 1e-13);
    }
    SUBCASE("corner triangle") {
        TrimCurve tc{ParamCurve::line(Vec2(0.5, 0.0), Vec2(0.0, 0.5)), true};
        auto cells = reparametrize_cut_element({tc}, Vec2(0, 0), Vec2(1, 1));
        double area = 0.0;
        for (const auto& c : cells) area += c.area(gauss_rule(3));
        CHECK(std::abs(area - 0.125) < 1e-13);
    }
    SUBCASE("keeping the large side of a corner cut") {
        TrimCurve tc{ParamCurve::line(Vec2(0.0, 0.5), Vec2(0.5, 0.0)), true};
        auto cells = reparametrize_cut_element({tc}, Vec2(0, 0), Vec2(1, 1));
        double area = 0.0;
        for (const auto& c : cells) area += c.area(gauss_rule(3));
        CHECK(std::abs(area - 0.875) < 1e-13);
    }
}

TEST_CASE("parabola-trimmed unit square has kept area 2/3") {
    TrimCurve tc{parabola(), true};  // keep eta > xi^2
    for (int elements : {1, 2, 4, 8}) {
        TrimmedDomain dom(unit_square(2, elements), {tc});
        CHECK(std::abs(dom.kept_area(gauss_rule(3)) - 2.0 / 3.0) < 1e-10);
    }
}

TEST_CASE("grazing curve leaves the element intact") {
    // chord entirely outside the element, touching only its corner region
    TrimCurve tc{ParamCurve::line(Vec2(2.0, 0.0), Vec2(0.0, 2.0)), true};
    auto cells = reparametrize_cut_element({tc}, Vec2(0, 0), Vec2(1, 1));
    REQUIRE(cells.size() == 1);
    CHECK(std::abs(cells[0].area(gauss_rule(3)) - 1.0) < 1e-13);
}

TEST_CASE("active function set matches brute-force support sampling") {
    TrimCurve tc{parabola(), true};
    for (int p : {2, 3}) {
        SplineSpace space = unit_square(p, 6);
        TrimmedDomain dom(space, {tc});
        // brute force: function is active when any sample point of its
        // support satisfies the analytic membership eta > xi^2
        const auto& kx = space.knot_vector(0).knots();
        const auto& ky = space.knot_vector(1).knots();
        for (int j = 0; j < space.num_functions(1); ++j)
            for (int i = 0; i < space.num_functions(0); ++i) {
                const double x0 = kx[i], x1 = kx[i + p + 1];
                const double y0 = ky[j], y1 = ky[j + p + 1];
                bool any = false;
                const int m = 60;
                for (int a = 0; a <= m && !any; ++a)
                    for (int b = 0; b <= m && !any; ++b) {
                        const double x = x0 + (x1 - x0) * (a + 0.5) / (m + 1);
                        const double y = y0 + (y1 - y0) * (b + 0.5) / (m + 1);
                        if (y > x * x) any = true;
                    }
                CHECK(dom.is_active_function(space.flat_index(i, j)) == any);
            }
    }
}

namespace {
// independent oracle over {y > x^2}: exact Gauss inner integral in y,
// adaptive interval subdivision in x
double strip_integral(const std::function<double(double, double)>& f, double x0, double x1) {
    const double gp[8] = {-0.9602898564975362, -0.7966664774136267, -0.5255324099163290,
                          -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                          0.7966664774136267,  0.9602898564975362};
    const double gw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                          0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                          0.2223810344533745, 0.1012285362903763};
    double s = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double x = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * gp[i];
        const double ylo = x * x;
        double inner = 0.0;
        for (int j = 0; j < 8; ++j) {
            const double y = 0.5 * (ylo + 1.0) + 0.5 * (1.0 - ylo) * gp[j];
            inner += 0.5 * (1.0 - ylo) * gw[j] * f(x, y);
        }
        s += 0.5 * (x1 - x0) * gw[i] * inner;
    }
    return s;
}

double adaptive_strip(const std::function<double(double, double)>& f, double x0, double x1, int depth) {
    const double whole = strip_integral(f, x0, x1);
    const double xm = 0.5 * (x0 + x1);
    const double split = strip_integral(f, x0, xm) + strip_integral(f, xm, x1);
    if (depth > 20 || std::abs(whole - split) < 1e-13) return split;
    return adaptive_strip(f, x0, xm, depth + 1) + adaptive_strip(f, xm, x1, depth + 1);
}
}  // namespace

TEST_CASE("trimmed integral of a bi-degree (p,p) polynomial matches the adaptive oracle") {
    TrimCurve tc{parabola(), true};
    const int p = 3;
    TrimmedDomain dom(unit_square(p, 5), {tc});
    auto f = [](double x, double y) { return (x * x * x - 0.2 * x + 1.0) * (y * y * y + y + 0.5); };
    double quad = 0.0;
    for (int e = 0; e < dom.num_elements(); ++e)
        for (const QuadPoint2D& qp : dom.element_quadrature(e, gauss_rule(p + 1)))
            quad += qp.weight * f(qp.uv[0], qp.uv[1]);
    const double oracle = adaptive_strip(f, 0.0, 1.0, 0);
    CHECK(std::abs(quad - oracle) < 1e-8);
}

TEST_CASE("kinked two-arm trim curve through an interior point") {
    // one C0 path from the bottom boundary to the left boundary through
    // (0.52, 0.47): keeps the lower-left block
    std::vector<double> knots = {0, 0, 0, 0.5, 0.5, 1, 1, 1};
    SplineSpace cs{KnotVector(knots, 2)};
    std::vector<Vec2> cp = {{0.55, 0.0}, {0.6, 0.25}, {0.52, 0.47}, {0.3, 0.55}, {0.0, 0.5}};
    TrimCurve tc{ParamCurve(std::move(cs), std::move(cp)), true};

    TrimmedDomain dom(unit_square(2, 4), {tc});
    CHECK(dom.contains(Vec2(0.2, 0.2)));
    CHECK(!dom.contains(Vec2(0.8, 0.8)));
    CHECK(!dom.contains(Vec2(0.8, 0.2)));
    CHECK(!dom.contains(Vec2(0.2, 0.8)));

    // area oracle by dense sampling (the boundary is piecewise quadratic)
    auto member = [&](double x, double y) { return dom.contains(Vec2(x, y)); };
    const int n = 600;
    double mc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) mc += member((i + 0.5) / n, (j + 0.5) / n) ? 1.0 : 0.0;
    mc /= static_cast<double>(n) * n;
    CHECK(dom.kept_area(gauss_rule(3)) == doctest::Approx(mc).epsilon(2e-3));
}

TEST_SUITE_END();
