#include <fstream>
#include "doctest.h"

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "klshell/linear_system.hpp"
#include "klshell/quadrature.hpp"

using namespace kl;

TEST_SUITE_BEGIN("numerics");

TEST_CASE("two-point rule has the classical nodes and weights") {
    const GaussRule& r = gauss_rule(2);
    CHECK(r.points[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r.points[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.weights[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("weights are positive and sum to two") {
    for (int n = 1; n <= 30; ++n) {
        const GaussRule& r = gauss_rule(n);
        double s = 0.0;
        for (double w : r.weights) {
            CHECK(w > 0.0);
            s += w;
        }
        CHECK(s == doctest::Approx(2.0).epsilon(1e-13));
    }
    CHECK_THROWS(gauss_rule(0));
    CHECK_THROWS(gauss_rule(31));
}

TEST_CASE("n=3 integrates x^4 exactly") {
    const GaussRule& r = gauss_rule(3);
    double s = 0.0;
    for (int i = 0; i < r.size(); ++i) s += r.weights[i] * std::pow(r.points[i], 4);
    CHECK(s == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("cos integrates to 2 sin(1)") {
    // the analytic five-point remainder for cos is ~7.9e-10, so the check
    // sits just above it; eight points are effectively exact
    const GaussRule& r5 = gauss_rule(5);
    double s5 = 0.0;
    for (int i = 0; i < r5.size(); ++i) s5 += r5.weights[i] * std::cos(r5.points[i]);
    CHECK(std::abs(s5 - 2.0 * std::sin(1.0)) < 1e-9);

    const GaussRule& r8 = gauss_rule(8);
    double s8 = 0.0;
    for (int i = 0; i < r8.size(); ++i) s8 += r8.weights[i] * std::cos(r8.points[i]);
    CHECK(std::abs(s8 - 2.0 * std::sin(1.0)) < 1e-14);
}

namespace {

SparseSymmetricSystem poisson_1d(int n, Eigen::MatrixXd* dense = nullptr, Eigen::VectorXd* load = nullptr) {
    SparseSymmetricSystem sys(n);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) {
        sys.add(i, i, 2.0);
        K(i, i) = 2.0;
        if (i + 1 < n) {
            sys.add(i, i + 1, -1.0);
            sys.add(i + 1, i, -1.0);
            K(i, i + 1) = K(i + 1, i) = -1.0;
        }
        f[i] = std::sin(0.3 * i + 0.2);
        sys.add_rhs(i, f[i]);
    }
    if (dense) *dense = K;
    if (load) *load = f;
    return sys;
}

}  // namespace

TEST_CASE("identity solve") {
    SparseSymmetricSystem sys(3);
    for (int i = 0; i < 3; ++i) sys.add(i, i, 1.0);
    sys.add_rhs(0, 1.0);
    const auto sol = sys.solve();
    CHECK(sol.values[0] == doctest::Approx(1.0));
    CHECK(sol.values[1] == doctest::Approx(0.0));
    CHECK(sol.values[2] == doctest::Approx(0.0));
    CHECK(sol.relative_residual < 1e-14);
}

TEST_CASE("matches a dense LU oracle on a 1D Poisson matrix") {
    Eigen::MatrixXd K;
    Eigen::VectorXd f;
    SparseSymmetricSystem sys = poisson_1d(10, &K, &f);
    const auto sol = sys.solve();
    const Eigen::VectorXd ref = Eigen::PartialPivLU<Eigen::MatrixXd>(K).solve(f);
    CHECK((sol.values - ref).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(sol.relative_residual < 1e-12);
}

TEST_CASE("diagonal scaling does not change the solution") {
    SparseSymmetricSystem sys = poisson_1d(12);
    const auto a = sys.solve({.diagonal_scaling = true});
    const auto b = sys.solve({.diagonal_scaling = false});
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("fixed dofs carry their prescribed values and condense the rhs") {
    Eigen::MatrixXd K;
    Eigen::VectorXd f;
    SparseSymmetricSystem sys = poisson_1d(8, &K, &f);
    sys.fix_dof(0, 0.5);
    sys.fix_dof(7, -0.25);
    const auto sol = sys.solve();
    CHECK(sol.values[0] == doctest::Approx(0.5));
    CHECK(sol.values[7] == doctest::Approx(-0.25));
    // dense oracle with substitution
    Eigen::MatrixXd Kr = K.block(1, 1, 6, 6);
    Eigen::VectorXd fr = f.segment(1, 6) - K.block(1, 0, 6, 1) * 0.5 - K.block(1, 7, 6, 1) * (-0.25);
    const Eigen::VectorXd ref = Eigen::PartialPivLU<Eigen::MatrixXd>(Kr).solve(fr);
    for (int i = 0; i < 6; ++i) CHECK(sol.values[i + 1] == doctest::Approx(ref[i]).epsilon(1e-12));
}

TEST_CASE("ties equate dofs") {
    SparseSymmetricSystem sys = poisson_1d(6);
    sys.tie_dofs(2, 3);
    const auto sol = sys.solve();
    CHECK(sol.values[2] == doctest::Approx(sol.values[3]));
    CHECK(sys.count_free_dofs() == 5);
}

TEST_CASE("coordinate-format matrix dump") {
    SparseSymmetricSystem sys(2);
    sys.add(0, 0, 2.0);
    sys.add(0, 1, -1.0);
    sys.add(1, 0, -1.0);
    sys.add(1, 1, 2.0);
    const std::string path = "/tmp/klshell_dump_test.txt";
    sys.dump_matrix(path);
    std::ifstream in(path);
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "0 0 2");
    CHECK(lines[1] == "1 0 -1");
}

TEST_CASE("singular diagonal names the dof") {
    SparseSymmetricSystem sys(3);
    sys.add(0, 0, 1.0);
    sys.add(2, 2, 1.0);
    CHECK_THROWS_WITH_AS(sys.solve(), doctest::Contains("dof 1"), std::runtime_error);
}

TEST_CASE("indefinite system is reported") {
    SparseSymmetricSystem sys(2);
    sys.add(0, 0, 1.0);
    sys.add(1, 1, 1.0);
    sys.add(0, 1, 4.0);
    sys.add(1, 0, 4.0);
    CHECK_THROWS_AS(sys.solve(), std::runtime_error);
}

TEST_SUITE_END();
