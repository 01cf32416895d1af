#include "doctest.h"
#include "lrsd/box_lasso.hpp"
#include "lrsd/rng.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <cmath>

using namespace lrsd;

namespace {

double soft(double v, double t) {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

/// Exact solution when the squared-norm operator is diagonal (it always is
/// for this problem): per coordinate, clip the scaled soft threshold of the
/// correlation onto the box. d_i = ||row i of Z||^2 repeated for the
/// imaginary half.
RealVector separable_solution(const BoxLassoProblem& problem, const ComplexMatrix& z) {
    const Index m = problem.num_sensors();
    const RealVector b = problem.adjoint_apply(problem.g_bar());
    RealVector x(2 * m);
    for (Index i = 0; i < 2 * m; ++i) {
        const double d = z.row(i % m).squaredNorm();
        if (d <= 0.0) {
            x(i) = 0.0;
            continue;
        }
        x(i) = std::clamp(soft(b(i), problem.lambda2()) / d, -problem.gamma_max(),
                          problem.gamma_max());
    }
    return x;
}

} // namespace

TEST_CASE("matching data gives a zero correlation vector") {
    Rng rng(21);
    const ComplexMatrix z = testutil::random_matrix(rng, 3, 4);
    const BoxLassoProblem problem(z, z, 0.2, 10.0);
    CHECK(problem.g_bar().norm() == 0.0);
}

TEST_CASE("scalar problem exposes the expected real-split operator") {
    ComplexMatrix y(1, 1);
    ComplexMatrix z(1, 1);
    y(0, 0) = Complex(2.0, 1.0);
    z(0, 0) = Complex(0.5, -0.25);
    const BoxLassoProblem problem(y, z, 0.1, 10.0);

    CHECK(problem.dim() == 2);
    const RealMatrix dense = problem.dense_operator();
    CHECK(dense.rows() == 2);
    CHECK(dense.cols() == 2);
    CHECK(dense(0, 0) == doctest::Approx(0.5));
    CHECK(dense(0, 1) == doctest::Approx(0.25));   // -Im z
    CHECK(dense(1, 0) == doctest::Approx(-0.25));  // Im z
    CHECK(dense(1, 1) == doctest::Approx(0.5));

    const RealVector g = problem.g_bar();
    CHECK(g(0) == doctest::Approx(1.5));   // Re(y - z)
    CHECK(g(1) == doctest::Approx(1.25));  // Im(y - z)
}

TEST_CASE("operator application matches the dense real-split matrix") {
    Rng rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        const Index m = 1 + static_cast<Index>(rng.next_u64() % 3);
        const Index t = 1 + static_cast<Index>(rng.next_u64() % 3);
        const ComplexMatrix y = testutil::random_matrix(rng, m, t);
        const ComplexMatrix z = testutil::random_matrix(rng, m, t);
        const BoxLassoProblem problem(y, z, 0.2, 10.0);
        const RealMatrix dense = problem.dense_operator();

        for (int k = 0; k < 20; ++k) {
            const RealVector x = testutil::random_real_vector(rng, 2 * m);
            CHECK((problem.apply(x) - dense * x).norm() <= 1e-12);
            const RealVector r = testutil::random_real_vector(rng, 2 * m * t);
            CHECK((problem.adjoint_apply(r) - dense.transpose() * r).norm() <= 1e-12);
        }

        const RealVector x = testutil::random_real_vector(rng, 2 * m);
        const double direct =
            0.5 * (problem.g_bar() - dense * x).squaredNorm() + 0.2 * x.lpNorm<1>();
        CHECK(problem.objective(x) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("identity operator reduces to a clipped soft threshold") {
    // Z = ones(M, 1) makes the real-split operator the identity, so each
    // coordinate solves min 0.5 (g_i - x_i)^2 + lambda2 |x_i| on the box.
    const Index m = 4;
    const ComplexMatrix z = ComplexMatrix::Ones(m, 1);

    SUBCASE("interior threshold") {
        const ComplexMatrix y = z + ComplexMatrix::Constant(m, 1, Complex(0.5, 0.5));
        const BoxLassoProblem problem(y, z, 0.2, 10.0);
        BoxLassoOptions options;
        options.tol = 1e-12;
        const BoxLassoSolution sol = solve_box_lasso(problem, options);
        REQUIRE(sol.converged);
        for (Index i = 0; i < m; ++i) {
            CHECK(std::abs(sol.gamma(i).real() - 0.3) <= 1e-10);
            CHECK(std::abs(sol.gamma(i).imag() - 0.3) <= 1e-10);
        }
    }

    SUBCASE("box-clipped threshold") {
        const ComplexMatrix y = z + ComplexMatrix::Constant(m, 1, Complex(15.0, 15.0));
        const BoxLassoProblem problem(y, z, 0.2, 10.0);
        BoxLassoOptions options;
        options.tol = 1e-12;
        const BoxLassoSolution sol = solve_box_lasso(problem, options);
        REQUIRE(sol.converged);
        for (Index i = 0; i < m; ++i) {
            CHECK(std::abs(sol.gamma(i).real() - 10.0) <= 1e-10);
            CHECK(std::abs(sol.gamma(i).imag() - 10.0) <= 1e-10);
        }
    }
}

TEST_CASE("solver matches the separable closed form on random instances") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const Index m = 1 + static_cast<Index>(rng.next_u64() % 5);
        const Index t = 1 + static_cast<Index>(rng.next_u64() % 6);
        const ComplexMatrix z = testutil::random_matrix(rng, m, t);
        const ComplexMatrix y = testutil::random_matrix(rng, m, t, 2.0);
        const double lambda2 = rng.uniform(0.05, 0.5);
        const double gamma_max = rng.uniform(0.3, 2.0);
        const BoxLassoProblem problem(y, z, lambda2, gamma_max);

        BoxLassoOptions options;
        options.tol = 1e-12;
        options.max_iter = 20000;
        const BoxLassoSolution sol = solve_box_lasso(problem, options);
        REQUIRE(sol.converged);

        const RealVector expected = separable_solution(problem, z);
        CHECK((real_split(sol.gamma) - expected).lpNorm<Eigen::Infinity>() <= 1e-8);
        CHECK(sol.objective <= problem.objective(expected) + 1e-10);
        CHECK(kkt_residual(problem, real_split(sol.gamma)) <= options.tol);
    }
}

TEST_CASE("large penalty forces the zero solution") {
    Rng rng(24);
    const ComplexMatrix z = testutil::random_matrix(rng, 3, 4);
    const ComplexMatrix y = testutil::random_matrix(rng, 3, 4);
    const BoxLassoProblem probe(y, z, 1.0, 10.0);
    const double lambda2 =
        probe.adjoint_apply(probe.g_bar()).lpNorm<Eigen::Infinity>() * 1.5;

    const BoxLassoProblem problem(y, z, lambda2, 10.0);
    const BoxLassoSolution sol = solve_box_lasso(problem);
    CHECK(sol.converged);
    CHECK(sol.gamma.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("iterates always respect the box") {
    Rng rng(25);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix z = testutil::random_matrix(rng, 4, 3, 3.0);
        const ComplexMatrix y = testutil::random_matrix(rng, 4, 3, 10.0);
        const double gamma_max = rng.uniform(0.1, 1.0);
        const BoxLassoProblem problem(y, z, 0.01, gamma_max);
        const BoxLassoSolution sol = solve_box_lasso(problem);
        for (Index i = 0; i < sol.gamma.size(); ++i) {
            CHECK(std::abs(sol.gamma(i).real()) <= gamma_max + 1e-15);
            CHECK(std::abs(sol.gamma(i).imag()) <= gamma_max + 1e-15);
        }
    }
}

TEST_CASE("warm starting from the solution returns immediately") {
    Rng rng(26);
    const ComplexMatrix z = testutil::random_matrix(rng, 3, 5);
    const ComplexMatrix y = testutil::random_matrix(rng, 3, 5);
    const BoxLassoProblem problem(y, z, 0.2, 10.0);

    const BoxLassoSolution first = solve_box_lasso(problem);
    REQUIRE(first.converged);
    const BoxLassoSolution second = solve_box_lasso(problem, {}, first.gamma);
    CHECK(second.converged);
    CHECK(second.iterations == 0);
    CHECK((second.gamma - first.gamma).norm() == 0.0);
}

TEST_CASE("objective history is monotone non-increasing") {
    Rng rng(27);
    const ComplexMatrix z = testutil::random_matrix(rng, 5, 8);
    const ComplexMatrix y = testutil::random_matrix(rng, 5, 8, 4.0);
    std::vector<double> history;
    BoxLassoOptions options;
    options.objective_history = &history;
    const BoxLassoSolution sol = solve_box_lasso(BoxLassoProblem(y, z, 0.1, 2.0), options);
    CHECK(sol.converged);
    REQUIRE(!history.empty());
    for (std::size_t i = 1; i < history.size(); ++i) {
        // Restart steps are monotone up to rounding of the objective value.
        CHECK(history[i] <= history[i - 1] + 1e-12 * std::max(1.0, std::abs(history[i - 1])));
    }
    CHECK(sol.objective == doctest::Approx(history.back()));
}

TEST_CASE("real split round-trips") {
    Rng rng(28);
    const ComplexVector v = testutil::random_vector(rng, 6);
    CHECK((from_real_split(real_split(v)) - v).norm() == 0.0);
}

TEST_CASE("problem construction validates shapes and parameters") {
    const ComplexMatrix y = ComplexMatrix::Ones(2, 3);
    const ComplexMatrix z = ComplexMatrix::Ones(2, 2);
    CHECK_THROWS_AS(BoxLassoProblem(y, z, 0.2, 10.0), DimensionError);
    const ComplexMatrix z2 = ComplexMatrix::Ones(2, 3);
    CHECK_THROWS_AS(BoxLassoProblem(y, z2, -1.0, 10.0), DomainError);
    CHECK_THROWS_AS(BoxLassoProblem(y, z2, 0.2, 0.0), DomainError);
}
