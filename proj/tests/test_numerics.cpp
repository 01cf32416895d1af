#include "doctest.h"
#include "lrsd/numerics.hpp"
#include "lrsd/rng.hpp"
#include "test_util.hpp"

#include <cmath>

using namespace lrsd;

TEST_CASE("inverse sqrt kernel on the zero matrix is 1/mu times identity") {
    const ComplexMatrix z = ComplexMatrix::Zero(3, 5);
    const ComplexMatrix p = hermitian_inv_sqrt(z, 2.0);
    CHECK((p - 0.5 * ComplexMatrix::Identity(3, 3)).norm() <= 1e-14);
}

TEST_CASE("inverse sqrt kernel on the identity halves the spectrum") {
    const ComplexMatrix z = ComplexMatrix::Identity(3, 3);
    const ComplexMatrix p = hermitian_inv_sqrt(z, 1.0);
    // Z Z^H + I = 2 I, so P = 2^(-1/2) I.
    const double expected = 1.0 / std::sqrt(2.0);
    CHECK((p - expected * ComplexMatrix::Identity(3, 3)).norm() <= 1e-14);
}

TEST_CASE("inverse sqrt kernel satisfies its defining equation") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Index m = 2 + static_cast<Index>(rng.next_u64() % 7);
        const Index t = 1 + static_cast<Index>(rng.next_u64() % 9);
        // Checking P against a Gram formed here caps the verifiable accuracy
        // at eps * |Z Z^H| / mu^2, so keep mu^2 above that rounding floor.
        const double mu = std::pow(10.0, rng.uniform(-1.5, 1.0));
        const ComplexMatrix z = testutil::random_matrix(rng, m, t);
        const ComplexMatrix p = hermitian_inv_sqrt(z, mu);

        const ComplexMatrix gram =
            z * z.adjoint() + mu * mu * ComplexMatrix::Identity(m, m);
        CHECK((p * p * gram - ComplexMatrix::Identity(m, m)).norm() <= 1e-10);
        CHECK((p - p.adjoint()).norm() <= 1e-12 * p.norm());

        Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(p);
        CHECK(eig.eigenvalues().minCoeff() > 0.0);
    }
}

TEST_CASE("inverse sqrt kernel rejects bad inputs") {
    const ComplexMatrix z = ComplexMatrix::Ones(2, 2);
    CHECK_THROWS_AS(hermitian_inv_sqrt(z, 0.0), DomainError);
    CHECK_THROWS_AS(hermitian_inv_sqrt(z, -1.0), DomainError);
    ComplexMatrix bad = z;
    bad(0, 0) = Complex(std::nan(""), 0.0);
    CHECK_THROWS_AS(hermitian_inv_sqrt(bad, 1.0), InvalidInputError);
}

TEST_CASE("svd reconstructs and orders") {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const Index m = 2 + static_cast<Index>(rng.next_u64() % 5);
        const Index t = 1 + static_cast<Index>(rng.next_u64() % 7);
        const ComplexMatrix a = testutil::random_matrix(rng, m, t);
        const Svd dec = svd(a);

        CHECK(dec.left.rows() == m);
        CHECK(dec.left.cols() == m);
        CHECK(dec.right.rows() == t);
        CHECK(dec.right.cols() == t);
        CHECK(dec.singular_values.size() == std::min(m, t));

        ComplexMatrix sigma = ComplexMatrix::Zero(m, t);
        for (Index i = 0; i < dec.singular_values.size(); ++i) {
            sigma(i, i) = dec.singular_values(i);
            CHECK(dec.singular_values(i) >= 0.0);
            if (i > 0) {
                CHECK(dec.singular_values(i) <= dec.singular_values(i - 1));
            }
        }
        CHECK((dec.left * sigma * dec.right.adjoint() - a).norm() <= 1e-10 * (1.0 + a.norm()));
        CHECK((dec.left.adjoint() * dec.left - ComplexMatrix::Identity(m, m)).norm() <= 1e-12);
        CHECK((dec.right.adjoint() * dec.right - ComplexMatrix::Identity(t, t)).norm() <= 1e-12);
    }
}

TEST_CASE("structured selector matches its dense form") {
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        const Index m = 1 + static_cast<Index>(rng.next_u64() % 4);
        const Index t = 1 + static_cast<Index>(rng.next_u64() % 4);
        const StructuredSelector selector(testutil::random_matrix(rng, m, t));
        const ComplexMatrix dense = selector.dense();

        CHECK(selector.rows() == m * t);
        CHECK(selector.cols() == m);
        CHECK(dense.rows() == m * t);
        CHECK(dense.cols() == m);

        // Column m is supported on rows t*M + m with value Z(m, t).
        for (Index col = 0; col < m; ++col) {
            for (Index row = 0; row < m * t; ++row) {
                if (row % m == col) {
                    CHECK(dense(row, col) == selector.source()(col, row / m));
                } else {
                    CHECK(dense(row, col) == Complex(0.0, 0.0));
                }
            }
        }

        for (int k = 0; k < 5; ++k) {
            const ComplexVector gamma = testutil::random_vector(rng, m);
            CHECK((selector.apply(gamma) - dense * gamma).norm() <= 1e-12);
            const ComplexVector r = testutil::random_vector(rng, m * t);
            CHECK((selector.adjoint_apply(r) - dense.adjoint() * r).norm() <= 1e-12);
        }
    }
}

TEST_CASE("structured selector adjoint satisfies the inner-product identity") {
    Rng rng(14);
    const StructuredSelector selector(testutil::random_matrix(rng, 5, 7));
    for (int k = 0; k < 20; ++k) {
        const ComplexVector x = testutil::random_vector(rng, 5);
        const ComplexVector r = testutil::random_vector(rng, 35);
        const Complex lhs = selector.apply(x).adjoint() * r;
        const Complex rhs = x.adjoint() * selector.adjoint_apply(r);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
    }
}
