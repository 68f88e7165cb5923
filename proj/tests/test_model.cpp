#include <doctest.h>

#include <limits>

#include "mlm/error.hpp"
#include "mlm/oracle.hpp"
#include "support.hpp"

using namespace mlm;
using mlm::testing::random_matrix;

TEST_CASE("construction validates inputs") {
    Rng rng(1);
    const Matrix Y = random_matrix(rng, 5, 4);
    const Matrix X = random_matrix(rng, 5, 2);
    const Matrix Z = random_matrix(rng, 4, 3);

    SUBCASE("constant non-intercept column") {
        Matrix Xc = X;
        Xc.col(1).setConstant(2.0);
        CHECK_THROWS_AS(build_problem(Y, Xc, Z, true, true, true), Error);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(build_problem(Y, random_matrix(rng, 4, 2), Z, true, true, true), Error);
        CHECK_THROWS_AS(build_problem(Y, X, random_matrix(rng, 5, 3), true, true, true), Error);
    }
    SUBCASE("non-finite value") {
        Matrix Yn = Y;
        Yn(2, 1) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(build_problem(Yn, X, Z, true, true, true), Error);
        Matrix Xi = X;
        Xi(0, 0) = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(build_problem(Y, Xi, Z, true, true, true), Error);
    }
    SUBCASE("too few rows") {
        CHECK_THROWS_AS(build_problem(Y.topRows(1), X.topRows(1), Z, false, false, false), Error);
    }
}

TEST_CASE("standardized column has mean 0 and sd 1") {
    Matrix X(3, 1);
    X << 1, 2, 3;
    Rng rng(2);
    const MLMProblem prob = build_problem(random_matrix(rng, 3, 2), X, random_matrix(rng, 2, 1), true, false, true);
    REQUIRE(prob.p() == 2);
    const auto col = prob.X().col(1);
    CHECK(col.mean() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(col.squaredNorm() / 2.0 == doctest::Approx(1.0));
    CHECK(prob.X().col(0) == Vector::Ones(3));
}

TEST_CASE("intercept mask layout") {
    Rng rng(3);
    const MLMProblem prob =
        build_problem(random_matrix(rng, 6, 5), random_matrix(rng, 6, 2), random_matrix(rng, 5, 3), true, true, true);
    const PenaltyMask& mask = prob.mask();
    REQUIRE(mask.rows() == 3);
    REQUIRE(mask.cols() == 4);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 4; ++j) CHECK(mask.penalized(i, j) == (i > 0 && j > 0));
    }
    CHECK(mask.count_penalized() == 6);
    CHECK(mask.count_unpenalized() == 6);
}

TEST_CASE("residuals") {
    const MLMProblem prob = testing::plain_problem(4, 4, 3, 2, 2);
    SUBCASE("zero coefficients give Y") {
        CHECK(residuals(prob, Matrix::Zero(2, 2)) == prob.Y());
    }
    SUBCASE("exact fit gives zero") {
        Rng rng(5);
        const Matrix B = random_matrix(rng, 2, 2);
        const MLMProblem exact(prob.X() * B * prob.Z().transpose(), prob.X(), prob.Z(), ProblemOptions{});
        CHECK(residuals(exact, B).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("matches the Kronecker evaluation") {
        Rng rng(6);
        const Matrix B = random_matrix(rng, 2, 2);
        const Vector r_vec = oracle::vec(prob.Y()) - oracle::vectorized_design(prob) * oracle::vec(B);
        const Matrix R = residuals(prob, B);
        CHECK((oracle::vec(R) - r_vec).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(((R + fitted(prob, B)) - prob.Y()).norm() <= 1e-12 * prob.Y().norm());
    }
}

TEST_CASE("backtransform") {
    Rng rng(7);
    SUBCASE("unstandardized problem is rejected") {
        const MLMProblem prob = testing::plain_problem(8, 5, 4, 2, 2);
        CHECK_THROWS_AS(backtransform(prob, CoefficientMatrix(Matrix::Zero(2, 2), prob.mask())), Error);
    }
    SUBCASE("single x scale without centering divides the row") {
        Matrix X(4, 1);
        X << 1, -1, 2, -2;  // mean 0 is irrelevant: no intercept means no centering
        const Matrix Z = Matrix::Identity(3, 3);
        ProblemOptions o;
        o.standardize_x = true;
        const MLMProblem prob(random_matrix(rng, 4, 3), X, Z, o);
        const double s = std::sqrt(X.squaredNorm() / 3.0);
        const Matrix B = random_matrix(rng, 1, 3);
        const Matrix raw = backtransform(prob, CoefficientMatrix(B, prob.mask())).values();
        CHECK((raw - B / s).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("fitted values are preserved") {
        const MLMProblem prob = testing::standardized_problem(9, 10, 7, 3, 2);
        const Matrix B = random_matrix(rng, prob.p(), prob.q());
        const CoefficientMatrix raw = backtransform(prob, CoefficientMatrix(B, prob.mask()));
        Matrix Xi(prob.n(), prob.p());
        Xi << Vector::Ones(prob.n()), prob.X_raw();
        Matrix Zi(prob.m(), prob.q());
        Zi << Vector::Ones(prob.m()), prob.Z_raw();
        const Matrix before = prob.X() * B * prob.Z().transpose();
        const Matrix after = Xi * raw.values() * Zi.transpose();
        CHECK((before - after).cwiseAbs().maxCoeff() < 1e-10);
        const Matrix back = to_working_scale(prob, raw).values();
        CHECK((back - B).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("standardization is idempotent") {
    const MLMProblem prob = testing::standardized_problem(10, 12, 6, 3, 2);
    const MLMProblem again = build_problem(prob.Y(), prob.X().rightCols(3), prob.Z().rightCols(2), true, true, true);
    CHECK((again.X() - prob.X()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((again.Z() - prob.Z()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("row subset recomputes the transform on held-in rows") {
    const MLMProblem prob = testing::standardized_problem(11, 12, 6, 3, 2);
    const MLMProblem sub = prob.subset_rows({0, 2, 4, 6, 8, 10});
    CHECK(sub.n() == 6);
    for (Eigen::Index j = 1; j < sub.p(); ++j) CHECK(std::abs(sub.X().col(j).mean()) < 1e-12);
    CHECK(sub.Z() == prob.Z());
}

TEST_CASE("coefficient nnz counts penalized entries only") {
    Matrix B = Matrix::Zero(2, 2);
    B(0, 0) = 4.0;
    B(1, 1) = -1.0;
    const CoefficientMatrix c(B, intercept_mask(2, 2, true, true));
    CHECK(c.nnz() == 1);
}
