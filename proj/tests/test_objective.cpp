#include <doctest.h>

#include "mlm/error.hpp"
#include "mlm/path.hpp"
#include "support.hpp"

using namespace mlm;
using mlm::testing::random_matrix;

TEST_CASE("loss") {
    SUBCASE("identity design, zero coefficients") {
        const Matrix I = Matrix::Identity(2, 2);
        const MLMProblem prob(I, I, I, ProblemOptions{});
        CHECK(loss(prob, Matrix::Zero(2, 2)) == doctest::Approx(1.0));
        CHECK(loss(prob, I) == 0.0);
    }
    SUBCASE("matches the vectorized loss") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const MLMProblem prob = testing::plain_problem(seed, 3 + seed % 4, 3 + seed % 3, 2, 3);
            Rng rng(seed + 100);
            const Matrix B = random_matrix(rng, prob.p(), prob.q());
            const Vector r = oracle::vec(prob.Y()) - oracle::vectorized_design(prob) * oracle::vec(B);
            CHECK(loss(prob, B) == doctest::Approx(0.5 * r.squaredNorm()).epsilon(1e-12));
        }
    }
}

TEST_CASE("objective") {
    const MLMProblem prob = testing::plain_problem(2, 5, 4, 3, 2);
    Rng rng(3);
    const Matrix B = random_matrix(rng, 3, 2);
    CHECK(objective(prob, B, 0.0) == doctest::Approx(loss(prob, B)));
    CHECK(objective(prob, Matrix::Zero(3, 2), 7.0) == doctest::Approx(loss(prob, Matrix::Zero(3, 2))));
    CHECK_THROWS_AS(objective(prob, B, -1.0), Error);

    const Vector r = oracle::vec(prob.Y()) - oracle::vectorized_design(prob) * oracle::vec(B);
    const double direct = 0.5 * r.squaredNorm() + 2.5 * B.cwiseAbs().sum();
    CHECK(objective(prob, B, 2.5) == doctest::Approx(direct).epsilon(1e-12));

    const PenaltyMask corner = testing::corner_mask(3, 2);
    const double masked = loss(prob, B) + 2.5 * B.bottomRightCorner(2, 1).cwiseAbs().sum();
    CHECK(objective(prob, B, 2.5, corner) == doctest::Approx(masked).epsilon(1e-12));
}

TEST_CASE("gradient") {
    const MLMProblem prob = testing::plain_problem(4, 4, 3, 2, 2);
    CHECK((gradient(prob, Matrix::Zero(2, 2)) + prob.X().transpose() * prob.Y() * prob.Z())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    Rng rng(5);
    const Matrix B = random_matrix(rng, 2, 2);
    const MLMProblem exact(prob.X() * B * prob.Z().transpose(), prob.X(), prob.Z(), ProblemOptions{});
    CHECK(gradient(exact, B).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gradient matches central finite differences") {
    const double h = 1e-6;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const MLMProblem prob = testing::plain_problem(seed, 4, 3, 2, 2);
        Rng rng(seed + 1000);
        const Matrix B = random_matrix(rng, 2, 2);
        const Matrix G = gradient(prob, B);
        for (Eigen::Index i = 0; i < 2; ++i) {
            for (Eigen::Index j = 0; j < 2; ++j) {
                Matrix plus = B, minus = B;
                plus(i, j) += h;
                minus(i, j) -= h;
                const double fd = (loss(prob, plus) - loss(prob, minus)) / (2 * h);
                worst = std::max(worst, std::abs(fd - G(i, j)) / std::max(1.0, std::abs(G(i, j))));
            }
        }
    }
    CHECK(worst <= 1e-4);
}

TEST_CASE("soft threshold") {
    CHECK(soft_threshold(2.0, 1.0) == 1.0);
    CHECK(soft_threshold(0.3, 0.5) == 0.0);
    CHECK(soft_threshold(-5.0, 2.0) == -3.0);
    CHECK_THROWS_AS(soft_threshold(1.0, -0.1), Error);

    Rng rng(6);
    for (int k = 0; k < 1000; ++k) {
        const double u = rng.normal(0, 3), v = rng.normal(0, 3), rho = std::abs(rng.normal(0, 2));
        CHECK(std::abs(soft_threshold(u, rho) - soft_threshold(v, rho)) <= std::abs(u - v) + 1e-15);
    }

    Matrix U(2, 2);
    U << 3, -3, 0.5, -0.5;
    const Matrix S = soft_threshold(U, 1.0, testing::corner_mask(2, 2));
    CHECK(S(0, 0) == 3);
    CHECK(S(0, 1) == -3);
    CHECK(S(1, 0) == 0.5);
    CHECK(S(1, 1) == 0.0);
}

TEST_CASE("Lipschitz step") {
    const Matrix I = Matrix::Identity(3, 3);
    const MLMProblem id(I, I, I, ProblemOptions{});
    CHECK(lipschitz_step(id) == doctest::Approx(0.5));
    const MLMProblem scaled(I, 3.0 * I, I, ProblemOptions{});
    CHECK(lipschitz_step(scaled) == doctest::Approx(0.5 / 9.0));

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const MLMProblem prob = testing::plain_problem(seed, 6, 5, 3, 2);
        const Matrix K = oracle::vectorized_design(prob);
        const Eigen::SelfAdjointEigenSolver<Matrix> es(K.transpose() * K);
        const double top = es.eigenvalues().maxCoeff();
        const GramExtremes g = gram_extremes(prob);
        CHECK(g.max_x * g.max_z == doctest::Approx(top).epsilon(1e-8));
        CHECK(lipschitz_step(prob) == doctest::Approx(1.0 / (2.0 * top)).epsilon(1e-8));
        CHECK(build_spectral_cache(prob).max_eigen_product() == doctest::Approx(top).epsilon(1e-8));
    }
}

TEST_CASE("spectral cache reconstructs the Gram matrices") {
    const MLMProblem prob = testing::plain_problem(7, 8, 6, 3, 4);
    const SpectralCache c = build_spectral_cache(prob);
    const Matrix XtX = prob.X().transpose() * prob.X();
    const Matrix ZtZ = prob.Z().transpose() * prob.Z();
    CHECK((c.Qx * c.eig_x.asDiagonal() * c.Qx.transpose() - XtX).norm() <= 1e-8 * XtX.norm());
    CHECK((c.Qz * c.eig_z.asDiagonal() * c.Qz.transpose() - ZtZ).norm() <= 1e-8 * ZtZ.norm());
    CHECK(c.eig_x.minCoeff() >= 0.0);
    for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) CHECK(c.L(i, j) == doctest::Approx(c.eig_x(i) * c.eig_z(j)));
    }
}

TEST_CASE("direct proximal operator") {
    Rng rng(8);
    const Vector u = random_matrix(rng, 4, 1);
    const Vector y = random_matrix(rng, 6, 1);
    CHECK((prox_f_direct(u, 0.7, Matrix::Zero(6, 4), y) - u).norm() < 1e-14);
    const Matrix D = random_matrix(rng, 6, 4);
    CHECK((prox_f_direct(u, 1e12, D, y) - u).norm() < 1e-9);
    const Vector p = prox_f_direct(u, 0.7, D, y);
    const Vector stationarity = 0.7 * (p - u) - D.transpose() * (y - D * p);
    CHECK(stationarity.norm() < 1e-10);
}

TEST_CASE("spectral proximal operator equals the direct one") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const MLMProblem prob = testing::plain_problem(seed, 3, 3, 2, 2);
        const SpectralCache c = build_spectral_cache(prob);
        Rng rng(seed + 50);
        const Matrix U = random_matrix(rng, 2, 2);
        const double rho = 0.1 + std::abs(rng.normal(0.0, 2.0));
        const Matrix spectral = prox_f_spectral(U, rho, c);
        const Vector direct =
            prox_f_direct(oracle::vec(U), rho, oracle::vectorized_design(prob), oracle::vec(prob.Y()));
        CHECK((oracle::vec(spectral) - direct).cwiseAbs().maxCoeff() < 1e-8);
        const Matrix stationarity = rho * (spectral - U) + gradient(prob, spectral);
        CHECK(stationarity.cwiseAbs().maxCoeff() < 1e-6);
    }
    const Matrix I = Matrix::Identity(2, 2);
    const MLMProblem id(Matrix::Zero(2, 2), I, I, ProblemOptions{});
    const Matrix U = (Matrix(2, 2) << 1, 2, 3, 4).finished();
    CHECK((prox_f_spectral(U, 3.0, build_spectral_cache(id)) - U * 0.75).norm() < 1e-14);
    CHECK_THROWS_AS(prox_f_spectral(U, 0.0, build_spectral_cache(id)), Error);
}

TEST_CASE("lambda_max is the gradient norm at zero without intercepts") {
    const MLMProblem prob = testing::plain_problem(12, 7, 6, 3, 3);
    const double expected = (prob.X().transpose() * prob.Y() * prob.Z()).cwiseAbs().maxCoeff();
    CHECK(lambda_max(prob) == doctest::Approx(expected).epsilon(1e-12));
}
