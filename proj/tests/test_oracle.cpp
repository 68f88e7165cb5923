#include <doctest.h>

#include "mlm/error.hpp"
#include "mlm/path.hpp"
#include "support.hpp"

using namespace mlm;
using mlm::testing::random_matrix;

TEST_CASE("vectorized design") {
    const Matrix I = Matrix::Identity(2, 2);
    const MLMProblem id(I, I, I, ProblemOptions{});
    CHECK(oracle::vectorized_design(id) == Matrix::Identity(4, 4));

    const MLMProblem prob = testing::plain_problem(1, 3, 2, 2, 2);
    const Matrix K = oracle::vectorized_design(prob);
    Rng rng(2);
    for (int t = 0; t < 10; ++t) {
        const Matrix B = random_matrix(rng, 2, 2);
        const Matrix XBZ = prob.X() * B * prob.Z().transpose();
        CHECK((K * oracle::vec(B) - oracle::vec(XBZ)).cwiseAbs().maxCoeff() < 1e-12);
    }
    // Basis coefficient e_i e_j' selects column i + j*p, which is z_j kron x_i.
    Matrix E = Matrix::Zero(2, 2);
    E(1, 0) = 1.0;
    CHECK((K * oracle::vec(E) - K.col(1)).norm() == 0.0);
    CHECK((K.col(1) - oracle::kronecker(prob.Z().col(0), prob.X().col(1))).norm() < 1e-15);
}

TEST_CASE("size guard trips before allocation") {
    Rng rng(3);
    const MLMProblem big(random_matrix(rng, 70, 70), random_matrix(rng, 70, 2), random_matrix(rng, 70, 2),
                         ProblemOptions{});
    CHECK_THROWS_AS(oracle::vectorized_design(big), Error);
    const MLMProblem wide(random_matrix(rng, 40, 40), random_matrix(rng, 40, 33), random_matrix(rng, 40, 33),
                          ProblemOptions{});
    CHECK_THROWS_AS(oracle::vectorized_design(wide), Error);
}

TEST_CASE("vec and unvec are inverse") {
    Rng rng(4);
    const Matrix M = random_matrix(rng, 3, 5);
    CHECK(oracle::unvec(oracle::vec(M), 3, 5) == M);
    const auto mask = oracle::vec_mask(testing::corner_mask(2, 3));
    CHECK(mask == std::vector<std::uint8_t>{0, 0, 0, 1, 0, 1});
}

TEST_CASE("lasso oracle") {
    Rng rng(5);
    const Matrix D = random_matrix(rng, 12, 4);
    const Vector y = random_matrix(rng, 12, 1);
    const std::vector<std::uint8_t> all(4, 1);
    SUBCASE("lambda 0 equals the normal equations") {
        const Vector ls = (D.transpose() * D).ldlt().solve(D.transpose() * y);
        CHECK((oracle::lasso_oracle(D, y, 0.0, all) - ls).cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("lambda beyond max |D'y| gives zero") {
        const double top = (D.transpose() * y).cwiseAbs().maxCoeff();
        CHECK(oracle::lasso_oracle(D, y, top, all).isZero(0.0));
    }
    SUBCASE("orthonormal design has the closed form") {
        const Matrix Q = Eigen::HouseholderQR<Matrix>(D).householderQ() * Matrix::Identity(12, 4);
        const Vector c = Q.transpose() * y;
        const Vector beta = oracle::lasso_oracle(Q, y, 0.3, all);
        for (Eigen::Index i = 0; i < 4; ++i) CHECK(beta(i) == doctest::Approx(soft_threshold(c(i), 0.3)).epsilon(1e-9));
    }
}

TEST_CASE("KKT checker") {
    const MLMProblem prob = testing::plain_problem(6, 5, 4, 2, 2);
    const double lambda = 0.2 * lambda_max(prob);
    const Matrix B = testing::oracle_solution(prob, lambda);
    CHECK(oracle::kkt_check(prob, B, lambda, prob.mask(), 1e-6).ok());

    Eigen::Index bi = 0, bj = 0;
    B.cwiseAbs().maxCoeff(&bi, &bj);
    Matrix perturbed = B;
    const double tol = 1e-6;
    perturbed(bi, bj) += 100 * tol * 1e3;  // gradient moves by curvature times the shift
    const auto report = oracle::kkt_check(prob, perturbed, lambda, prob.mask(), tol);
    CHECK_FALSE(report.ok());
    bool flagged = false;
    for (const auto& v : report.violations) flagged |= (v.row == bi && v.col == bj);
    CHECK(flagged);

    CHECK(oracle::kkt_check(prob, Matrix::Zero(2, 2), lambda_max(prob), prob.mask(), 1e-9).ok());
}

TEST_CASE("least-squares oracle") {
    const Matrix I = Matrix::Identity(3, 3);
    Rng rng(7);
    const Matrix Y = random_matrix(rng, 3, 3);
    CHECK((oracle::least_squares_oracle(MLMProblem(Y, I, I, ProblemOptions{})) - Y).norm() < 1e-12);

    const Matrix X = random_matrix(rng, 6, 3);
    const Matrix Z = random_matrix(rng, 5, 2);
    const Matrix B = random_matrix(rng, 3, 2);
    const MLMProblem exact(X * B * Z.transpose(), X, Z, ProblemOptions{});
    CHECK((oracle::least_squares_oracle(exact) - B).cwiseAbs().maxCoeff() < 1e-8);

    const MLMProblem noisy = testing::plain_problem(8, 6, 5, 3, 2);
    const Matrix K = oracle::vectorized_design(noisy);
    const Vector beta = (K.transpose() * K).ldlt().solve(K.transpose() * oracle::vec(noisy.Y()));
    CHECK((oracle::vec(oracle::least_squares_oracle(noisy)) - beta).cwiseAbs().maxCoeff() < 1e-8);

    const MLMProblem singular(random_matrix(rng, 2, 3), random_matrix(rng, 2, 3), random_matrix(rng, 3, 2),
                              ProblemOptions{});
    CHECK_THROWS_AS(oracle::least_squares_oracle(singular), Error);
}
