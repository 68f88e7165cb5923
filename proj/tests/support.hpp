#pragma once

// Random instances shared by the unit tests and the acceptance runner.

#include <Eigen/Dense>

#include "mlm/model.hpp"
#include "mlm/objective.hpp"
#include "mlm/oracle.hpp"
#include "mlm/rng.hpp"
#include "mlm/solvers.hpp"

namespace mlm::testing {

inline Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double sd = 1.0) {
    Matrix out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = rng.normal(0.0, sd);
    }
    return out;
}

inline double spectral_norm(const Matrix& A) {
    return Eigen::JacobiSVD<Matrix>(A).singularValues()(0);
}

/// Problem on the working scale directly (no intercept, no standardization)
/// with a sparse planted B plus noise.
inline MLMProblem plain_problem(std::uint64_t seed, Eigen::Index n, Eigen::Index m,
                                Eigen::Index p, Eigen::Index q, bool unit_norm = false) {
    Rng rng(seed);
    Matrix X = random_matrix(rng, n, p);
    Matrix Z = random_matrix(rng, m, q);
    if (unit_norm) {
        X /= spectral_norm(X);
        Z /= spectral_norm(Z);
    }
    Matrix B = Matrix::Zero(p, q);
    for (Eigen::Index j = 0; j < q; ++j) {
        for (Eigen::Index i = 0; i < p; ++i) {
            if (rng.bernoulli(0.4)) B(i, j) = rng.normal(0.0, 2.0);
        }
    }
    const double noise = unit_norm ? 0.05 : 0.5;
    Matrix Y = X * B * Z.transpose() + random_matrix(rng, n, m, noise);
    return MLMProblem(std::move(Y), std::move(X), std::move(Z), ProblemOptions{});
}

/// Intercepts on both sides, standardized covariates, nonzero grand mean.
inline MLMProblem standardized_problem(std::uint64_t seed, Eigen::Index n, Eigen::Index m,
                                       Eigen::Index p_raw, Eigen::Index q_raw) {
    Rng rng(seed);
    Matrix X = random_matrix(rng, n, p_raw, 2.0).array() + 1.5;
    Matrix Z = random_matrix(rng, m, q_raw, 0.5).array() - 0.7;
    Matrix B = Matrix::Zero(p_raw + 1, q_raw + 1);
    B(0, 0) = 3.0;
    for (Eigen::Index j = 0; j <= q_raw; ++j) {
        for (Eigen::Index i = 0; i <= p_raw; ++i) {
            if ((i > 0 || j > 0) && rng.bernoulli(0.3)) B(i, j) = rng.normal(0.0, 2.0);
        }
    }
    Matrix Xi(n, p_raw + 1);
    Xi << Vector::Ones(n), X;
    Matrix Zi(m, q_raw + 1);
    Zi << Vector::Ones(m), Z;
    Matrix Y = Xi * B * Zi.transpose() + random_matrix(rng, n, m, 1.0);
    return build_problem(Y, X, Z, true, true, true);
}

/// Intercept row and column left unpenalized through the mask only.
inline PenaltyMask corner_mask(Eigen::Index p, Eigen::Index q) {
    return intercept_mask(p, q, true, true);
}

inline SolverConfig tight(Algorithm algorithm, double tol = 1e-10, std::size_t max_iter = 500000) {
    SolverConfig c;
    c.algorithm = algorithm;
    c.tol = tol;
    c.max_iter = max_iter;
    c.rng_seed = 17;
    return c;
}

inline constexpr Algorithm kL1Solvers[] = {Algorithm::cd_cyclic, Algorithm::cd_random,
                                           Algorithm::ista, Algorithm::fista_fixed,
                                           Algorithm::fista_backtrack, Algorithm::admm};

/// Oracle solution on the working scale, devectorized.
inline Matrix oracle_solution(const MLMProblem& prob, double lambda) {
    const Matrix design = oracle::vectorized_design(prob);
    const Vector beta =
        oracle::lasso_oracle(design, oracle::vec(prob.Y()), lambda, oracle::vec_mask(prob.mask()));
    return oracle::unvec(beta, prob.p(), prob.q());
}

}  // namespace mlm::testing
