#pragma once

// Reference computations on the explicit vectorized model
// vec(Y) = (Z kron X) vec(B). These are deliberately naive and only accept
// small problems; they exist to check the structured solvers.

#include <cstddef>
#include <vector>

#include "mlm/model.hpp"

namespace mlm::oracle {

/// Largest n*m accepted by vectorized_design.
inline constexpr Eigen::Index kMaxVectorizedRows = 4096;
/// Largest p*q accepted by vectorized_design.
inline constexpr Eigen::Index kMaxVectorizedCols = 1024;

/// Z kron X, ordered so that design * vec(B) = vec(X B Z') with column-major vec.
Matrix vectorized_design(const MLMProblem& prob);
Matrix kronecker(const Matrix& Z, const Matrix& X);

Vector vec(const Matrix& M);
Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols);
std::vector<std::uint8_t> vec_mask(const PenaltyMask& mask);

/// Lasso on an explicit design by coordinate descent to tolerance 1e-10;
/// entries with mask 0 are unpenalized.
Vector lasso_oracle(const Matrix& design, const Vector& y, double lambda,
                    const std::vector<std::uint8_t>& mask, double tol = 1e-10,
                    std::size_t max_sweeps = 2000000);

struct KktViolation {
    Eigen::Index row = 0;
    Eigen::Index col = 0;
    double gradient = 0.0;
    double value = 0.0;
    double excess = 0.0;  // amount by which the condition is exceeded
    enum class Kind { active, inactive, unpenalized } kind = Kind::active;
};

struct KktReport {
    std::vector<KktViolation> violations;
    double max_excess = 0.0;  // worst margin over all entries (may be <= 0)
    bool ok() const { return violations.empty(); }
};

/// Subgradient optimality of B for loss + lambda * ||B||_1 over the mask.
KktReport kkt_check(const MLMProblem& prob, const Matrix& B, double lambda,
                    const PenaltyMask& mask, double tol);

/// (X'X)^{-1} X' Y Z (Z'Z)^{-1}.
Matrix least_squares_oracle(const MLMProblem& prob);

}  // namespace mlm::oracle
