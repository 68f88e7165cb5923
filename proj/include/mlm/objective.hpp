#pragma once

#include "mlm/model.hpp"

namespace mlm {

/// Spectral data for the Kronecker-structured prox of the loss:
/// X'X = Qx diag(eig_x) Qx', Z'Z = Qz diag(eig_z) Qz',
/// Ystar = Qx' X' Y Z Qz and L(i, j) = eig_x(i) * eig_z(j).
struct SpectralCache {
    Matrix Qx;
    Vector eig_x;
    Matrix Qz;
    Vector eig_z;
    Matrix Ystar;
    Matrix L;

    double min_eigen_product() const;
    double max_eigen_product() const;
};

SpectralCache build_spectral_cache(const MLMProblem& prob);

/// 1/2 ||Y - X B Z'||_F^2
double loss(const MLMProblem& prob, const Matrix& B);

/// loss + lambda * sum over penalized entries of |B_ij|.
double objective(const MLMProblem& prob, const Matrix& B, double lambda, const PenaltyMask& mask);
double objective(const MLMProblem& prob, const Matrix& B, double lambda);

double l1_penalty(const Matrix& B, const PenaltyMask& mask);

/// -X' (Y - X B Z') Z
Matrix gradient(const MLMProblem& prob, const Matrix& B);
/// -X' R Z for a residual matrix already in hand.
Matrix gradient_from_residuals(const MLMProblem& prob, const Matrix& R);

double soft_threshold(double u, double rho);

/// Mask-aware elementwise soft-thresholding (unpenalized entries pass through).
Matrix soft_threshold(const Matrix& U, double rho, const PenaltyMask& mask);

/// Largest eigenvalue of X'X and of Z'Z.
struct GramExtremes {
    double min_x, max_x, min_z, max_z;
};
GramExtremes gram_extremes(const MLMProblem& prob);

/// 1 / (2 * lambda_max(X'X) * lambda_max(Z'Z)).
double lipschitz_step(const MLMProblem& prob);
double lipschitz_step(const SpectralCache& cache);

/// Vectorized prox of the loss: (rho I + D'D)^{-1} (rho u + D'y), solved
/// directly. Intended for small D only.
Vector prox_f_direct(const Vector& u, double rho, const Matrix& design, const Vector& y);

/// Matrix-form prox of the loss, Qx [(rho Qx'U Qz + Ystar) ./ (rho + L)] Qz'.
Matrix prox_f_spectral(const Matrix& U, double rho, const SpectralCache& cache);

}  // namespace mlm
