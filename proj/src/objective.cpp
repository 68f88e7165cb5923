#include "mlm/objective.hpp"

#include <cmath>

#include "mlm/error.hpp"
#include "mlm/kernels.hpp"

namespace mlm {

namespace {

// Symmetric eigendecomposition with eigenvalues below 1e-10 clamped to 0.
void symmetric_eigen(const Matrix& gram, Matrix& vectors, Vector& values) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(gram);
    if (solver.info() != Eigen::Success) numerical_error("eigendecomposition failed");
    vectors = solver.eigenvectors();
    values = solver.eigenvalues();
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        if (values(k) < 1e-10) values(k) = 0.0;
    }
}

Matrix gram(const Matrix& A) {
    Matrix G(A.cols(), A.cols());
    G.setZero();
    G.selfadjointView<Eigen::Lower>().rankUpdate(A.transpose());
    return G.selfadjointView<Eigen::Lower>();
}

void check_dims(const MLMProblem& prob, const Matrix& B) {
    if (B.rows() != prob.p() || B.cols() != prob.q()) data_error("B must be p x q");
}

}  // namespace

double SpectralCache::min_eigen_product() const { return eig_x.minCoeff() * eig_z.minCoeff(); }
double SpectralCache::max_eigen_product() const { return eig_x.maxCoeff() * eig_z.maxCoeff(); }

SpectralCache build_spectral_cache(const MLMProblem& prob) {
    SpectralCache cache;
    symmetric_eigen(gram(prob.X()), cache.Qx, cache.eig_x);
    symmetric_eigen(gram(prob.Z()), cache.Qz, cache.eig_z);
    const Matrix XtYZ = gradient_from_residuals(prob, prob.Y()) * -1.0;
    cache.Ystar = cache.Qx.transpose() * XtYZ * cache.Qz;
    cache.L = cache.eig_x * cache.eig_z.transpose();
    return cache;
}

double loss(const MLMProblem& prob, const Matrix& B) {
    check_dims(prob, B);
    const Matrix R = residuals(prob, B);
    return 0.5 * kernels::active().sum_squares(R.data(), static_cast<std::size_t>(R.size()));
}

double l1_penalty(const Matrix& B, const PenaltyMask& mask) {
    double total = 0.0;
    const std::uint8_t* bits = mask.data();
    for (Eigen::Index k = 0; k < B.size(); ++k) {
        if (bits[k]) total += std::fabs(B.data()[k]);
    }
    return total;
}

double objective(const MLMProblem& prob, const Matrix& B, double lambda, const PenaltyMask& mask) {
    if (!(lambda >= 0.0)) config_error("lambda must be nonnegative");
    if (mask.rows() != static_cast<std::size_t>(B.rows()) ||
        mask.cols() != static_cast<std::size_t>(B.cols())) {
        data_error("mask must match B");
    }
    const double base = loss(prob, B);
    return lambda == 0.0 ? base : base + lambda * l1_penalty(B, mask);
}

double objective(const MLMProblem& prob, const Matrix& B, double lambda) {
    return objective(prob, B, lambda, prob.mask());
}

Matrix gradient_from_residuals(const MLMProblem& prob, const Matrix& R) {
    const double n = static_cast<double>(prob.n());
    const double m = static_cast<double>(prob.m());
    const double p = static_cast<double>(prob.p());
    const double q = static_cast<double>(prob.q());
    Matrix G;
    // (X'R)Z costs pnm + pmq; X'(RZ) costs nmq + pnq.
    if (p * n * m + p * m * q <= n * m * q + p * n * q) {
        const Matrix XtR = prob.X().transpose() * R;
        G.noalias() = XtR * prob.Z();
    } else {
        const Matrix RZ = R * prob.Z();
        G.noalias() = prob.X().transpose() * RZ;
    }
    G *= -1.0;
    return G;
}

Matrix gradient(const MLMProblem& prob, const Matrix& B) {
    check_dims(prob, B);
    return gradient_from_residuals(prob, residuals(prob, B));
}

double soft_threshold(double u, double rho) {
    if (!(rho >= 0.0)) config_error("soft-threshold level must be nonnegative");
    if (u > rho) return u - rho;
    if (u < -rho) return u + rho;
    return 0.0;
}

Matrix soft_threshold(const Matrix& U, double rho, const PenaltyMask& mask) {
    if (!(rho >= 0.0)) config_error("soft-threshold level must be nonnegative");
    if (mask.size() != static_cast<std::size_t>(U.size())) data_error("mask must match matrix");
    Matrix out(U.rows(), U.cols());
    kernels::active().soft_threshold(U.data(), mask.data(), rho, out.data(),
                                     static_cast<std::size_t>(U.size()));
    return out;
}

GramExtremes gram_extremes(const MLMProblem& prob) {
    Matrix vectors;
    Vector ex;
    Vector ez;
    symmetric_eigen(gram(prob.X()), vectors, ex);
    symmetric_eigen(gram(prob.Z()), vectors, ez);
    return {ex.minCoeff(), ex.maxCoeff(), ez.minCoeff(), ez.maxCoeff()};
}

double lipschitz_step(const MLMProblem& prob) {
    const GramExtremes e = gram_extremes(prob);
    const double top = e.max_x * e.max_z;
    if (!(top > 0.0)) numerical_error("degenerate design: X'X or Z'Z is zero");
    return 1.0 / (2.0 * top);
}

double lipschitz_step(const SpectralCache& cache) {
    const double top = cache.max_eigen_product();
    if (!(top > 0.0)) numerical_error("degenerate design: X'X or Z'Z is zero");
    return 1.0 / (2.0 * top);
}

Vector prox_f_direct(const Vector& u, double rho, const Matrix& design, const Vector& y) {
    if (!(rho > 0.0)) config_error("prox parameter rho must be positive");
    if (design.cols() != u.size() || design.rows() != y.size()) {
        data_error("prox_f_direct dimension mismatch");
    }
    Matrix system = design.transpose() * design;
    system.diagonal().array() += rho;
    const Vector rhs = rho * u + design.transpose() * y;
    return system.ldlt().solve(rhs);
}

Matrix prox_f_spectral(const Matrix& U, double rho, const SpectralCache& cache) {
    if (!(rho > 0.0)) config_error("prox parameter rho must be positive");
    if (U.rows() != cache.Qx.rows() || U.cols() != cache.Qz.rows()) {
        data_error("prox_f_spectral dimension mismatch");
    }
    Matrix rotated = cache.Qx.transpose() * U * cache.Qz;
    kernels::active().prox_divide(rotated.data(), cache.Ystar.data(), cache.L.data(), rho,
                                  rotated.data(), static_cast<std::size_t>(rotated.size()));
    return cache.Qx * rotated * cache.Qz.transpose();
}

}  // namespace mlm
