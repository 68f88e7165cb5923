#include "mlm/oracle.hpp"

#include <cmath>
#include <limits>

#include "mlm/error.hpp"

namespace mlm::oracle {

Matrix kronecker(const Matrix& Z, const Matrix& X) {
    Matrix K(Z.rows() * X.rows(), Z.cols() * X.cols());
    for (Eigen::Index a = 0; a < Z.rows(); ++a) {
        for (Eigen::Index b = 0; b < Z.cols(); ++b) {
            K.block(a * X.rows(), b * X.cols(), X.rows(), X.cols()) = Z(a, b) * X;
        }
    }
    return K;
}

Matrix vectorized_design(const MLMProblem& prob) {
    if (prob.n() * prob.m() > kMaxVectorizedRows || prob.p() * prob.q() > kMaxVectorizedCols) {
        config_error("problem too large for the explicit Kronecker design");
    }
    return kronecker(prob.Z(), prob.X());
}

Vector vec(const Matrix& M) { return Eigen::Map<const Vector>(M.data(), M.size()); }

Matrix unvec(const Vector& v, Eigen::Index rows, Eigen::Index cols) {
    if (v.size() != rows * cols) data_error("unvec size mismatch");
    return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

std::vector<std::uint8_t> vec_mask(const PenaltyMask& mask) {
    return std::vector<std::uint8_t>(mask.data(), mask.data() + mask.size());
}

Vector lasso_oracle(const Matrix& design, const Vector& y, double lambda,
                    const std::vector<std::uint8_t>& mask, double tol, std::size_t max_sweeps) {
    if (design.rows() > kMaxVectorizedRows || design.cols() > kMaxVectorizedCols) {
        config_error("lasso_oracle accepts small designs only");
    }
    if (design.rows() != y.size() || static_cast<std::size_t>(design.cols()) != mask.size()) {
        data_error("lasso_oracle dimension mismatch");
    }
    const Eigen::Index k = design.cols();
    Vector beta = Vector::Zero(k);
    Vector r = y;
    const Vector norms = design.colwise().squaredNorm().transpose();
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double change = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) {
            if (norms(j) == 0.0) continue;
            const double u = design.col(j).dot(r) + norms(j) * beta(j);
            double next = u;
            if (mask[static_cast<std::size_t>(j)]) {
                next = u > lambda ? u - lambda : (u < -lambda ? u + lambda : 0.0);
            }
            next /= norms(j);
            const double delta = next - beta(j);
            if (delta != 0.0) {
                r -= delta * design.col(j);
                beta(j) = next;
                change = std::max(change, std::fabs(delta));
            }
        }
        if (change <= tol) return beta;
    }
    numerical_error("lasso_oracle did not converge");
}

KktReport kkt_check(const MLMProblem& prob, const Matrix& B, double lambda,
                    const PenaltyMask& mask, double tol) {
    if (B.rows() != prob.p() || B.cols() != prob.q()) data_error("B must be p x q");
    // Gradient of the loss from the explicit residual, -X' R Z.
    const Matrix R = prob.Y() - prob.X() * B * prob.Z().transpose();
    const Matrix grad = -(prob.X().transpose() * R * prob.Z());
    KktReport report;
    report.max_excess = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < B.cols(); ++j) {
        for (Eigen::Index i = 0; i < B.rows(); ++i) {
            const double g = grad(i, j);
            const double b = B(i, j);
            KktViolation v{i, j, g, b, 0.0, KktViolation::Kind::active};
            if (!mask.penalized(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) {
                v.kind = KktViolation::Kind::unpenalized;
                v.excess = std::fabs(g) - tol;
            } else if (b != 0.0) {
                v.kind = KktViolation::Kind::active;
                v.excess = std::fabs(g + lambda * (b > 0.0 ? 1.0 : -1.0)) - tol;
            } else {
                v.kind = KktViolation::Kind::inactive;
                v.excess = std::fabs(g) - lambda - tol;
            }
            report.max_excess = std::max(report.max_excess, v.excess);
            if (v.excess > 0.0) report.violations.push_back(v);
        }
    }
    return report;
}

Matrix least_squares_oracle(const MLMProblem& prob) {
    const Matrix XtX = prob.X().transpose() * prob.X();
    const Matrix ZtZ = prob.Z().transpose() * prob.Z();
    Eigen::FullPivLU<Matrix> lu_x(XtX);
    Eigen::FullPivLU<Matrix> lu_z(ZtZ);
    if (!lu_x.isInvertible() || !lu_z.isInvertible()) numerical_error("singular Gram matrix");
    const Matrix XtYZ = prob.X().transpose() * prob.Y() * prob.Z();
    const Matrix left = lu_x.solve(XtYZ);
    return lu_z.solve(left.transpose()).transpose();
}

}  // namespace mlm::oracle
