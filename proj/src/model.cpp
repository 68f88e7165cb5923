#include "mlm/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mlm/error.hpp"

namespace mlm {

std::size_t PenaltyMask::count_penalized() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::size_t count_nonzero_penalized(const Matrix& values, const PenaltyMask& mask) {
    std::size_t count = 0;
    const double* v = values.data();
    const std::uint8_t* bits = mask.data();
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        if (bits[k] && v[k] != 0.0) ++count;
    }
    return count;
}

CoefficientMatrix::CoefficientMatrix(Matrix values, const PenaltyMask& mask)
    : values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.rows()) != mask.rows() ||
        static_cast<std::size_t>(values_.cols()) != mask.cols()) {
        data_error("coefficient matrix and penalty mask dimensions differ");
    }
    nnz_ = count_nonzero_penalized(values_, mask);
}

namespace {

void require_finite(const Matrix& M, const char* name) {
    if (!M.allFinite()) {
        data_error(std::string(name) + " contains non-finite values");
    }
}

// Column means and n-1 standard deviations; rejects constant columns.
void column_moments(const Matrix& M, const char* name, Vector& means, Vector& sds) {
    const Eigen::Index rows = M.rows();
    means = M.colwise().mean().transpose();
    sds.resize(M.cols());
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        const double ss = (M.col(j).array() - means(j)).square().sum();
        sds(j) = std::sqrt(ss / static_cast<double>(rows - 1));
        if (!(sds(j) > 1e-12 * std::max(1.0, std::fabs(means(j))))) {
            std::ostringstream msg;
            msg << name << " column " << j << " has zero variance";
            data_error(msg.str());
        }
    }
}

DesignTransform make_transform(const Matrix& raw, const char* name, bool intercept,
                               bool standardize) {
    DesignTransform t;
    t.intercept = intercept;
    t.standardized = standardize;
    Vector means;
    Vector sds;
    column_moments(raw, name, means, sds);
    t.centers = (standardize && intercept) ? means : Vector::Zero(raw.cols());
    t.scales = standardize ? sds : Vector::Ones(raw.cols());
    return t;
}

}  // namespace

Matrix DesignTransform::apply(const Matrix& raw) const {
    if (raw.cols() != centers.size()) data_error("design column count does not match transform");
    const Eigen::Index offset = intercept ? 1 : 0;
    Matrix out(raw.rows(), raw.cols() + offset);
    if (intercept) out.col(0).setOnes();
    for (Eigen::Index j = 0; j < raw.cols(); ++j) {
        out.col(j + offset) = (raw.col(j).array() - centers(j)) / scales(j);
    }
    return out;
}

Matrix DesignTransform::to_raw_map() const {
    const Eigen::Index k = centers.size();
    const Eigen::Index offset = intercept ? 1 : 0;
    Matrix T = Matrix::Zero(k + offset, k + offset);
    if (intercept) T(0, 0) = 1.0;
    for (Eigen::Index j = 0; j < k; ++j) {
        T(j + offset, j + offset) = 1.0 / scales(j);
        if (intercept) T(0, j + offset) = -centers(j) / scales(j);
    }
    return T;
}

PenaltyMask intercept_mask(Eigen::Index p, Eigen::Index q, bool intercept_x, bool intercept_z) {
    PenaltyMask mask(static_cast<std::size_t>(p), static_cast<std::size_t>(q), true);
    if (intercept_x) {
        for (Eigen::Index j = 0; j < q; ++j) mask.set(0, static_cast<std::size_t>(j), false);
    }
    if (intercept_z) {
        for (Eigen::Index i = 0; i < p; ++i) mask.set(static_cast<std::size_t>(i), 0, false);
    }
    return mask;
}

MLMProblem::MLMProblem(Matrix Y, Matrix X_raw, Matrix Z_raw, const ProblemOptions& options)
    : Y_(std::move(Y)), X_raw_(std::move(X_raw)), Z_raw_(std::move(Z_raw)), options_(options) {
    if (Y_.rows() != X_raw_.rows()) {
        data_error("Y has " + std::to_string(Y_.rows()) + " rows but X has " +
                   std::to_string(X_raw_.rows()));
    }
    if (Y_.cols() != Z_raw_.rows()) {
        data_error("Y has " + std::to_string(Y_.cols()) + " columns but Z has " +
                   std::to_string(Z_raw_.rows()) + " rows");
    }
    if (Y_.rows() < 2 || Y_.cols() < 2) data_error("Y must be at least 2 x 2");
    if (X_raw_.cols() + (options.intercept_x ? 1 : 0) < 1 ||
        Z_raw_.cols() + (options.intercept_z ? 1 : 0) < 1) {
        data_error("design matrices must have at least one column");
    }
    require_finite(Y_, "Y");
    require_finite(X_raw_, "X");
    require_finite(Z_raw_, "Z");

    x_transform_ = make_transform(X_raw_, "X", options.intercept_x, options.standardize_x);
    z_transform_ = make_transform(Z_raw_, "Z", options.intercept_z, options.standardize_z);
    X_ = x_transform_.apply(X_raw_);
    Z_ = z_transform_.apply(Z_raw_);
    mask_ = intercept_mask(X_.cols(), Z_.cols(), options.intercept_x, options.intercept_z);
}

MLMProblem MLMProblem::with_mask(PenaltyMask mask) const {
    if (mask.rows() != static_cast<std::size_t>(p()) || mask.cols() != static_cast<std::size_t>(q())) {
        data_error("penalty mask must be p x q");
    }
    MLMProblem copy = *this;
    copy.mask_ = std::move(mask);
    return copy;
}

MLMProblem MLMProblem::subset_rows(const std::vector<Eigen::Index>& rows) const {
    Matrix Ys(static_cast<Eigen::Index>(rows.size()), Y_.cols());
    Matrix Xs(static_cast<Eigen::Index>(rows.size()), X_raw_.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        Ys.row(static_cast<Eigen::Index>(k)) = Y_.row(rows[k]);
        Xs.row(static_cast<Eigen::Index>(k)) = X_raw_.row(rows[k]);
    }
    MLMProblem sub(std::move(Ys), std::move(Xs), Z_raw_, options_);
    sub.mask_ = mask_;
    return sub;
}

MLMProblem build_problem(const Matrix& Y, const Matrix& X, const Matrix& Z,
                         const ProblemOptions& options) {
    return MLMProblem(Y, X, Z, options);
}

MLMProblem build_problem(const Matrix& Y, const Matrix& X, const Matrix& Z,
                         bool intercept_x, bool intercept_z, bool standardize) {
    ProblemOptions options;
    options.intercept_x = intercept_x;
    options.intercept_z = intercept_z;
    options.standardize_x = standardize;
    options.standardize_z = standardize;
    return MLMProblem(Y, X, Z, options);
}

Matrix fitted(const MLMProblem& prob, const Matrix& B) {
    if (B.rows() != prob.p() || B.cols() != prob.q()) data_error("B must be p x q");
    const double n = static_cast<double>(prob.n());
    const double m = static_cast<double>(prob.m());
    const double p = static_cast<double>(prob.p());
    const double q = static_cast<double>(prob.q());
    // (XB)Z' costs npq + nqm; X(BZ') costs pqm + npm.
    if (n * p * q + n * q * m <= p * q * m + n * p * m) {
        const Matrix XB = prob.X() * B;
        return XB * prob.Z().transpose();
    }
    const Matrix BZt = B * prob.Z().transpose();
    return prob.X() * BZt;
}

Matrix residuals(const MLMProblem& prob, const Matrix& B) {
    Matrix R = prob.Y();
    R.noalias() -= fitted(prob, B);
    return R;
}

Matrix residuals(const MLMProblem& prob, const CoefficientMatrix& B) {
    return residuals(prob, B.values());
}

CoefficientMatrix backtransform(const MLMProblem& prob, const CoefficientMatrix& B_std) {
    if (!prob.standardized()) config_error("backtransform requires a standardized problem");
    if (B_std.rows() != prob.p() || B_std.cols() != prob.q()) data_error("B must be p x q");
    const Matrix Tx = prob.x_transform().to_raw_map();
    const Matrix Tz = prob.z_transform().to_raw_map();
    Matrix raw = Tx * B_std.values() * Tz.transpose();
    return CoefficientMatrix(std::move(raw), prob.mask());
}

CoefficientMatrix to_working_scale(const MLMProblem& prob, const CoefficientMatrix& B_raw) {
    if (B_raw.rows() != prob.p() || B_raw.cols() != prob.q()) data_error("B must be p x q");
    if (!prob.standardized()) return B_raw;
    // Both maps are upper triangular with a nonzero diagonal.
    const Matrix Tx = prob.x_transform().to_raw_map();
    const Matrix Tz = prob.z_transform().to_raw_map();
    const Matrix left = Tx.triangularView<Eigen::Upper>().solve(B_raw.values());
    Matrix working =
        Tz.triangularView<Eigen::Upper>().solve(left.transpose()).transpose();
    return CoefficientMatrix(std::move(working), prob.mask());
}

}  // namespace mlm
