#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace mlm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Boolean p x q matrix, column-major bytes (1 = penalized). The byte layout
/// matches Eigen's column-major storage of B so kernels can walk both together.
class PenaltyMask {
public:
    PenaltyMask() = default;
    PenaltyMask(std::size_t rows, std::size_t cols, bool penalized = true)
        : rows_(rows), cols_(cols), bits_(rows * cols, penalized ? 1 : 0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return bits_.size(); }

    bool penalized(std::size_t i, std::size_t j) const { return bits_[i + j * rows_] != 0; }
    void set(std::size_t i, std::size_t j, bool penalized) {
        bits_[i + j * rows_] = penalized ? 1 : 0;
    }

    const std::uint8_t* data() const { return bits_.data(); }
    std::size_t count_penalized() const;
    std::size_t count_unpenalized() const { return size() - count_penalized(); }

    bool operator==(const PenaltyMask&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// Estimate of B together with the count of its nonzero penalized entries.
class CoefficientMatrix {
public:
    CoefficientMatrix() = default;
    CoefficientMatrix(Matrix values, const PenaltyMask& mask);

    const Matrix& values() const { return values_; }
    std::size_t nnz() const { return nnz_; }
    Eigen::Index rows() const { return values_.rows(); }
    Eigen::Index cols() const { return values_.cols(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

private:
    Matrix values_;
    std::size_t nnz_ = 0;
};

std::size_t count_nonzero_penalized(const Matrix& values, const PenaltyMask& mask);

/// How one design matrix was transformed from the raw covariates. The working
/// design is [1 | (raw - center) / scale] when an intercept is present and
/// raw / scale otherwise (columns are only centered when an intercept can
/// absorb the shift).
struct DesignTransform {
    bool intercept = false;
    bool standardized = false;
    Vector centers;  // one per raw column; zeros when not centered
    Vector scales;   // one per raw column; ones when not standardized

    /// Apply to raw covariates with the same column count (e.g. held-out rows).
    Matrix apply(const Matrix& raw) const;
    /// Upper-triangular T with working = [1 | raw] * T (or raw * T without an
    /// intercept); used to move coefficients back to the raw scale.
    Matrix to_raw_map() const;
};

struct ProblemOptions {
    bool intercept_x = false;
    bool intercept_z = false;
    bool standardize_x = false;
    bool standardize_z = false;
};

/// The (Y, X, Z) triple of Y = X B Z' + E in working form, plus the raw
/// covariates and the transforms that produced the working designs.
/// Immutable after construction.
class MLMProblem {
public:
    MLMProblem(Matrix Y, Matrix X_raw, Matrix Z_raw, const ProblemOptions& options);

    const Matrix& Y() const { return Y_; }
    const Matrix& X() const { return X_; }
    const Matrix& Z() const { return Z_; }
    const Matrix& X_raw() const { return X_raw_; }
    const Matrix& Z_raw() const { return Z_raw_; }

    const DesignTransform& x_transform() const { return x_transform_; }
    const DesignTransform& z_transform() const { return z_transform_; }
    const ProblemOptions& options() const { return options_; }
    const PenaltyMask& mask() const { return mask_; }

    Eigen::Index n() const { return Y_.rows(); }
    Eigen::Index m() const { return Y_.cols(); }
    Eigen::Index p() const { return X_.cols(); }
    Eigen::Index q() const { return Z_.cols(); }

    bool standardized() const {
        return x_transform_.standardized || z_transform_.standardized;
    }

    /// Copy with a user-supplied penalty mask (dimensions must be p x q).
    MLMProblem with_mask(PenaltyMask mask) const;

    /// Problem over a subset of rows of Y and X_raw, with transforms
    /// recomputed from those rows.
    MLMProblem subset_rows(const std::vector<Eigen::Index>& rows) const;

private:
    Matrix Y_;
    Matrix X_raw_;
    Matrix Z_raw_;
    Matrix X_;
    Matrix Z_;
    ProblemOptions options_;
    DesignTransform x_transform_;
    DesignTransform z_transform_;
    PenaltyMask mask_;
};

MLMProblem build_problem(const Matrix& Y, const Matrix& X, const Matrix& Z,
                         bool intercept_x, bool intercept_z, bool standardize);

MLMProblem build_problem(const Matrix& Y, const Matrix& X, const Matrix& Z,
                         const ProblemOptions& options);

/// Default mask: every entry penalized except intercept rows/columns.
PenaltyMask intercept_mask(Eigen::Index p, Eigen::Index q, bool intercept_x, bool intercept_z);

/// X B Z' using whichever association order is cheaper.
Matrix fitted(const MLMProblem& prob, const Matrix& B);

/// Y - X B Z'.
Matrix residuals(const MLMProblem& prob, const Matrix& B);
Matrix residuals(const MLMProblem& prob, const CoefficientMatrix& B);

/// Coefficients on the raw covariate scale: X_raw* B_raw Z_raw*' equals the
/// working-scale fit, where X_raw* is [1 | X_raw] when an intercept is present.
CoefficientMatrix backtransform(const MLMProblem& prob, const CoefficientMatrix& B_std);

/// Inverse of backtransform: raw-scale coefficients onto the working scale.
CoefficientMatrix to_working_scale(const MLMProblem& prob, const CoefficientMatrix& B_raw);

}  // namespace mlm
