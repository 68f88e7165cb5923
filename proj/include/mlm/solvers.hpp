#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mlm/model.hpp"
#include "mlm/objective.hpp"
#include "mlm/rng.hpp"

namespace mlm {

enum class Algorithm { cd_cyclic, cd_random, ista, fista_fixed, fista_backtrack, admm };

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);

struct SolverConfig {
    Algorithm algorithm = Algorithm::fista_backtrack;
    double tol = 1e-7;             // max absolute coefficient change
    std::size_t max_iter = 10000;
    double init_step = 0.01;       // backtracking start
    double gamma = 0.5;            // backtracking shrink factor
    double mu = 10.0;              // ADMM residual-balance factor
    double tau_incr = 2.0;
    double tau_decr = 2.0;
    bool adaptive_rho = true;
    bool active_set = true;        // coordinate descent only
    std::uint64_t rng_seed = 0;    // cd_random

    /// Throws a config Error when any field is out of range.
    void validate() const;
};

struct FitResult {
    CoefficientMatrix B;        // raw covariate scale when the problem is standardized
    CoefficientMatrix B_model;  // scale the solver worked on; use for warm starts
    std::size_t iterations = 0;
    bool converged = false;
    double final_objective = 0.0;
    Algorithm algorithm = Algorithm::cd_cyclic;
    double lambda = 0.0;
    double final_step = 0.0;  // step size (proximal gradient) or rho (ADMM)
};

/// Per-problem quantities shared by every fit on that problem: the fit with
/// all penalized entries held at zero, its gradient, and (when requested) the
/// spectral cache.
class SolverWorkspace {
public:
    SolverWorkspace(const MLMProblem& prob, bool with_spectral);

    const Matrix& null_fit() const { return null_fit_; }
    const Matrix& null_gradient() const { return null_gradient_; }
    /// max over penalized entries of |gradient at null_fit|.
    double lambda_max() const { return lambda_max_; }
    const SpectralCache* spectral() const { return spectral_ ? &*spectral_ : nullptr; }

private:
    Matrix null_fit_;
    Matrix null_gradient_;
    double lambda_max_ = 0.0;
    std::optional<SpectralCache> spectral_;
};

/// Minimizer of the loss over unpenalized entries with penalized ones at zero.
Matrix fit_unpenalized(const MLMProblem& prob);

struct ConvergenceMeasures {
    double coef_change = 0.0;
    bool splitting = false;  // ADMM: also check the residuals below
    double primal = 0.0;     // max |B0 - B1|
    double dual = 0.0;       // max |rho (B1_prev - B1)|
    double rho = 1.0;
};

bool converged(const ConvergenceMeasures& measures, const SolverConfig& config);

FitResult fit_cd(const MLMProblem& prob, double lambda, const SolverConfig& config,
                 const Matrix* B_init = nullptr, const SolverWorkspace* ws = nullptr);
FitResult fit_ista(const MLMProblem& prob, double lambda, const SolverConfig& config,
                   const Matrix* B_init = nullptr, const SolverWorkspace* ws = nullptr);
FitResult fit_fista_fixed(const MLMProblem& prob, double lambda, const SolverConfig& config,
                          const Matrix* B_init = nullptr, const SolverWorkspace* ws = nullptr);
FitResult fit_fista_backtrack(const MLMProblem& prob, double lambda, const SolverConfig& config,
                              const Matrix* B_init = nullptr, const SolverWorkspace* ws = nullptr);
FitResult fit_admm(const MLMProblem& prob, double lambda, const SolverConfig& config,
                   const Matrix* B_init = nullptr, const SolverWorkspace* ws = nullptr);

/// Dispatch on config.algorithm.
FitResult fit(const MLMProblem& prob, double lambda, const SolverConfig& config,
              const Matrix* B_init = nullptr, const SolverWorkspace* ws = nullptr);

bool needs_spectral(Algorithm algorithm);

namespace detail {

/// Residual-organized coordinate descent. Each coordinate takes its exact
/// minimizer and the residual gets the matching rank-1 correction.
class CoordinateDescent {
public:
    CoordinateDescent(const MLMProblem& prob, double lambda, const Matrix& B_init,
                      bool random_order, std::uint64_t seed);

    /// One pass over every coordinate; returns the max absolute change.
    double full_sweep();
    /// One pass over nonzero and unpenalized coordinates.
    double active_sweep();

    const Matrix& coefficients() const { return B_; }
    const Matrix& residual() const { return R_; }

private:
    double update(Eigen::Index i, Eigen::Index j);
    double sweep(std::vector<Eigen::Index>& order);

    const MLMProblem& prob_;
    double lambda_;
    Matrix B_;
    Matrix R_;
    Vector x_norms_;
    Vector z_norms_;
    bool random_order_;
    Rng rng_;
    std::vector<Eigen::Index> full_order_;
    std::vector<Eigen::Index> active_order_;
};

/// Result assembly shared by the solvers.
FitResult finish(const MLMProblem& prob, Matrix B_model, double lambda, Algorithm algorithm,
                 std::size_t iterations, bool converged, double final_step);

/// When zero is optimal for every penalized entry, returns the unpenalized fit.
std::optional<FitResult> screen_null(const MLMProblem& prob, double lambda, Algorithm algorithm,
                                     const SolverWorkspace* ws);

Matrix initial_coefficients(const MLMProblem& prob, const Matrix* B_init);

}  // namespace detail

}  // namespace mlm
