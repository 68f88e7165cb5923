#include <cmath>
#include <sstream>

#include "mlm/error.hpp"
#include "mlm/kernels.hpp"
#include "mlm/solvers.hpp"

namespace mlm {

namespace {

double fixed_step(const MLMProblem& prob, const SolverWorkspace* ws) {
    if (ws != nullptr && ws->spectral() != nullptr) return lipschitz_step(*ws->spectral());
    return lipschitz_step(prob);
}

// out = S_{step*lambda}(point - step * grad), mask-aware.
void prox_gradient_step(const Matrix& point, const Matrix& grad, double step, double lambda,
                        const PenaltyMask& mask, Matrix& out) {
    out = point - step * grad;
    kernels::active().soft_threshold(out.data(), mask.data(), step * lambda, out.data(),
                                     static_cast<std::size_t>(out.size()));
}

double max_change(const Matrix& a, const Matrix& b) {
    return kernels::active().max_abs_diff(a.data(), b.data(), static_cast<std::size_t>(a.size()));
}

struct Prepared {
    bool screened = false;
    FitResult result;
};

Prepared prepare(const MLMProblem& prob, double lambda, const SolverConfig& config,
                 Algorithm algorithm, const SolverWorkspace* ws) {
    config.validate();
    if (!(lambda >= 0.0)) config_error("lambda must be nonnegative");
    Prepared out;
    if (auto screened = detail::screen_null(prob, lambda, algorithm, ws)) {
        out.screened = true;
        out.result = std::move(*screened);
    }
    return out;
}

// Shared loop for ISTA and FISTA with a fixed step. ISTA is the case with
// the extrapolation switched off.
FitResult proximal_gradient_fixed(const MLMProblem& prob, double lambda, const SolverConfig& config,
                                  const Matrix* B_init, const SolverWorkspace* ws,
                                  Algorithm algorithm) {
    if (auto pre = prepare(prob, lambda, config, algorithm, ws); pre.screened) return pre.result;
    const bool accelerate = algorithm == Algorithm::fista_fixed;
    const double step = fixed_step(prob, ws);
    const PenaltyMask& mask = prob.mask();

    Matrix B = detail::initial_coefficients(prob, B_init);
    Matrix B_prev = B;
    Matrix A = B;
    Matrix B_next(B.rows(), B.cols());
    bool done = false;
    std::size_t k = 1;
    for (; k <= config.max_iter; ++k) {
        const Matrix grad = gradient(prob, A);
        prox_gradient_step(A, grad, step, lambda, mask, B_next);
        // Change is measured from the point the step was taken from. For
        // ISTA that is the previous iterate; for FISTA it is the
        // extrapolated point, since a small B_k - B_(k-1) can occur at a
        // turning point of the momentum oscillation far from the optimum.
        const double change = max_change(B_next, A);
        B_prev.swap(B);
        B.swap(B_next);
        if (accelerate) {
            const double momentum = static_cast<double>(k - 1) / static_cast<double>(k + 2);
            A = B + momentum * (B - B_prev);
        } else {
            A = B;
        }
        if (converged({.coef_change = change}, config)) {
            done = true;
            break;
        }
    }
    const std::size_t iterations = done ? k : config.max_iter;
    return detail::finish(prob, std::move(B), lambda, algorithm, iterations, done, step);
}

}  // namespace

FitResult fit_ista(const MLMProblem& prob, double lambda, const SolverConfig& config,
                   const Matrix* B_init, const SolverWorkspace* ws) {
    return proximal_gradient_fixed(prob, lambda, config, B_init, ws, Algorithm::ista);
}

FitResult fit_fista_fixed(const MLMProblem& prob, double lambda, const SolverConfig& config,
                          const Matrix* B_init, const SolverWorkspace* ws) {
    return proximal_gradient_fixed(prob, lambda, config, B_init, ws, Algorithm::fista_fixed);
}

FitResult fit_fista_backtrack(const MLMProblem& prob, double lambda, const SolverConfig& config,
                              const Matrix* B_init, const SolverWorkspace* ws) {
    const Algorithm algorithm = Algorithm::fista_backtrack;
    if (auto pre = prepare(prob, lambda, config, algorithm, ws); pre.screened) return pre.result;
    const PenaltyMask& mask = prob.mask();
    const auto& kern = kernels::active();

    Matrix B = detail::initial_coefficients(prob, B_init);
    Matrix B_prev = B;
    Matrix A = B;
    Matrix candidate(B.rows(), B.cols());
    // Residuals are affine in the coefficients, so the residual at the
    // extrapolated point follows from those of the last two iterates.
    Matrix R_B = residuals(prob, B);
    Matrix R_prev = R_B;
    Matrix R_A;
    Matrix R_candidate;
    const Matrix gram_x = prob.X().transpose() * prob.X();
    const Matrix gram_z = prob.Z().transpose() * prob.Z();
    double momentum = 0.0;
    double step = config.init_step;
    bool done = false;
    std::size_t k = 1;
    for (; k <= config.max_iter; ++k) {
        if (momentum == 0.0) {
            R_A = R_B;
        } else {
            R_A = R_B + momentum * (R_B - R_prev);
        }
        const Matrix grad = gradient_from_residuals(prob, R_A);
        // Shrink until the quadratic model at A majorizes the loss at the
        // candidate. For this loss the gap between the two reduces to
        // ||X D Z'||^2 / 2 against ||D||^2 / (2 step) with D = candidate - A,
        // which avoids subtracting two large loss values.
        while (true) {
            prox_gradient_step(A, grad, step, lambda, mask, candidate);
            const Matrix diff = candidate - A;
            // ||X D Z'||^2 = <X'X D, D Z'Z>, which only needs p x p and q x q products.
            const Matrix left = gram_x * diff;
            const Matrix right = diff * gram_z;
            const double curvature =
                kern.dot(left.data(), right.data(), static_cast<std::size_t>(left.size()));
            const double budget = diff.squaredNorm() / step;
            if (std::isfinite(curvature) && curvature <= budget * (1.0 + 1e-12)) {
                R_candidate = residuals(prob, candidate);
                break;
            }
            step *= config.gamma;
            if (step < 1e-15) {
                std::ostringstream msg;
                msg << "backtracking step underflow at iteration " << k << " (lambda = " << lambda
                    << ")";
                numerical_error(msg.str());
            }
        }
        const double change = max_change(candidate, A);
        B_prev.swap(B);
        B = candidate;
        R_prev.swap(R_B);
        R_B.swap(R_candidate);
        momentum = static_cast<double>(k - 1) / static_cast<double>(k + 2);
        A = B + momentum * (B - B_prev);
        if (converged({.coef_change = change}, config)) {
            done = true;
            break;
        }
    }
    const std::size_t iterations = done ? k : config.max_iter;
    return detail::finish(prob, std::move(B), lambda, algorithm, iterations, done, step);
}

}  // namespace mlm
