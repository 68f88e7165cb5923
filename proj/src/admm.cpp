#include <cmath>

#include "mlm/error.hpp"
#include "mlm/kernels.hpp"
#include "mlm/solvers.hpp"

namespace mlm {

namespace {

// Starting rho from the extreme eigenvalues of (Z kron X)'(Z kron X), which
// are products of the separate Gram extremes.
double initial_rho(double lambda, const SpectralCache& cache) {
    const double lo = cache.min_eigen_product();
    const double hi = cache.max_eigen_product();
    if (lambda < lo) return lo;
    if (lambda > hi) return lambda;
    return hi;
}

}  // namespace

FitResult fit_admm(const MLMProblem& prob, double lambda, const SolverConfig& config,
                   const Matrix* B_init, const SolverWorkspace* ws) {
    config.validate();
    if (!(lambda >= 0.0)) config_error("lambda must be nonnegative");
    if (auto screened = detail::screen_null(prob, lambda, Algorithm::admm, ws)) return *screened;

    std::optional<SpectralCache> local;
    const SpectralCache& cache =
        (ws != nullptr && ws->spectral() != nullptr) ? *ws->spectral()
                                                     : local.emplace(build_spectral_cache(prob));
    double rho = initial_rho(lambda, cache);
    if (!(rho > 0.0)) numerical_error("ADMM rho must be positive; the design is degenerate");

    const auto& kern = kernels::active();
    const PenaltyMask& mask = prob.mask();
    const auto size = static_cast<std::size_t>(prob.p() * prob.q());

    Matrix B1 = detail::initial_coefficients(prob, B_init);
    Matrix B0 = B1;
    // Scaled dual. From a warm start, use the value consistent with a fixed
    // point at B1 (rho * B2 = -grad f(B1)); from zero, start at zero.
    Matrix B2 = B1.isZero(0.0) ? Matrix::Zero(B1.rows(), B1.cols()) : Matrix(gradient(prob, B1) / -rho);
    Matrix B1_prev(B1.rows(), B1.cols());
    Matrix work(B1.rows(), B1.cols());

    bool done = false;
    std::size_t k = 1;
    for (; k <= config.max_iter; ++k) {
        B1_prev = B1;
        B0 = prox_f_spectral(B1 - B2, rho, cache);
        work = B0 + B2;
        kern.soft_threshold(work.data(), mask.data(), lambda / rho, B1.data(), size);
        B2 += B0 - B1;

        const double change = kern.max_abs_diff(B1.data(), B1_prev.data(), size);
        const double primal_inf = kern.max_abs_diff(B0.data(), B1.data(), size);
        const ConvergenceMeasures measures{.coef_change = change,
                                           .splitting = true,
                                           .primal = primal_inf,
                                           .dual = rho * change,
                                           .rho = rho};
        if (converged(measures, config)) {
            done = true;
            break;
        }
        if (!config.adaptive_rho) continue;
        const double r_norm = (B0 - B1).norm();
        const double s_norm = rho * (B1_prev - B1).norm();
        if (r_norm > config.mu * s_norm) {
            rho *= config.tau_incr;
            B2 /= config.tau_incr;
        } else if (s_norm > config.mu * r_norm) {
            rho /= config.tau_decr;
            B2 *= config.tau_decr;
        }
    }
    const std::size_t iterations = done ? k : config.max_iter;
    return detail::finish(prob, std::move(B1), lambda, Algorithm::admm, iterations, done, rho);
}

}  // namespace mlm
