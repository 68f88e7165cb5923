#include <cmath>
#include <numeric>

#include "mlm/error.hpp"
#include "mlm/kernels.hpp"
#include "mlm/solvers.hpp"

namespace mlm {

namespace detail {

CoordinateDescent::CoordinateDescent(const MLMProblem& prob, double lambda, const Matrix& B_init,
                                     bool random_order, std::uint64_t seed)
    : prob_(prob),
      lambda_(lambda),
      B_(B_init),
      R_(residuals(prob, B_init)),
      x_norms_(prob.X().colwise().squaredNorm().transpose()),
      z_norms_(prob.Z().colwise().squaredNorm().transpose()),
      random_order_(random_order),
      rng_(seed) {
    full_order_.resize(static_cast<std::size_t>(B_.size()));
    std::iota(full_order_.begin(), full_order_.end(), Eigen::Index{0});
}

double CoordinateDescent::update(Eigen::Index i, Eigen::Index j) {
    const double curvature = x_norms_(i) * z_norms_(j);
    if (curvature == 0.0) return 0.0;
    const auto& k = kernels::active();
    const auto n = static_cast<std::size_t>(prob_.n());
    const auto m = static_cast<std::size_t>(prob_.m());
    const double* x = prob_.X().col(i).data();
    const double* z = prob_.Z().col(j).data();

    // The partial derivative is -x' R z; u is the curvature-scaled
    // unpenalized coordinate minimizer.
    const double old = B_(i, j);
    const double u = curvature * old + k.bilinear(x, R_.data(), n, n, m, z);
    const bool penalized =
        prob_.mask().penalized(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    const double updated = (penalized ? soft_threshold(u, lambda_) : u) / curvature;
    const double delta = updated - old;
    if (delta == 0.0) return 0.0;
    B_(i, j) = updated;
    k.rank1_update(delta, x, z, R_.data(), n, n, m);
    return std::fabs(delta);
}

double CoordinateDescent::sweep(std::vector<Eigen::Index>& order) {
    if (random_order_) rng_.shuffle(order);
    const Eigen::Index p = B_.rows();
    double change = 0.0;
    for (const Eigen::Index flat : order) {
        change = std::max(change, update(flat % p, flat / p));
    }
    return change;
}

double CoordinateDescent::full_sweep() {
    if (random_order_) {
        std::iota(full_order_.begin(), full_order_.end(), Eigen::Index{0});
    }
    return sweep(full_order_);
}

double CoordinateDescent::active_sweep() {
    active_order_.clear();
    const std::uint8_t* bits = prob_.mask().data();
    for (Eigen::Index flat = 0; flat < B_.size(); ++flat) {
        if (B_.data()[flat] != 0.0 || !bits[flat]) active_order_.push_back(flat);
    }
    return sweep(active_order_);
}

}  // namespace detail

FitResult fit_cd(const MLMProblem& prob, double lambda, const SolverConfig& config,
                 const Matrix* B_init, const SolverWorkspace* ws) {
    config.validate();
    if (!(lambda >= 0.0)) config_error("lambda must be nonnegative");
    const Algorithm algorithm =
        config.algorithm == Algorithm::cd_random ? Algorithm::cd_random : Algorithm::cd_cyclic;
    if (auto screened = detail::screen_null(prob, lambda, algorithm, ws)) return *screened;

    detail::CoordinateDescent cd(prob, lambda, detail::initial_coefficients(prob, B_init),
                                 algorithm == Algorithm::cd_random, config.rng_seed);
    std::size_t sweeps = 0;
    bool done = false;
    while (sweeps < config.max_iter && !done) {
        const double change = cd.full_sweep();
        ++sweeps;
        if (converged({.coef_change = change}, config)) {
            done = true;
            break;
        }
        if (!config.active_set) continue;
        while (sweeps < config.max_iter) {
            const double active_change = cd.active_sweep();
            ++sweeps;
            if (converged({.coef_change = active_change}, config)) break;
        }
    }
    return detail::finish(prob, cd.coefficients(), lambda, algorithm, sweeps, done, 0.0);
}

}  // namespace mlm
