#include "mlm/path.hpp"

#include <cmath>

#include "mlm/error.hpp"

namespace mlm {

void LambdaPath::validate() const {
    if (lambdas.empty()) config_error("lambda path is empty");
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        if (!(lambdas[k] > 0.0) || !std::isfinite(lambdas[k])) {
            config_error("lambda values must be positive and finite");
        }
        if (k > 0 && !(lambdas[k] < lambdas[k - 1])) {
            config_error("lambda path must be strictly decreasing");
        }
    }
}

std::size_t PathFit::total_iterations() const {
    std::size_t total = 0;
    for (const auto& f : fits) total += f.iterations;
    return total;
}

bool PathFit::all_converged() const {
    for (const auto& f : fits) {
        if (!f.converged) return false;
    }
    return true;
}

std::size_t PathFit::index_for_nnz_fraction(double fraction, std::size_t penalized_count) const {
    for (std::size_t k = 0; k < nnz_per_lambda.size(); ++k) {
        if (static_cast<double>(nnz_per_lambda[k]) >= fraction * static_cast<double>(penalized_count)) {
            return k;
        }
    }
    return nnz_per_lambda.empty() ? 0 : nnz_per_lambda.size() - 1;
}

double lambda_max(const MLMProblem& prob) {
    if (prob.mask().count_penalized() == 0) config_error("no penalized coefficients");
    return SolverWorkspace(prob, false).lambda_max();
}

LambdaPath lambda_path_from(double top, std::size_t n_lambda, double lambda_min_ratio) {
    if (n_lambda < 1) config_error("n_lambda must be at least 1");
    if (!(lambda_min_ratio > 0.0 && lambda_min_ratio < 1.0)) {
        config_error("lambda_min_ratio must lie in (0, 1)");
    }
    if (!(top > 0.0)) numerical_error("lambda_max is zero: the response is already fit exactly");
    LambdaPath path;
    path.n_lambda = n_lambda;
    path.lambda_min_ratio = lambda_min_ratio;
    path.lambdas.resize(n_lambda);
    path.lambdas[0] = top;
    const double log_top = std::log(top);
    const double log_span = std::log(lambda_min_ratio);
    for (std::size_t k = 1; k < n_lambda; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(n_lambda - 1);
        path.lambdas[k] = std::exp(log_top + t * log_span);
    }
    return path;
}

LambdaPath default_lambda_path(const MLMProblem& prob, std::size_t n_lambda,
                               double lambda_min_ratio) {
    return lambda_path_from(lambda_max(prob), n_lambda, lambda_min_ratio);
}

PathFit fit_path(const MLMProblem& prob, const LambdaPath& path, const SolverConfig& config,
                 const PathOptions& options) {
    path.validate();
    config.validate();
    const SolverWorkspace ws(prob, needs_spectral(config.algorithm));
    PathFit out;
    out.lambdas = path.lambdas;
    out.fits.reserve(path.lambdas.size());
    for (std::size_t k = 0; k < path.lambdas.size(); ++k) {
        const Matrix* init = (options.warm_start && k > 0) ? &out.fits.back().B_model.values() : nullptr;
        out.fits.push_back(fit(prob, path.lambdas[k], config, init, &ws));
        out.nnz_per_lambda.push_back(out.fits.back().B_model.nnz());
    }
    return out;
}

}  // namespace mlm
