#include "mlm/solvers.hpp"

#include <array>
#include <cmath>

#include "mlm/error.hpp"
#include "mlm/kernels.hpp"

namespace mlm {

namespace {

// Free-entry counts up to this use a dense solve of the restricted normal
// equations; larger sets fall back to coordinate descent.
constexpr std::size_t kMaxDirectUnpenalized = 2000;

constexpr std::array<std::pair<Algorithm, std::string_view>, 6> kAlgorithmNames{{
    {Algorithm::cd_cyclic, "cd_cyclic"},
    {Algorithm::cd_random, "cd_random"},
    {Algorithm::ista, "ista"},
    {Algorithm::fista_fixed, "fista_fixed"},
    {Algorithm::fista_backtrack, "fista_backtrack"},
    {Algorithm::admm, "admm"},
}};

}  // namespace

std::string_view to_string(Algorithm algorithm) {
    for (const auto& [value, name] : kAlgorithmNames) {
        if (value == algorithm) return name;
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
    for (const auto& [value, label] : kAlgorithmNames) {
        if (label == name) return value;
    }
    config_error("unknown algorithm '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
    if (!(tol > 0.0)) config_error("tol must be positive");
    if (max_iter == 0) config_error("max_iter must be at least 1");
    if (!(init_step > 0.0)) config_error("init_step must be positive");
    if (!(gamma > 0.0 && gamma < 1.0)) config_error("gamma must lie in (0, 1)");
    if (!(mu > 1.0)) config_error("mu must exceed 1");
    if (!(tau_incr > 1.0) || !(tau_decr > 1.0)) config_error("tau_incr and tau_decr must exceed 1");
}

bool converged(const ConvergenceMeasures& measures, const SolverConfig& config) {
    if (!(measures.coef_change <= config.tol)) return false;
    if (!measures.splitting) return true;
    // The dual residual carries a factor rho; compare it in coefficient units.
    return measures.primal <= config.tol && measures.dual <= config.tol * measures.rho;
}

bool needs_spectral(Algorithm algorithm) {
    return algorithm == Algorithm::admm || algorithm == Algorithm::ista ||
           algorithm == Algorithm::fista_fixed;
}

Matrix fit_unpenalized(const MLMProblem& prob) {
    const Eigen::Index p = prob.p();
    const Eigen::Index q = prob.q();
    Matrix B = Matrix::Zero(p, q);
    std::vector<std::pair<Eigen::Index, Eigen::Index>> free;
    for (Eigen::Index j = 0; j < q; ++j) {
        for (Eigen::Index i = 0; i < p; ++i) {
            if (!prob.mask().penalized(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) {
                free.emplace_back(i, j);
            }
        }
    }
    if (free.empty()) return B;

    // The normal equations restricted to the free entries have Gram entries
    // (X'X)(i,i') * (Z'Z)(j,j'), so a direct solve needs only the small Gram
    // matrices. A complete orthogonal decomposition gives the minimum-norm
    // solution when the free columns are collinear.
    if (free.size() <= kMaxDirectUnpenalized) {
        const Matrix XtX = prob.X().transpose() * prob.X();
        const Matrix ZtZ = prob.Z().transpose() * prob.Z();
        const Matrix XtYZ = gradient(prob, B) * -1.0;
        const auto f = static_cast<Eigen::Index>(free.size());
        Matrix G(f, f);
        Vector rhs(f);
        for (Eigen::Index a = 0; a < f; ++a) {
            const auto [i, j] = free[static_cast<std::size_t>(a)];
            rhs(a) = XtYZ(i, j);
            for (Eigen::Index b = 0; b < f; ++b) {
                const auto [k, l] = free[static_cast<std::size_t>(b)];
                G(a, b) = XtX(i, k) * ZtZ(j, l);
            }
        }
        const Vector beta = Eigen::CompleteOrthogonalDecomposition<Matrix>(G).solve(rhs);
        for (Eigen::Index a = 0; a < f; ++a) {
            const auto [i, j] = free[static_cast<std::size_t>(a)];
            B(i, j) = beta(a);
        }
        return B;
    }

    const auto& k = kernels::active();
    const auto n = static_cast<std::size_t>(prob.n());
    const auto m = static_cast<std::size_t>(prob.m());
    Matrix R = prob.Y();
    const Vector xn = prob.X().colwise().squaredNorm().transpose();
    const Vector zn = prob.Z().colwise().squaredNorm().transpose();
    for (int sweep = 0; sweep < 100000; ++sweep) {
        double change = 0.0;
        for (const auto& [i, j] : free) {
            const double curvature = xn(i) * zn(j);
            if (curvature == 0.0) continue;
            const double xrz = k.bilinear(prob.X().col(i).data(), R.data(), n, n, m,
                                          prob.Z().col(j).data());
            const double delta = xrz / curvature;
            if (delta == 0.0) continue;
            B(i, j) += delta;
            k.rank1_update(delta, prob.X().col(i).data(), prob.Z().col(j).data(), R.data(), n, n, m);
            change = std::max(change, std::fabs(delta));
        }
        if (change <= 1e-14 * std::max(1.0, B.cwiseAbs().maxCoeff())) break;
    }
    return B;
}

SolverWorkspace::SolverWorkspace(const MLMProblem& prob, bool with_spectral)
    : null_fit_(fit_unpenalized(prob)), null_gradient_(gradient(prob, null_fit_)) {
    const std::uint8_t* bits = prob.mask().data();
    for (Eigen::Index k = 0; k < null_gradient_.size(); ++k) {
        if (bits[k]) lambda_max_ = std::max(lambda_max_, std::fabs(null_gradient_.data()[k]));
    }
    if (with_spectral) spectral_ = build_spectral_cache(prob);
}

namespace detail {

Matrix initial_coefficients(const MLMProblem& prob, const Matrix* B_init) {
    if (B_init == nullptr) return Matrix::Zero(prob.p(), prob.q());
    if (B_init->rows() != prob.p() || B_init->cols() != prob.q()) {
        data_error("initial coefficients must be p x q");
    }
    return *B_init;
}

FitResult finish(const MLMProblem& prob, Matrix B_model, double lambda, Algorithm algorithm,
                 std::size_t iterations, bool is_converged, double final_step) {
    FitResult out;
    out.final_objective = objective(prob, B_model, lambda);
    out.B_model = CoefficientMatrix(std::move(B_model), prob.mask());
    out.B = prob.standardized() ? backtransform(prob, out.B_model) : out.B_model;
    out.iterations = iterations;
    out.converged = is_converged;
    out.algorithm = algorithm;
    out.lambda = lambda;
    out.final_step = final_step;
    return out;
}

std::optional<FitResult> screen_null(const MLMProblem& prob, double lambda, Algorithm algorithm,
                                     const SolverWorkspace* ws) {
    std::optional<SolverWorkspace> local;
    if (ws == nullptr) ws = &local.emplace(prob, false);
    if (prob.mask().count_penalized() == 0 || lambda < ws->lambda_max()) return std::nullopt;
    return finish(prob, ws->null_fit(), lambda, algorithm, 0, true, 0.0);
}

}  // namespace detail

FitResult fit(const MLMProblem& prob, double lambda, const SolverConfig& config,
              const Matrix* B_init, const SolverWorkspace* ws) {
    switch (config.algorithm) {
        case Algorithm::cd_cyclic:
        case Algorithm::cd_random:
            return fit_cd(prob, lambda, config, B_init, ws);
        case Algorithm::ista:
            return fit_ista(prob, lambda, config, B_init, ws);
        case Algorithm::fista_fixed:
            return fit_fista_fixed(prob, lambda, config, B_init, ws);
        case Algorithm::fista_backtrack:
            return fit_fista_backtrack(prob, lambda, config, B_init, ws);
        case Algorithm::admm:
            return fit_admm(prob, lambda, config, B_init, ws);
    }
    config_error("unknown algorithm");
}

}  // namespace mlm
