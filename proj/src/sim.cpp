#include <chrono>
#include <cmath>

#include "mlm/error.hpp"
#include "mlm/rng.hpp"
#include "mlm/sim.hpp"

namespace mlm::sim {

namespace {

Matrix normal_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    Matrix M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = rng.normal();
    }
    return M;
}

Matrix with_intercept(const Matrix& raw) {
    Matrix out(raw.rows(), raw.cols() + 1);
    out.col(0).setOnes();
    out.rightCols(raw.cols()) = raw;
    return out;
}

// Y = [1|X] B [1|Z]' + E with E drawn row-major after everything else.
Matrix respond(Rng& rng, const Matrix& X_raw, const Matrix& Z_raw, const Matrix& B,
               double noise_sd) {
    Matrix Y = with_intercept(X_raw) * B * with_intercept(Z_raw).transpose();
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
        for (Eigen::Index j = 0; j < Y.cols(); ++j) Y(i, j) += rng.normal(0.0, noise_sd);
    }
    return Y;
}

}  // namespace

void SimSpec::validate() const {
    if (n < 2 || m < 2 || p < 2 || q < 2) config_error("simulation needs n, m, p, q >= 2");
    auto fraction_ok = [](double f) { return f >= 0.0 && f <= 1.0; };
    if (!fraction_ok(frac_main_nonzero) || !fraction_ok(frac_inter_nonzero)) {
        config_error("nonzero fractions must lie in [0, 1]");
    }
    if (!(effect_sd > 0.0) || !(noise_sd > 0.0)) config_error("standard deviations must be positive");
}

Simulated simulate_mlm(const SimSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    const Matrix X_raw = normal_matrix(rng, spec.n, spec.p - 1);
    const Matrix Z_raw = normal_matrix(rng, spec.m, spec.q - 1);

    Matrix B = Matrix::Zero(spec.p, spec.q);
    for (Eigen::Index i = 0; i < spec.p; ++i) {
        for (Eigen::Index j = 0; j < spec.q; ++j) {
            if (i == 0 && j == 0) {
                B(i, j) = rng.normal(0.0, spec.effect_sd);
                continue;
            }
            const bool main = i == 0 || j == 0;
            const double prob = main ? spec.frac_main_nonzero : spec.frac_inter_nonzero;
            if (rng.bernoulli(prob)) B(i, j) = rng.normal(0.0, spec.effect_sd);
        }
    }
    Matrix Y = respond(rng, X_raw, Z_raw, B, spec.noise_sd);

    ProblemOptions options;
    options.intercept_x = options.intercept_z = true;
    options.standardize_x = options.standardize_z = spec.standardize;
    MLMProblem prob(std::move(Y), X_raw, Z_raw, options);
    PenaltyMask region(static_cast<std::size_t>(spec.p), static_cast<std::size_t>(spec.q), true);
    for (Eigen::Index j = 0; j < spec.q; ++j) region.set(0, static_cast<std::size_t>(j), false);
    for (Eigen::Index i = 0; i < spec.p; ++i) region.set(static_cast<std::size_t>(i), 0, false);
    CoefficientMatrix truth(std::move(B), prob.mask());
    return {std::move(prob), std::move(truth), std::move(region)};
}

EnviroSimulated simulate_enviro(const EnviroSpec& spec) {
    if (spec.n_chem < 1 || spec.n_tissue < 1 || spec.n_demog < 1 || spec.n_subjects < 2) {
        config_error("environmental simulation dimensions must be positive");
    }
    if (spec.n_chem * spec.n_tissue < 2) config_error("need at least two chemical-tissue responses");
    EnviroLayout layout{spec.n_chem, spec.n_tissue, spec.n_demog};
    const Eigen::Index m = spec.n_chem * spec.n_tissue;
    const Eigen::Index q_raw = spec.n_tissue + spec.n_chem + m;
    const Eigen::Index p = 1 + spec.n_demog;
    const Eigen::Index q = 1 + q_raw;

    Rng rng(spec.seed);
    const Matrix X_raw = normal_matrix(rng, spec.n_subjects, spec.n_demog);
    Matrix Z_raw = Matrix::Zero(m, q_raw);
    for (Eigen::Index c = 0; c < spec.n_chem; ++c) {
        for (Eigen::Index t = 0; t < spec.n_tissue; ++t) {
            const Eigen::Index r = layout.response_column(c, t);
            Z_raw(r, layout.tissue_column(t) - 1) = 1.0;
            Z_raw(r, layout.chem_column(c) - 1) = 1.0;
            Z_raw(r, layout.combo_column(c, t) - 1) = 1.0;
        }
    }

    Matrix B = Matrix::Zero(p, q);
    PenaltyMask region(static_cast<std::size_t>(p), static_cast<std::size_t>(q), false);
    for (Eigen::Index i = 0; i < p; ++i) {
        for (Eigen::Index j = 0; j < q; ++j) {
            const bool chem_col = j >= layout.chem_column(0) && j < layout.combo_column(0, 0);
            const bool tissue_col = j >= 1 && j < layout.chem_column(0);
            double prob = 0.0;
            if (i == 0 && (j == 0 || tissue_col)) {
                prob = 1.0;
            } else if (i == 0 && chem_col) {
                prob = spec.frac_chem;
            } else if (i > 0 && j == 0) {
                prob = spec.frac_demog;
            } else if (i > 0 && chem_col) {
                prob = spec.frac_inter;
                region.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), true);
            }
            if (prob == 0.0) continue;
            if (prob == 1.0 || rng.bernoulli(prob)) B(i, j) = rng.normal(0.0, spec.effect_sd);
        }
    }
    Matrix Y = respond(rng, X_raw, Z_raw, B, spec.noise_sd);

    ProblemOptions options;
    options.intercept_x = options.intercept_z = true;
    options.standardize_x = options.standardize_z = true;
    MLMProblem prob(std::move(Y), X_raw, std::move(Z_raw), options);
    CoefficientMatrix truth(std::move(B), prob.mask());
    return {{std::move(prob), std::move(truth), std::move(region)}, layout};
}

std::vector<TimingRow> timing_grid(const std::vector<Dims>& dims,
                                   const std::vector<SolverConfig>& solvers,
                                   const TimingOptions& options) {
    if (options.n_reps == 0) config_error("timing needs at least one replicate");
    std::vector<TimingRow> rows;
    for (const Dims& d : dims) {
        std::vector<double> seconds(solvers.size(), 0.0);
        std::vector<double> iterations(solvers.size(), 0.0);
        for (std::size_t rep = 0; rep < options.n_reps; ++rep) {
            SimSpec spec;
            spec.n = d.n;
            spec.m = d.m;
            spec.p = d.p;
            spec.q = d.q;
            spec.seed = options.seed + rep;
            const Simulated sim = simulate_mlm(spec);
            const LambdaPath path =
                default_lambda_path(sim.prob, options.n_lambda, options.lambda_min_ratio);
            for (std::size_t s = 0; s < solvers.size(); ++s) {
                const auto start = std::chrono::steady_clock::now();
                const PathFit fits = fit_path(sim.prob, path, solvers[s]);
                const auto stop = std::chrono::steady_clock::now();
                seconds[s] += std::chrono::duration<double>(stop - start).count();
                iterations[s] += static_cast<double>(fits.total_iterations());
            }
        }
        for (std::size_t s = 0; s < solvers.size(); ++s) {
            const double reps = static_cast<double>(options.n_reps);
            rows.push_back({d, solvers[s].algorithm, seconds[s] / reps, iterations[s] / reps,
                            options.n_reps});
        }
    }
    return rows;
}

double timing_ratio(const std::vector<TimingRow>& rows, const Dims& dims, Algorithm numerator,
                    Algorithm denominator) {
    auto find = [&](Algorithm a) {
        for (const auto& r : rows) {
            if (r.algorithm == a && r.dims.n == dims.n && r.dims.m == dims.m &&
                r.dims.p == dims.p && r.dims.q == dims.q) {
                return r.mean_seconds;
            }
        }
        config_error("timing row not found");
    };
    return find(numerator) / find(denominator);
}

}  // namespace mlm::sim
