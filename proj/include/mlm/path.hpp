#pragma once

#include <cstddef>
#include <vector>

#include "mlm/solvers.hpp"

namespace mlm {

/// Strictly decreasing positive penalty sequence.
struct LambdaPath {
    std::vector<double> lambdas;
    std::size_t n_lambda = 50;
    double lambda_min_ratio = 1e-3;

    void validate() const;
};

struct PathFit {
    std::vector<FitResult> fits;
    std::vector<std::size_t> nnz_per_lambda;
    std::vector<double> lambdas;

    std::size_t total_iterations() const;
    bool all_converged() const;
    /// Index of the largest lambda whose nnz fraction (of penalized entries)
    /// reaches `fraction`, or the last index when none does.
    std::size_t index_for_nnz_fraction(double fraction, std::size_t penalized_count) const;
};

/// Smallest lambda at which every penalized coefficient is zero at the optimum.
double lambda_max(const MLMProblem& prob);

/// Log-spaced grid from lambda_max down to lambda_max * lambda_min_ratio.
LambdaPath default_lambda_path(const MLMProblem& prob, std::size_t n_lambda = 50,
                               double lambda_min_ratio = 1e-3);
LambdaPath lambda_path_from(double lambda_max, std::size_t n_lambda, double lambda_min_ratio);

struct PathOptions {
    bool warm_start = true;
};

/// Sequential fits along the path; each starts from the previous solution
/// (the first from zero). Non-convergence at one lambda is recorded in that
/// fit's flag and the next fit starts from the last iterate.
PathFit fit_path(const MLMProblem& prob, const LambdaPath& path, const SolverConfig& config,
                 const PathOptions& options = {});

}  // namespace mlm
