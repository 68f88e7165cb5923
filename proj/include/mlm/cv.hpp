#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "mlm/path.hpp"

namespace mlm {

enum class CvCriterion { mse, test_error, aic, bic };

std::string_view to_string(CvCriterion criterion);
CvCriterion parse_criterion(std::string_view name);

struct CVConfig {
    std::size_t n_folds = 10;
    CvCriterion criterion = CvCriterion::mse;
    std::uint64_t fold_seed = 0;
    std::size_t workers = 1;  // folds evaluated concurrently
};

struct CVResult {
    Matrix criterion_matrix;             // folds x lambdas; NaN where a fold was invalid
    std::vector<double> mean_criterion;  // NaN where no fold was valid
    std::vector<double> lambdas;
    std::vector<std::size_t> fold_of_row;
    double selected_lambda = 0.0;
    std::size_t selected_index = 0;
};

/// Row-to-fold assignment: a seeded permutation dealt round-robin.
std::vector<std::size_t> assign_folds(std::size_t n_rows, std::size_t n_folds, std::uint64_t seed);

/// k-fold cross-validation over the rows of Y and X. Each training fold is
/// re-standardized from its own rows; held-out rows use the training
/// transform.
CVResult kfold_cv(const MLMProblem& prob, const LambdaPath& path, const SolverConfig& solver,
                  const CVConfig& cv);

/// Lambda minimizing the mean criterion; ties go to the larger lambda.
double select_lambda(const CVResult& result);
std::size_t select_index(const std::vector<double>& mean_criterion);

/// Held-out mean squared error of a working-scale fit trained on `train`.
double heldout_mse(const MLMProblem& train, const Matrix& B_model, const Matrix& Y_test,
                   const Matrix& X_raw_test);

}  // namespace mlm
