#include "mlm/cv.hpp"

#include <array>
#include <atomic>
#include <exception>
#include <optional>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "mlm/error.hpp"
#include "mlm/rng.hpp"

namespace mlm {

namespace {

constexpr std::array<std::pair<CvCriterion, std::string_view>, 4> kCriterionNames{{
    {CvCriterion::mse, "mse"},
    {CvCriterion::test_error, "test_error"},
    {CvCriterion::aic, "aic"},
    {CvCriterion::bic, "bic"},
}};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct FoldOutcome {
    bool valid = false;
    std::vector<double> values;
};

FoldOutcome run_fold(const MLMProblem& prob, const LambdaPath& path, const SolverConfig& solver,
                     const CVConfig& cv, const std::vector<std::size_t>& fold_of_row,
                     std::size_t fold) {
    std::vector<Eigen::Index> train_rows;
    std::vector<Eigen::Index> test_rows;
    for (std::size_t r = 0; r < fold_of_row.size(); ++r) {
        (fold_of_row[r] == fold ? test_rows : train_rows).push_back(static_cast<Eigen::Index>(r));
    }
    FoldOutcome out;
    if (test_rows.empty() || train_rows.size() < 2) return out;

    std::optional<MLMProblem> train;
    try {
        train.emplace(prob.subset_rows(train_rows));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::data) throw;
        return out;  // degenerate fold, e.g. a column constant on the held-in rows
    }

    Matrix Y_test(static_cast<Eigen::Index>(test_rows.size()), prob.m());
    Matrix X_test(static_cast<Eigen::Index>(test_rows.size()), prob.X_raw().cols());
    for (std::size_t k = 0; k < test_rows.size(); ++k) {
        Y_test.row(static_cast<Eigen::Index>(k)) = prob.Y().row(test_rows[k]);
        X_test.row(static_cast<Eigen::Index>(k)) = prob.X_raw().row(test_rows[k]);
    }

    const PathFit fits = fit_path(*train, path, solver);
    const double cells = static_cast<double>(train->n() * train->m());
    const double unpenalized = static_cast<double>(train->mask().count_unpenalized());
    out.values.reserve(fits.fits.size());
    for (const FitResult& f : fits.fits) {
        switch (cv.criterion) {
            case CvCriterion::mse:
            case CvCriterion::test_error:
                out.values.push_back(heldout_mse(*train, f.B_model.values(), Y_test, X_test));
                break;
            case CvCriterion::aic:
            case CvCriterion::bic: {
                const double rss = residuals(*train, f.B_model.values()).squaredNorm();
                const double df = static_cast<double>(f.B_model.nnz()) + unpenalized;
                const double fit_term = cells * std::log(rss / cells);
                out.values.push_back(cv.criterion == CvCriterion::aic
                                         ? fit_term + 2.0 * df
                                         : fit_term + df * std::log(cells));
                break;
            }
        }
    }
    out.valid = true;
    return out;
}

}  // namespace

std::string_view to_string(CvCriterion criterion) {
    for (const auto& [value, name] : kCriterionNames) {
        if (value == criterion) return name;
    }
    return "unknown";
}

CvCriterion parse_criterion(std::string_view name) {
    for (const auto& [value, label] : kCriterionNames) {
        if (label == name) return value;
    }
    config_error("unknown CV criterion '" + std::string(name) + "'");
}

std::vector<std::size_t> assign_folds(std::size_t n_rows, std::size_t n_folds, std::uint64_t seed) {
    if (n_folds < 2 || n_folds > n_rows) {
        config_error("n_folds must lie in [2, n] (n = " + std::to_string(n_rows) + ")");
    }
    std::vector<std::size_t> order(n_rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);
    std::vector<std::size_t> fold_of_row(n_rows);
    for (std::size_t k = 0; k < n_rows; ++k) fold_of_row[order[k]] = k % n_folds;
    return fold_of_row;
}

double heldout_mse(const MLMProblem& train, const Matrix& B_model, const Matrix& Y_test,
                   const Matrix& X_raw_test) {
    const Matrix X_test = train.x_transform().apply(X_raw_test);
    const Matrix pred = (X_test * B_model) * train.Z().transpose();
    return (Y_test - pred).squaredNorm() / static_cast<double>(Y_test.size());
}

std::size_t select_index(const std::vector<double>& mean_criterion) {
    std::size_t best = mean_criterion.size();
    for (std::size_t k = 0; k < mean_criterion.size(); ++k) {
        if (std::isnan(mean_criterion[k])) continue;
        // Strict comparison: ties keep the earlier (larger) lambda.
        if (best == mean_criterion.size() || mean_criterion[k] < mean_criterion[best]) best = k;
    }
    if (best == mean_criterion.size()) numerical_error("every cross-validation entry is invalid");
    return best;
}

double select_lambda(const CVResult& result) {
    return result.lambdas.at(select_index(result.mean_criterion));
}

CVResult kfold_cv(const MLMProblem& prob, const LambdaPath& path, const SolverConfig& solver,
                  const CVConfig& cv) {
    path.validate();
    solver.validate();
    const auto n = static_cast<std::size_t>(prob.n());
    CVResult result;
    result.lambdas = path.lambdas;
    result.fold_of_row = assign_folds(n, cv.n_folds, cv.fold_seed);

    std::vector<FoldOutcome> outcomes(cv.n_folds);
    const std::size_t workers = std::max<std::size_t>(1, std::min(cv.workers, cv.n_folds));
    if (workers == 1) {
        for (std::size_t f = 0; f < cv.n_folds; ++f) {
            outcomes[f] = run_fold(prob, path, solver, cv, result.fold_of_row, f);
        }
    } else {
        // Folds are claimed from a shared counter; each writes only its own slot.
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t f = next++; f < cv.n_folds; f = next++) {
                        outcomes[f] = run_fold(prob, path, solver, cv, result.fold_of_row, f);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (const auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    const std::size_t n_lambda = path.lambdas.size();
    result.criterion_matrix = Matrix::Constant(static_cast<Eigen::Index>(cv.n_folds),
                                               static_cast<Eigen::Index>(n_lambda), kNaN);
    result.mean_criterion.assign(n_lambda, kNaN);
    for (std::size_t f = 0; f < cv.n_folds; ++f) {
        if (!outcomes[f].valid) continue;
        for (std::size_t k = 0; k < n_lambda; ++k) {
            result.criterion_matrix(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(k)) =
                outcomes[f].values[k];
        }
    }
    for (std::size_t k = 0; k < n_lambda; ++k) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t f = 0; f < cv.n_folds; ++f) {
            const double v =
                result.criterion_matrix(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(k));
            if (std::isnan(v)) continue;
            sum += v;
            ++count;
        }
        if (count > 0) result.mean_criterion[k] = sum / static_cast<double>(count);
    }
    result.selected_index = select_index(result.mean_criterion);
    result.selected_lambda = result.lambdas[result.selected_index];
    return result;
}

}  // namespace mlm
