#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mlm/path.hpp"

namespace mlm::sim {

/// Generator for the dimension-scaling study. p and q count the intercept
/// column of X and Z respectively.
struct SimSpec {
    Eigen::Index n = 100;
    Eigen::Index m = 100;
    Eigen::Index p = 10;
    Eigen::Index q = 10;
    double frac_main_nonzero = 0.5;
    double frac_inter_nonzero = 0.125;
    double effect_sd = 2.0;
    double noise_sd = 3.0;
    bool standardize = true;
    std::uint64_t seed = 0;

    void validate() const;
};

struct Simulated {
    MLMProblem prob;
    CoefficientMatrix B_true;  // on the raw covariate scale (intercepts first)
    PenaltyMask truth_region;  // entries scored by ROC curves
};

/// Draw order: X (row-major), Z (row-major), then B row-major where each
/// entry takes one uniform for inclusion followed by one normal when
/// included (the corner intercept always takes a normal), then E row-major.
Simulated simulate_mlm(const SimSpec& spec);

/// Environmental-screening design: rows are subjects with standard-normal
/// demographic covariates; columns of Y are (chemical, tissue) pairs,
/// column index chem * n_tissue + tissue. Z holds indicators for tissues,
/// chemicals, and every tissue-chemical combination.
struct EnviroSpec {
    Eigen::Index n_chem = 100;
    Eigen::Index n_tissue = 10;
    Eigen::Index n_subjects = 108;
    Eigen::Index n_demog = 19;
    double frac_chem = 0.25;
    double frac_demog = 0.5;
    double frac_inter = 0.125;
    double effect_sd = 2.0;
    double noise_sd = 3.0;
    std::uint64_t seed = 0;
};

struct EnviroLayout {
    Eigen::Index n_chem = 0;
    Eigen::Index n_tissue = 0;
    Eigen::Index n_demog = 0;

    Eigen::Index response_column(Eigen::Index chem, Eigen::Index tissue) const {
        return chem * n_tissue + tissue;
    }
    /// Column of B (with intercept first) for a tissue indicator.
    Eigen::Index tissue_column(Eigen::Index tissue) const { return 1 + tissue; }
    Eigen::Index chem_column(Eigen::Index chem) const { return 1 + n_tissue + chem; }
    Eigen::Index combo_column(Eigen::Index chem, Eigen::Index tissue) const {
        return 1 + n_tissue + n_chem + response_column(chem, tissue);
    }
    /// Row of B (with intercept first) for a demographic covariate.
    Eigen::Index demog_row(Eigen::Index d) const { return 1 + d; }
};

struct EnviroSimulated {
    Simulated data;
    EnviroLayout layout;
};

/// Effects: tissue main effects always, chemical main effects with
/// probability frac_chem, demographic main effects with frac_demog, and
/// demographic x chemical interactions with frac_inter. Combination columns
/// carry no true effect. The ROC region is the demographic x chemical block.
EnviroSimulated simulate_enviro(const EnviroSpec& spec);

struct RocCurve {
    std::vector<double> fpr;
    std::vector<double> tpr;
    double auc = 0.0;
};

/// Canonical curve from unordered operating points: sorted by FPR, TPR made
/// nondecreasing, (0,0) and (1,1) added, trapezoidal AUC.
RocCurve roc_from_points(std::vector<std::pair<double, double>> points);

/// Curve from per-item scores where smaller means more significant; an item
/// is flagged at cutoff c when score <= c.
RocCurve roc_from_scores(const std::vector<double>& scores, const std::vector<bool>& truth);

/// One operating point per lambda over the region entries.
RocCurve roc_from_path(const PathFit& path, const CoefficientMatrix& B_true,
                       const PenaltyMask& region);

/// Benjamini-Hochberg step-up adjusted p-values.
std::vector<double> bh_adjust(const std::vector<double>& pvalues);

struct UnivariateFit {
    // pvalues[response][d]: BH-adjusted p-value of demographic d in the OLS
    // model for that response column.
    std::vector<std::vector<double>> adjusted_pvalues;
};

/// One OLS model per (chemical, tissue) response on [1, demographics].
UnivariateFit univariate_models(const EnviroSimulated& sim);

/// A (chemical, demographic) pair is flagged at cutoff c when at least
/// hits_needed of its per-tissue adjusted p-values are <= c.
RocCurve univariate_baseline(const EnviroSimulated& sim, std::size_t hits_needed);
RocCurve univariate_baseline(const EnviroSimulated& sim, const UnivariateFit& fit,
                             std::size_t hits_needed);

struct Dims {
    Eigen::Index n, m, p, q;
};

struct TimingRow {
    Dims dims;
    Algorithm algorithm;
    double mean_seconds = 0.0;
    double mean_iterations = 0.0;
    std::size_t replicates = 0;
};

struct TimingOptions {
    std::size_t n_lambda = 20;
    double lambda_min_ratio = 1e-3;
    std::size_t n_reps = 1;
    std::uint64_t seed = 0;
};

/// Wall time of a full path fit per (dims, solver), averaged over replicates.
std::vector<TimingRow> timing_grid(const std::vector<Dims>& dims,
                                   const std::vector<SolverConfig>& solvers,
                                   const TimingOptions& options);

/// time(numerator) / time(denominator) for the given dims, from a grid.
double timing_ratio(const std::vector<TimingRow>& rows, const Dims& dims, Algorithm numerator,
                    Algorithm denominator);

}  // namespace mlm::sim
