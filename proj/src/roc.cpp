#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "mlm/error.hpp"
#include "mlm/sim.hpp"

namespace mlm::sim {

RocCurve roc_from_points(std::vector<std::pair<double, double>> points) {
    points.emplace_back(0.0, 0.0);
    points.emplace_back(1.0, 1.0);
    std::sort(points.begin(), points.end());
    RocCurve curve;
    double best_tpr = 0.0;
    for (const auto& [fpr, tpr] : points) {
        best_tpr = std::max(best_tpr, tpr);
        curve.fpr.push_back(fpr);
        curve.tpr.push_back(best_tpr);
    }
    for (std::size_t k = 1; k < curve.fpr.size(); ++k) {
        curve.auc += (curve.fpr[k] - curve.fpr[k - 1]) * 0.5 * (curve.tpr[k] + curve.tpr[k - 1]);
    }
    return curve;
}

RocCurve roc_from_scores(const std::vector<double>& scores, const std::vector<bool>& truth) {
    if (scores.size() != truth.size()) data_error("scores and truth differ in length");
    const auto positives = static_cast<double>(std::count(truth.begin(), truth.end(), true));
    const double negatives = static_cast<double>(truth.size()) - positives;
    if (positives == 0.0 || negatives == 0.0) {
        data_error("ROC needs at least one true positive and one true negative");
    }
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    // Sweep cutoffs through the distinct scores; tied items flip together.
    std::vector<std::pair<double, double>> points;
    double tp = 0.0;
    double fp = 0.0;
    for (std::size_t k = 0; k < order.size();) {
        const double cutoff = scores[order[k]];
        while (k < order.size() && scores[order[k]] == cutoff) {
            (truth[order[k]] ? tp : fp) += 1.0;
            ++k;
        }
        points.emplace_back(fp / negatives, tp / positives);
    }
    return roc_from_points(std::move(points));
}

RocCurve roc_from_path(const PathFit& path, const CoefficientMatrix& B_true,
                       const PenaltyMask& region) {
    if (region.rows() != static_cast<std::size_t>(B_true.rows()) ||
        region.cols() != static_cast<std::size_t>(B_true.cols())) {
        data_error("ROC region must match B");
    }
    double positives = 0.0;
    double negatives = 0.0;
    for (Eigen::Index j = 0; j < B_true.cols(); ++j) {
        for (Eigen::Index i = 0; i < B_true.rows(); ++i) {
            if (!region.penalized(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) continue;
            (B_true(i, j) != 0.0 ? positives : negatives) += 1.0;
        }
    }
    if (positives == 0.0 || negatives == 0.0) {
        data_error("ROC needs at least one true positive and one true negative");
    }
    std::vector<std::pair<double, double>> points;
    for (const FitResult& fit : path.fits) {
        double tp = 0.0;
        double fp = 0.0;
        for (Eigen::Index j = 0; j < B_true.cols(); ++j) {
            for (Eigen::Index i = 0; i < B_true.rows(); ++i) {
                if (!region.penalized(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) continue;
                if (fit.B(i, j) == 0.0) continue;
                (B_true(i, j) != 0.0 ? tp : fp) += 1.0;
            }
        }
        points.emplace_back(fp / negatives, tp / positives);
    }
    return roc_from_points(std::move(points));
}

std::vector<double> bh_adjust(const std::vector<double>& pvalues) {
    const std::size_t n = pvalues.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
    std::vector<double> adjusted(n);
    double running = 1.0;
    for (std::size_t k = n; k-- > 0;) {
        const double rank = static_cast<double>(k + 1);
        running = std::min(running, pvalues[order[k]] * static_cast<double>(n) / rank);
        adjusted[order[k]] = running;
    }
    return adjusted;
}

UnivariateFit univariate_models(const EnviroSimulated& sim) {
    const MLMProblem& prob = sim.data.prob;
    const Matrix& X_raw = prob.X_raw();
    const Eigen::Index n = X_raw.rows();
    const Eigen::Index k = X_raw.cols() + 1;
    if (n <= k) numerical_error("univariate models need more subjects than covariates");
    Matrix A(n, k);
    A.col(0).setOnes();
    A.rightCols(k - 1) = X_raw;
    const Eigen::ColPivHouseholderQR<Matrix> qr(A);
    if (qr.rank() < k) numerical_error("univariate design is singular");
    const Matrix AtA_inv = (A.transpose() * A).inverse();

    const double dof = static_cast<double>(n - k);
    const boost::math::students_t dist(dof);
    UnivariateFit out;
    out.adjusted_pvalues.resize(static_cast<std::size_t>(prob.m()));
    for (Eigen::Index r = 0; r < prob.m(); ++r) {
        const Vector y = prob.Y().col(r);
        const Vector beta = qr.solve(y);
        const double rss = (y - A * beta).squaredNorm();
        const double sigma2 = rss / dof;
        std::vector<double> pvalues;
        for (Eigen::Index d = 1; d < k; ++d) {
            const double se = std::sqrt(sigma2 * AtA_inv(d, d));
            const double t = se > 0.0 ? std::fabs(beta(d)) / se : std::numeric_limits<double>::infinity();
            double pv = std::isinf(t) ? 0.0 : 2.0 * boost::math::cdf(boost::math::complement(dist, t));
            pvalues.push_back(std::clamp(pv, std::numeric_limits<double>::min(), 1.0));
        }
        out.adjusted_pvalues[static_cast<std::size_t>(r)] = bh_adjust(pvalues);
    }
    return out;
}

RocCurve univariate_baseline(const EnviroSimulated& sim, const UnivariateFit& fit,
                             std::size_t hits_needed) {
    const EnviroLayout& layout = sim.layout;
    if (hits_needed < 1 || hits_needed > static_cast<std::size_t>(layout.n_tissue)) {
        config_error("hits_needed must lie in [1, n_tissue]");
    }
    std::vector<double> scores;
    std::vector<bool> truth;
    for (Eigen::Index c = 0; c < layout.n_chem; ++c) {
        for (Eigen::Index d = 0; d < layout.n_demog; ++d) {
            std::vector<double> per_tissue;
            for (Eigen::Index t = 0; t < layout.n_tissue; ++t) {
                const auto r = static_cast<std::size_t>(layout.response_column(c, t));
                per_tissue.push_back(fit.adjusted_pvalues[r][static_cast<std::size_t>(d)]);
            }
            std::sort(per_tissue.begin(), per_tissue.end());
            // Flagged at cutoff c exactly when the hits_needed-th smallest
            // p-value is <= c.
            scores.push_back(per_tissue[hits_needed - 1]);
            truth.push_back(sim.data.B_true(layout.demog_row(d), layout.chem_column(c)) != 0.0);
        }
    }
    return roc_from_scores(scores, truth);
}

RocCurve univariate_baseline(const EnviroSimulated& sim, std::size_t hits_needed) {
    return univariate_baseline(sim, univariate_models(sim), hits_needed);
}

}  // namespace mlm::sim
