#ifndef LCFIT_ANALYSIS_HPP
#define LCFIT_ANALYSIS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lcfit/experiments.hpp"
#include "lcfit/fit.hpp"
#include "lcfit/power_law.hpp"

namespace lcfit {

/// Mann-Whitney ROC-AUC: the fraction of (positive, negative) score pairs
/// ranked correctly, counting ties as half. Labels are 0/1; at least one of
/// each class is required.
double roc_auc(std::span<const double> scores, std::span<const int> labels);

/// Pearson product-moment correlation (two-pass, mean-centered).
/// Requires >= 2 pairs and nonzero variance on both axes.
double pearson(std::span<const double> x, std::span<const double> y);

/// One line of the per-pathology report: observed plateau plus the
/// cutoff-restricted fit's answer to "how many cases to reach the target".
struct PathologyReportRow {
    std::string pathology;
    std::string model;
    double roc_at_nmax; // observed mean at the largest available n_cases
    SampleSizeEstimate n_at_threshold;
    std::int64_t fit_cutoff;
    double threshold;
    std::optional<PowerLawCurve> curve; // absent when the fit was skipped
    bool skipped;
    std::string skip_reason;
};

/// Scatter point for the early-slope-vs-plateau study. n_total carries the
/// series' largest n_cases for marker sizing in plot exports.
struct CorrelationPair {
    double slope;
    double roc_at_nmax;
    std::string pathology;
    std::string model;
    std::int64_t n_total;
};

struct CorrelationStudy {
    std::int64_t slope_eval_n;
    std::int64_t fit_cutoff;
    std::vector<CorrelationPair> pairs;
    double pearson_r;
    int excluded; // series that admitted no fit at the cutoff
};

struct MaeStudy {
    std::vector<std::int64_t> cutoffs;
    // One entry per cutoff: mean |predicted - observed| at n_max over the
    // series fittable at that cutoff; absent when none are.
    std::vector<std::optional<double>> mae_per_cutoff;
    std::vector<int> n_series_per_cutoff;
    std::vector<int> excluded_per_cutoff;
};

/// Fit each series at the cutoff and invert at the threshold. Series that
/// admit no fit become skip-marked rows. Rows are sorted by (pathology,
/// model).
std::vector<PathologyReportRow> build_report(std::span<const LearningCurveSeries> series_set,
                                             std::int64_t fit_cutoff, double threshold,
                                             std::int64_t cap, const FitConfig& config = {});

/// Pair each series' fitted early slope (at slope_eval_n) with its observed
/// mean at n_max and correlate.
CorrelationStudy slope_correlation(std::span<const LearningCurveSeries> series_set,
                                   std::int64_t fit_cutoff, std::int64_t slope_eval_n,
                                   const FitConfig& config = {});

/// For each cutoff, extrapolate every fittable series to its n_max and
/// average the absolute error against the observed mean there.
MaeStudy extrapolation_mae(std::span<const LearningCurveSeries> series_set,
                           std::span<const std::int64_t> cutoffs, const FitConfig& config = {});

/// Table-cell vocabulary: Finite -> ceil(n) digits, AboveCap -> ">1M" (for
/// the default cap; ">" + cap otherwise), Unreachable -> "inf".
std::string format_estimate(const SampleSizeEstimate& estimate);

} // namespace lcfit

#endif
