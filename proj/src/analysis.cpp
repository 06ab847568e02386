#include "lcfit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

#include "lcfit/errors.hpp"

namespace lcfit {

double roc_auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size())
        throw ValidationError("roc_auc: scores and labels must have equal length");

    std::int64_t n_pos = 0, n_neg = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1)
            throw ValidationError("roc_auc: labels must be 0 or 1, got " +
                                  std::to_string(labels[i]));
        (labels[i] == 1 ? n_pos : n_neg) += 1;
    }
    if (n_pos == 0 || n_neg == 0)
        throw UndefinedMetricError("roc_auc: undefined on single-class input (" +
                                   std::to_string(n_pos) + " positives, " +
                                   std::to_string(n_neg) + " negatives)");

    // Sort once, then sweep tie groups; twice the Mann-Whitney numerator
    // (2*wins + ties) stays integral, so the division below is exact in the
    // same sense as brute-force pair counting.
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    std::int64_t twice_numerator = 0;
    std::int64_t negatives_below = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        std::int64_t group_pos = 0, group_neg = 0;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) {
            (labels[order[j]] == 1 ? group_pos : group_neg) += 1;
            ++j;
        }
        twice_numerator += group_pos * (2 * negatives_below + group_neg);
        negatives_below += group_neg;
        i = j;
    }
    return static_cast<double>(twice_numerator) / (2.0 * static_cast<double>(n_pos) *
                                                   static_cast<double>(n_neg));
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ValidationError("pearson: axes must have equal length");
    if (x.size() < 2)
        throw InsufficientDataError("pearson: need at least 2 pairs, got " +
                                    std::to_string(x.size()));

    const double n = static_cast<double>(x.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= n;
    mean_y /= n;

    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw UndefinedMetricError("pearson: undefined for zero variance on an axis");
    return sxy / std::sqrt(sxx * syy);
}

namespace {

std::vector<FitPoint> mean_points(const LearningCurveSeries& series) {
    std::vector<FitPoint> points;
    points.reserve(series.points.size());
    for (const auto& pt : series.points) points.push_back({pt.n_cases, pt.mean_roc_auc});
    return points;
}

std::optional<FitResult> try_fit(const LearningCurveSeries& series, std::int64_t cutoff,
                                 const FitConfig& config, std::string* reason = nullptr) {
    try {
        return fit_with_cutoff(mean_points(series), cutoff, config);
    } catch (const Error& e) {
        if (reason) *reason = e.what();
        return std::nullopt;
    }
}

} // namespace

std::vector<PathologyReportRow> build_report(std::span<const LearningCurveSeries> series_set,
                                             std::int64_t fit_cutoff, double threshold,
                                             std::int64_t cap, const FitConfig& config) {
    std::vector<PathologyReportRow> rows;
    rows.reserve(series_set.size());
    for (const auto& series : series_set) {
        PathologyReportRow row;
        row.pathology = series.pathology;
        row.model = series.model;
        row.roc_at_nmax = series.points.back().mean_roc_auc;
        row.fit_cutoff = fit_cutoff;
        row.threshold = threshold;
        row.n_at_threshold = SampleSizeEstimate::unreachable(cap);
        row.skipped = false;

        std::string reason;
        if (const auto result = try_fit(series, fit_cutoff, config, &reason)) {
            row.curve = result->curve;
            row.n_at_threshold = n_at_threshold(result->curve, threshold, cap);
        } else {
            row.skipped = true;
            row.skip_reason = reason;
        }
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return std::tie(a.pathology, a.model) < std::tie(b.pathology, b.model);
    });
    return rows;
}

CorrelationStudy slope_correlation(std::span<const LearningCurveSeries> series_set,
                                   std::int64_t fit_cutoff, std::int64_t slope_eval_n,
                                   const FitConfig& config) {
    CorrelationStudy study;
    study.slope_eval_n = slope_eval_n;
    study.fit_cutoff = fit_cutoff;
    study.excluded = 0;

    for (const auto& series : series_set) {
        const auto result = try_fit(series, fit_cutoff, config);
        if (!result) {
            study.excluded += 1;
            continue;
        }
        CorrelationPair pair;
        pair.slope = slope(result->curve, static_cast<double>(slope_eval_n));
        pair.roc_at_nmax = series.points.back().mean_roc_auc;
        pair.pathology = series.pathology;
        pair.model = series.model;
        pair.n_total = series.n_max;
        study.pairs.push_back(std::move(pair));
    }
    std::sort(study.pairs.begin(), study.pairs.end(), [](const auto& a, const auto& b) {
        return std::tie(a.pathology, a.model) < std::tie(b.pathology, b.model);
    });

    if (study.pairs.size() < 2)
        throw InsufficientDataError("slope_correlation: only " +
                                    std::to_string(study.pairs.size()) +
                                    " series admitted a fit at cutoff " +
                                    std::to_string(fit_cutoff) + ", need at least 2");

    std::vector<double> xs, ys;
    xs.reserve(study.pairs.size());
    ys.reserve(study.pairs.size());
    for (const auto& pair : study.pairs) {
        xs.push_back(pair.slope);
        ys.push_back(pair.roc_at_nmax);
    }
    study.pearson_r = pearson(xs, ys);
    return study;
}

MaeStudy extrapolation_mae(std::span<const LearningCurveSeries> series_set,
                           std::span<const std::int64_t> cutoffs, const FitConfig& config) {
    for (std::size_t i = 1; i < cutoffs.size(); ++i)
        if (cutoffs[i] <= cutoffs[i - 1])
            throw DomainError("extrapolation_mae: cutoffs must be sorted strictly ascending");
    if (cutoffs.empty()) throw DomainError("extrapolation_mae: need at least one cutoff");

    MaeStudy study;
    study.cutoffs.assign(cutoffs.begin(), cutoffs.end());
    for (const std::int64_t cutoff : cutoffs) {
        double total_abs_err = 0.0;
        int fitted = 0, excluded = 0;
        for (const auto& series : series_set) {
            const auto result = try_fit(series, cutoff, config);
            if (!result) {
                excluded += 1;
                continue;
            }
            const double predicted =
                evaluate(result->curve, static_cast<double>(series.n_max));
            const double observed = series.points.back().mean_roc_auc;
            total_abs_err += std::abs(predicted - observed);
            fitted += 1;
        }
        study.mae_per_cutoff.push_back(
            fitted > 0 ? std::optional<double>(total_abs_err / fitted) : std::nullopt);
        study.n_series_per_cutoff.push_back(fitted);
        study.excluded_per_cutoff.push_back(excluded);
    }
    return study;
}

std::string format_estimate(const SampleSizeEstimate& estimate) {
    switch (estimate.kind) {
        case EstimateKind::Unreachable:
            return "inf";
        case EstimateKind::AboveCap:
            if (estimate.cap == 1'000'000) return ">1M";
            return ">" + std::to_string(estimate.cap);
        case EstimateKind::Finite:
            break;
    }
    return std::to_string(required_cases(estimate));
}

} // namespace lcfit
