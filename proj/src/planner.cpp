#include "lcfit/planner.hpp"

#include <algorithm>
#include <string>

#include "lcfit/errors.hpp"

namespace lcfit {

SamplingSchedule::SamplingSchedule(std::vector<std::int64_t> sizes_) : sizes(std::move(sizes_)) {
    if (sizes.empty()) throw DomainError("schedule: must contain at least one size");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 1)
            throw DomainError("schedule: sizes must be >= 1, got " + std::to_string(sizes[i]));
        if (i > 0 && sizes[i] <= sizes[i - 1])
            throw DomainError("schedule: sizes must be strictly increasing");
    }
}

const SamplingSchedule& SamplingSchedule::standard() {
    static const SamplingSchedule schedule{
        {5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 100, 250, 500, 1000}};
    return schedule;
}

std::optional<std::int64_t> SamplingSchedule::next_after(std::int64_t n) const {
    const auto it = std::upper_bound(sizes.begin(), sizes.end(), n);
    if (it == sizes.end()) return std::nullopt;
    return *it;
}

CampaignBudget budget_for(std::int64_t n_positive, std::int64_t negatives_available,
                          std::int64_t ratio) {
    if (n_positive < 1)
        throw DomainError("budget: n_positive must be >= 1, got " + std::to_string(n_positive));
    if (ratio < 1) throw DomainError("budget: ratio must be >= 1, got " + std::to_string(ratio));
    if (negatives_available < 0)
        throw DomainError("budget: negatives_available must be >= 0");

    CampaignBudget budget;
    budget.n_positive = n_positive;
    budget.negative_ratio = ratio;
    budget.n_negative = n_positive * ratio;
    budget.total = n_positive * (1 + ratio);
    budget.duplicated_negatives = std::max<std::int64_t>(0, budget.n_negative - negatives_available);
    return budget;
}

SplitSizes split_sizes(std::int64_t total) {
    if (total < 10)
        throw DomainError("split: total must be >= 10 for a 10% validation/test share, got " +
                          std::to_string(total));
    // round(total/10) with ties going down, i.e. toward the training share
    const std::int64_t share = (total + 4) / 10;
    return {total - 2 * share, share, share};
}

NextAction next_action(const LearningCurveSeries& series, double threshold, int stability_window,
                       double stability_tol, const FitConfig& config,
                       const SamplingSchedule& schedule, std::int64_t cap) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw DomainError("next_action: threshold must lie in (0, 1), got " +
                          std::to_string(threshold));
    if (stability_window < 2)
        throw DomainError("next_action: stability_window must be >= 2, got " +
                          std::to_string(stability_window));
    if (!(stability_tol >= 0.0))
        throw DomainError("next_action: stability_tol must be >= 0");
    if (series.points.size() < 3)
        throw InsufficientDataError("next_action: series " + series.pathology + "/" +
                                    series.model + " has " +
                                    std::to_string(series.points.size()) +
                                    " distinct n values, need at least 3");

    NextAction action{NextActionKind::Continue, 0, {}};

    if (series.points.back().mean_roc_auc >= threshold) {
        action.kind = NextActionKind::StopPredictedReached;
        return action;
    }

    std::vector<FitPoint> mean_points;
    mean_points.reserve(series.points.size());
    for (const auto& pt : series.points) mean_points.push_back({pt.n_cases, pt.mean_roc_auc});

    // Refit at each trailing cutoff; a window is usable once every cutoff in
    // it still leaves >= 3 distinct n values.
    const int n_points = static_cast<int>(series.points.size());
    const int first_idx = n_points - stability_window;
    if (first_idx >= 2) {
        bool all_finite = true;
        std::vector<double> finite_ns;
        for (int i = first_idx; i < n_points; ++i) {
            const FitResult result =
                fit_with_cutoff(mean_points, series.points[i].n_cases, config);
            const SampleSizeEstimate estimate = n_at_threshold(result.curve, threshold, cap);
            action.recent_estimates.push_back(estimate);
            if (estimate.kind == EstimateKind::Finite)
                finite_ns.push_back(estimate.n_required);
            else
                all_finite = false;
        }
        if (all_finite) {
            const auto [lo, hi] = std::minmax_element(finite_ns.begin(), finite_ns.end());
            double mean = 0.0;
            for (double v : finite_ns) mean += v;
            mean /= static_cast<double>(finite_ns.size());
            if (mean > 0.0 && (*hi - *lo) / mean <= stability_tol) {
                action.kind = NextActionKind::StopEstimateStable;
                return action;
            }
        }
    }

    const auto next = schedule.next_after(series.n_max);
    if (!next) {
        action.kind = NextActionKind::ScheduleExhausted;
        return action;
    }
    action.kind = NextActionKind::Continue;
    action.next_n = *next;
    return action;
}

} // namespace lcfit
