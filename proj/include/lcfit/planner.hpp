#ifndef LCFIT_PLANNER_HPP
#define LCFIT_PLANNER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "lcfit/experiments.hpp"
#include "lcfit/fit.hpp"
#include "lcfit/power_law.hpp"

namespace lcfit {

/// Strictly increasing training-size ladder for an annotation campaign.
struct SamplingSchedule {
    std::vector<std::int64_t> sizes;

    explicit SamplingSchedule(std::vector<std::int64_t> sizes_);

    /// {5, 10, ..., 50, 100, 250, 500, 1000}
    static const SamplingSchedule& standard();

    /// Smallest size strictly greater than n, or nullopt when exhausted.
    std::optional<std::int64_t> next_after(std::int64_t n) const;
};

/// Label-count arithmetic for one training set: positives plus negatives at
/// a fixed ratio, with any negative shortfall covered by duplication.
struct CampaignBudget {
    std::int64_t n_positive;
    std::int64_t negative_ratio;
    std::int64_t n_negative;           // n_positive * negative_ratio
    std::int64_t total;                // n_positive * (1 + negative_ratio)
    std::int64_t duplicated_negatives; // shortfall covered by duplication
};

CampaignBudget budget_for(std::int64_t n_positive, std::int64_t negatives_available,
                          std::int64_t ratio = 5);

struct SplitSizes {
    std::int64_t train;
    std::int64_t validation;
    std::int64_t test;
};

/// 80/10/10 split arithmetic: validation and test each get the 10% share
/// rounded to nearest (ties toward train); train takes the remainder.
SplitSizes split_sizes(std::int64_t total);

enum class NextActionKind {
    StopPredictedReached, // latest observed mean already meets the threshold
    StopEstimateStable,   // recent refitted n@threshold estimates agree
    Continue,             // label up to the next schedule size
    ScheduleExhausted
};

struct NextAction {
    NextActionKind kind;
    std::int64_t next_n;                 // valid when kind == Continue
    std::vector<SampleSizeEstimate> recent_estimates; // the window inspected
};

/// Progressive-sampling stopping rule. Refits the curve at each successive
/// observed cutoff; stops when the last observed mean reaches the threshold,
/// or when the trailing `stability_window` n@threshold estimates are all
/// Finite with relative spread (max-min)/mean <= stability_tol.
NextAction next_action(const LearningCurveSeries& series, double threshold,
                       int stability_window, double stability_tol, const FitConfig& config,
                       const SamplingSchedule& schedule = SamplingSchedule::standard(),
                       std::int64_t cap = kDefaultCap);

} // namespace lcfit

#endif
