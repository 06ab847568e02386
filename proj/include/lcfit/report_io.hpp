#ifndef LCFIT_REPORT_IO_HPP
#define LCFIT_REPORT_IO_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lcfit/analysis.hpp"
#include "lcfit/experiments.hpp"
#include "lcfit/fit.hpp"
#include "lcfit/planner.hpp"

namespace lcfit {

using Json = nlohmann::ordered_json;

/// Round to 6 significant digits. All numbers in emitted documents pass
/// through this, which keeps report bytes stable across runs.
double round6(double value);

/// round6 rendered as text (used by the TSV writers).
std::string format6(double value);

struct ReportConfigEcho {
    std::int64_t cutoff;
    double threshold;
    std::int64_t cap;
};

Json fit_results_to_json(std::span<const std::string> pathologies,
                         std::span<const std::string> models,
                         std::span<const FitResult> fits, std::int64_t cutoff);
Json report_to_json(std::span<const PathologyReportRow> rows, const ReportConfigEcho& echo);
Json correlation_to_json(const CorrelationStudy& study);
Json mae_to_json(const MaeStudy& study);
Json next_actions_to_json(std::span<const std::string> pathologies,
                          std::span<const std::string> models,
                          std::span<const NextAction> actions, double threshold);
Json budget_to_json(const CampaignBudget& budget, const SplitSizes& splits);

/// Fig. 2 analog: observed series points plus fitted-curve samples for each
/// requested cutoff, as one TSV table.
std::string curves_tsv(std::span<const LearningCurveSeries> series_set,
                       std::span<const std::int64_t> cutoffs, const FitConfig& config = {});

/// Fig. 3 analog: slope/plateau scatter points.
std::string slope_scatter_tsv(const CorrelationStudy& study);

/// Fig. 4 analog: cutoff/MAE table.
std::string mae_tsv(const MaeStudy& study);

} // namespace lcfit

#endif
