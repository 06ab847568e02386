#include "lcfit/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "lcfit/errors.hpp"
#include "lcfit/version.hpp"

namespace lcfit {

double round6(double value) {
    if (!std::isfinite(value)) return value;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return std::strtod(buf, nullptr);
}

std::string format6(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

namespace {

Json document(const char* kind) {
    Json doc;
    doc["tool"] = "lcfit";
    doc["version"] = kVersion;
    doc["kind"] = kind;
    return doc;
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::GradientSmall: return "gradient_small";
        case Termination::StepSmall: return "step_small";
        case Termination::MaxIterations: return "max_iterations";
    }
    return "unknown";
}

Json curve_to_json(const PowerLawCurve& curve) {
    Json j;
    j["alpha"] = round6(curve.alpha);
    j["beta"] = round6(curve.beta);
    j["gamma"] = round6(curve.gamma);
    return j;
}

Json estimate_to_json(const SampleSizeEstimate& estimate) {
    Json j;
    switch (estimate.kind) {
        case EstimateKind::Finite: j["kind"] = "finite"; break;
        case EstimateKind::AboveCap: j["kind"] = "above_cap"; break;
        case EstimateKind::Unreachable: j["kind"] = "unreachable"; break;
    }
    j["display"] = format_estimate(estimate);
    if (estimate.kind == EstimateKind::Finite) {
        j["n_required"] = round6(estimate.n_required);
        j["n_required_ceil"] = required_cases(estimate);
    }
    j["cap"] = estimate.cap;
    return j;
}

} // namespace

Json fit_results_to_json(std::span<const std::string> pathologies,
                         std::span<const std::string> models,
                         std::span<const FitResult> fits, std::int64_t cutoff) {
    Json doc = document("fit_results");
    doc["config"] = Json{{"cutoff", cutoff}};
    Json rows = Json::array();
    for (std::size_t i = 0; i < fits.size(); ++i) {
        const FitResult& fit = fits[i];
        Json row;
        row["pathology"] = pathologies[i];
        row["model"] = models[i];
        row["curve"] = curve_to_json(fit.curve);
        if (fit.cutoff) row["cutoff"] = *fit.cutoff;
        row["sse"] = round6(fit.sse);
        row["rmse"] = round6(fit.rmse);
        row["n_points"] = fit.n_points;
        row["converged"] = fit.converged;
        row["iterations"] = fit.iterations;
        row["termination"] = termination_name(fit.termination);
        row["gamma_unidentifiable"] = fit.gamma_unidentifiable;
        rows.push_back(std::move(row));
    }
    doc["fits"] = std::move(rows);
    return doc;
}

Json report_to_json(std::span<const PathologyReportRow> rows, const ReportConfigEcho& echo) {
    Json doc = document("sample_size_report");
    doc["config"] =
        Json{{"cutoff", echo.cutoff}, {"threshold", round6(echo.threshold)}, {"cap", echo.cap}};
    Json out = Json::array();
    int skipped = 0;
    for (const auto& row : rows) {
        Json j;
        j["pathology"] = row.pathology;
        j["model"] = row.model;
        j["roc_at_nmax"] = round6(row.roc_at_nmax);
        if (row.skipped) {
            j["skipped"] = true;
            j["skip_reason"] = row.skip_reason;
            ++skipped;
        } else {
            j["skipped"] = false;
            j["n_at_threshold"] = estimate_to_json(row.n_at_threshold);
            if (row.curve) j["curve"] = curve_to_json(*row.curve);
        }
        out.push_back(std::move(j));
    }
    doc["rows"] = std::move(out);
    doc["skipped_series"] = skipped;
    return doc;
}

Json correlation_to_json(const CorrelationStudy& study) {
    Json doc = document("slope_correlation");
    doc["config"] = Json{{"fit_cutoff", study.fit_cutoff}, {"slope_eval_n", study.slope_eval_n}};
    doc["pearson_r"] = round6(study.pearson_r);
    Json pairs = Json::array();
    for (const auto& pair : study.pairs) {
        pairs.push_back(Json{{"pathology", pair.pathology},
                             {"model", pair.model},
                             {"slope", round6(pair.slope)},
                             {"roc_at_nmax", round6(pair.roc_at_nmax)},
                             {"n_total", pair.n_total}});
    }
    doc["pairs"] = std::move(pairs);
    doc["excluded_series"] = study.excluded;
    return doc;
}

Json mae_to_json(const MaeStudy& study) {
    Json doc = document("extrapolation_mae");
    Json entries = Json::array();
    for (std::size_t i = 0; i < study.cutoffs.size(); ++i) {
        Json entry;
        entry["cutoff"] = study.cutoffs[i];
        if (study.mae_per_cutoff[i])
            entry["mae"] = round6(*study.mae_per_cutoff[i]);
        else
            entry["mae"] = nullptr;
        entry["n_series"] = study.n_series_per_cutoff[i];
        entry["excluded"] = study.excluded_per_cutoff[i];
        entries.push_back(std::move(entry));
    }
    doc["entries"] = std::move(entries);
    return doc;
}

Json next_actions_to_json(std::span<const std::string> pathologies,
                          std::span<const std::string> models,
                          std::span<const NextAction> actions, double threshold) {
    Json doc = document("plan_next_action");
    doc["config"] = Json{{"threshold", round6(threshold)}};
    Json rows = Json::array();
    for (std::size_t i = 0; i < actions.size(); ++i) {
        const NextAction& action = actions[i];
        Json row;
        row["pathology"] = pathologies[i];
        row["model"] = models[i];
        switch (action.kind) {
            case NextActionKind::StopPredictedReached: row["action"] = "stop_threshold_reached"; break;
            case NextActionKind::StopEstimateStable: row["action"] = "stop_estimate_stable"; break;
            case NextActionKind::Continue: row["action"] = "continue"; break;
            case NextActionKind::ScheduleExhausted: row["action"] = "schedule_exhausted"; break;
        }
        if (action.kind == NextActionKind::Continue) row["next_n"] = action.next_n;
        Json estimates = Json::array();
        for (const auto& estimate : action.recent_estimates)
            estimates.push_back(estimate_to_json(estimate));
        row["recent_estimates"] = std::move(estimates);
        rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    return doc;
}

Json budget_to_json(const CampaignBudget& budget, const SplitSizes& splits) {
    Json doc = document("campaign_budget");
    doc["budget"] = Json{{"n_positive", budget.n_positive},
                         {"negative_ratio", budget.negative_ratio},
                         {"n_negative", budget.n_negative},
                         {"total", budget.total},
                         {"duplicated_negatives", budget.duplicated_negatives}};
    doc["split"] = Json{{"train", splits.train},
                        {"validation", splits.validation},
                        {"test", splits.test}};
    return doc;
}

std::string curves_tsv(std::span<const LearningCurveSeries> series_set,
                       std::span<const std::int64_t> cutoffs, const FitConfig& config) {
    std::ostringstream out;
    out << "pathology\tmodel\trecord\tcutoff\tn\troc_auc\tstd_roc_auc\n";
    for (const auto& series : series_set) {
        for (const auto& pt : series.points) {
            out << series.pathology << '\t' << series.model << "\tobserved\t-\t" << pt.n_cases
                << '\t' << format6(pt.mean_roc_auc) << '\t' << format6(pt.std_roc_auc) << '\n';
        }

        std::vector<FitPoint> points;
        for (const auto& pt : series.points) points.push_back({pt.n_cases, pt.mean_roc_auc});

        auto emit_fit = [&](const std::string& label, const FitResult& fit) {
            const double n_lo = static_cast<double>(series.points.front().n_cases);
            const double n_hi = static_cast<double>(series.n_max);
            const int samples = 100;
            const double log_lo = std::log(n_lo);
            const double log_hi = std::log(n_hi);
            for (int i = 0; i < samples; ++i) {
                const double t = static_cast<double>(i) / (samples - 1);
                const double n = std::exp(log_lo + t * (log_hi - log_lo));
                out << series.pathology << '\t' << series.model << "\tfit\t" << label << '\t'
                    << format6(n) << '\t' << format6(evaluate(fit.curve, n)) << "\t-\n";
            }
        };

        for (const std::int64_t cutoff : cutoffs) {
            try {
                emit_fit(std::to_string(cutoff), fit_with_cutoff(points, cutoff, config));
            } catch (const Error&) {
                // not enough points under this cutoff; skip the variant
            }
        }
        try {
            emit_fit("all", fit(points, config));
        } catch (const Error&) {
        }
    }
    return out.str();
}

std::string slope_scatter_tsv(const CorrelationStudy& study) {
    std::ostringstream out;
    out << "pathology\tmodel\tslope\troc_at_nmax\tn_total\n";
    for (const auto& pair : study.pairs) {
        out << pair.pathology << '\t' << pair.model << '\t' << format6(pair.slope) << '\t'
            << format6(pair.roc_at_nmax) << '\t' << pair.n_total << '\n';
    }
    return out.str();
}

std::string mae_tsv(const MaeStudy& study) {
    std::ostringstream out;
    out << "cutoff\tmae\tn_series\texcluded\n";
    for (std::size_t i = 0; i < study.cutoffs.size(); ++i) {
        out << study.cutoffs[i] << '\t'
            << (study.mae_per_cutoff[i] ? format6(*study.mae_per_cutoff[i]) : "NA") << '\t'
            << study.n_series_per_cutoff[i] << '\t' << study.excluded_per_cutoff[i] << '\n';
    }
    return out.str();
}

} // namespace lcfit
