#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "lcfit/analysis.hpp"
#include "lcfit/errors.hpp"
#include "lcfit/experiments.hpp"
#include "lcfit/fit.hpp"
#include "lcfit/planner.hpp"
#include "lcfit/power_law.hpp"
#include "lcfit/report_io.hpp"
#include "lcfit/synth.hpp"
#include "lcfit/version.hpp"

namespace {

namespace fs = std::filesystem;
using namespace lcfit;

struct IoOpts {
    std::string input;
    std::string format = "csv";
    std::string output; // empty = stdout
};

void add_io_options(CLI::App* cmd, IoOpts& io, bool need_input = true) {
    if (need_input) {
        cmd->add_option("--input", io.input, "experiment table (CSV or JSON)")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--format", io.format, "input format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
    }
    cmd->add_option("--output", io.output, "output path (default: standard output)");
}

std::vector<ExperimentPoint> load_points(const IoOpts& io) {
    std::ifstream in(io.input, std::ios::binary);
    if (!in) throw IoError("cannot open input file " + io.input);
    return ingest(in, io.format == "json" ? TableFormat::Json : TableFormat::Csv);
}

// Full document is assembled in memory first; on failure no file is touched,
// on success the temp file is renamed over the target.
void write_output(const std::string& path, const std::string& bytes) {
    if (path.empty()) {
        std::cout << bytes;
        return;
    }
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << bytes;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("failed while writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw IoError("cannot move " + tmp.string() + " to " + target.string() + ": " +
                      ec.message());
    }
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

// Raw-point fitting groups per-seed observations by series instead of
// collapsing them to seed means first.
struct SeriesFitInput {
    std::string pathology;
    std::string model;
    std::vector<FitPoint> points;
};

std::vector<SeriesFitInput> fit_inputs(const std::vector<ExperimentPoint>& points,
                                       const FitConfig& config) {
    std::vector<SeriesFitInput> inputs;
    if (config.fit_raw_points) {
        std::map<std::pair<std::string, std::string>, std::vector<FitPoint>> grouped;
        for (const auto& pt : points)
            grouped[{pt.pathology, pt.model}].push_back({pt.n_cases, pt.roc_auc});
        for (auto& [key, pts] : grouped) inputs.push_back({key.first, key.second, std::move(pts)});
    } else {
        for (const auto& series : aggregate(points)) {
            SeriesFitInput input{series.pathology, series.model, {}};
            for (const auto& pt : series.points)
                input.points.push_back({pt.n_cases, pt.mean_roc_auc});
            inputs.push_back(std::move(input));
        }
    }
    return inputs;
}

FitResult run_fit(const std::vector<FitPoint>& points, std::int64_t cutoff,
                  const FitConfig& config) {
    return cutoff > 0 ? fit_with_cutoff(points, cutoff, config) : fit(points, config);
}

int run(int argc, char** argv) {
    CLI::App app{"learning-curve fitting and sample-size planning"};
    app.set_version_flag("--version", std::string("lcfit ") + kVersion);
    app.require_subcommand(1);

    FitConfig config;

    // fit ------------------------------------------------------------------
    IoOpts fit_io;
    std::int64_t fit_cutoff = 50;
    auto* cmd_fit = app.add_subcommand("fit", "fit power-law curves per (pathology, model)");
    add_io_options(cmd_fit, fit_io);
    cmd_fit->add_option("--cutoff", fit_cutoff, "largest n_cases used for the fit; 0 = use all")
        ->capture_default_str();
    cmd_fit->add_flag("--raw", config.fit_raw_points,
                      "fit per-seed points instead of seed means");
    cmd_fit->callback([&] {
        const auto points = load_points(fit_io);
        std::vector<std::string> pathologies, models;
        std::vector<FitResult> fits;
        for (const auto& input : fit_inputs(points, config)) {
            pathologies.push_back(input.pathology);
            models.push_back(input.model);
            fits.push_back(run_fit(input.points, fit_cutoff, config));
        }
        write_output(fit_io.output, dump(fit_results_to_json(pathologies, models, fits, fit_cutoff)));
    });

    // predict-n ------------------------------------------------------------
    IoOpts predict_io;
    std::int64_t predict_cutoff = 50;
    double predict_threshold = 0.9;
    std::int64_t predict_cap = kDefaultCap;
    auto* cmd_predict =
        app.add_subcommand("predict-n", "cases required to reach a target ROC-AUC");
    add_io_options(cmd_predict, predict_io);
    cmd_predict->add_option("--cutoff", predict_cutoff, "largest n_cases used for the fit")
        ->capture_default_str();
    cmd_predict->add_option("--threshold", predict_threshold, "target ROC-AUC")
        ->capture_default_str();
    cmd_predict->add_option("--cap", predict_cap, "reporting cap for required cases")
        ->capture_default_str();
    cmd_predict->callback([&] {
        const auto series_set = aggregate(load_points(predict_io));
        const auto rows =
            build_report(series_set, predict_cutoff, predict_threshold, predict_cap, config);
        write_output(predict_io.output,
                     dump(report_to_json(rows, {predict_cutoff, predict_threshold, predict_cap})));
    });

    // slope ------------------------------------------------------------------
    IoOpts slope_io;
    std::int64_t slope_cutoff = 50;
    std::int64_t slope_n = 5;
    auto* cmd_slope = app.add_subcommand("slope", "early slope of the fitted curves");
    add_io_options(cmd_slope, slope_io);
    cmd_slope->add_option("--cutoff", slope_cutoff, "largest n_cases used for the fit")
        ->capture_default_str();
    cmd_slope->add_option("--slope-n", slope_n, "training size the derivative is evaluated at")
        ->capture_default_str();
    cmd_slope->callback([&] {
        const auto series_set = aggregate(load_points(slope_io));
        Json doc;
        doc["tool"] = "lcfit";
        doc["version"] = kVersion;
        doc["kind"] = "slopes";
        doc["config"] = Json{{"cutoff", slope_cutoff}, {"slope_eval_n", slope_n}};
        Json rows = Json::array();
        for (const auto& series : series_set) {
            std::vector<FitPoint> points;
            for (const auto& pt : series.points) points.push_back({pt.n_cases, pt.mean_roc_auc});
            const FitResult result = fit_with_cutoff(points, slope_cutoff, config);
            rows.push_back(Json{
                {"pathology", series.pathology},
                {"model", series.model},
                {"slope", round6(slope(result.curve, static_cast<double>(slope_n)))},
                {"curve", Json{{"alpha", round6(result.curve.alpha)},
                               {"beta", round6(result.curve.beta)},
                               {"gamma", round6(result.curve.gamma)}}}});
        }
        doc["rows"] = std::move(rows);
        write_output(slope_io.output, dump(doc));
    });

    // analyze-corr -----------------------------------------------------------
    IoOpts corr_io;
    std::int64_t corr_cutoff = 50;
    std::int64_t corr_slope_n = 5;
    auto* cmd_corr =
        app.add_subcommand("analyze-corr", "early-slope vs final-plateau correlation");
    add_io_options(cmd_corr, corr_io);
    cmd_corr->add_option("--cutoff", corr_cutoff, "largest n_cases used for the fit")
        ->capture_default_str();
    cmd_corr->add_option("--slope-n", corr_slope_n, "training size the derivative is evaluated at")
        ->capture_default_str();
    cmd_corr->callback([&] {
        const auto series_set = aggregate(load_points(corr_io));
        const auto study = slope_correlation(series_set, corr_cutoff, corr_slope_n, config);
        write_output(corr_io.output, dump(correlation_to_json(study)));
    });

    // analyze-mae ------------------------------------------------------------
    IoOpts mae_io;
    std::vector<std::int64_t> mae_cutoffs{20, 40};
    auto* cmd_mae =
        app.add_subcommand("analyze-mae", "extrapolation error vs fit cutoff");
    add_io_options(cmd_mae, mae_io);
    cmd_mae->add_option("--cutoffs", mae_cutoffs, "fit cutoffs, ascending")
        ->delimiter(',')
        ->capture_default_str();
    cmd_mae->callback([&] {
        const auto series_set = aggregate(load_points(mae_io));
        const auto study = extrapolation_mae(series_set, mae_cutoffs, config);
        write_output(mae_io.output, dump(mae_to_json(study)));
    });

    // plan ---------------------------------------------------------------
    IoOpts plan_io;
    double plan_threshold = 0.9;
    int plan_window = 3;
    double plan_tol = 0.15;
    std::int64_t plan_cap = kDefaultCap;
    std::int64_t plan_positive = 0;
    std::int64_t plan_negatives = -1;
    std::int64_t plan_ratio = 5;
    auto* cmd_plan = app.add_subcommand(
        "plan", "annotation-campaign arithmetic and progressive-sampling advice");
    cmd_plan->add_option("--input", plan_io.input,
                         "experiment table; enables progressive-sampling advice")
        ->check(CLI::ExistingFile);
    cmd_plan->add_option("--format", plan_io.format, "input format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd_plan->add_option("--output", plan_io.output, "output path (default: standard output)");
    cmd_plan->add_option("--threshold", plan_threshold, "target ROC-AUC")->capture_default_str();
    cmd_plan->add_option("--window", plan_window, "stability window (successive estimates)")
        ->capture_default_str();
    cmd_plan->add_option("--stability-tol", plan_tol, "relative spread tolerance")
        ->capture_default_str();
    cmd_plan->add_option("--cap", plan_cap, "reporting cap")->capture_default_str();
    cmd_plan->add_option("--n-positive", plan_positive, "positive cases to budget for");
    cmd_plan->add_option("--negatives-available", plan_negatives,
                         "distinct negative studies on hand (default: unlimited)");
    cmd_plan->add_option("--ratio", plan_ratio, "negatives per positive")->capture_default_str();
    cmd_plan->callback([&] {
        const bool progressive = !plan_io.input.empty();
        const bool budget = plan_positive > 0;
        if (progressive == budget)
            throw CLI::ValidationError("plan",
                                       "exactly one of --input or --n-positive is required");
        if (budget) {
            const CampaignBudget b = budget_for(
                plan_positive,
                plan_negatives < 0 ? std::numeric_limits<std::int64_t>::max() : plan_negatives,
                plan_ratio);
            write_output(plan_io.output, dump(budget_to_json(b, split_sizes(b.total))));
            return;
        }
        const auto series_set = aggregate(load_points(plan_io));
        std::vector<std::string> pathologies, models;
        std::vector<NextAction> actions;
        for (const auto& series : series_set) {
            pathologies.push_back(series.pathology);
            models.push_back(series.model);
            actions.push_back(next_action(series, plan_threshold, plan_window, plan_tol, config,
                                          SamplingSchedule::standard(), plan_cap));
        }
        write_output(plan_io.output,
                     dump(next_actions_to_json(pathologies, models, actions, plan_threshold)));
    });

    // simulate ---------------------------------------------------------------
    IoOpts sim_io;
    double sim_alpha = 0.95, sim_beta = 0.5, sim_gamma = 1.0, sim_sigma = 0.02;
    std::uint64_t sim_seed = 0;
    int sim_seeds = 10;
    std::string sim_pathology = "synthetic";
    std::string sim_model = "synthetic";
    std::vector<std::int64_t> sim_schedule;
    bool sim_no_clamp = false;
    auto* cmd_sim =
        app.add_subcommand("simulate", "generate a synthetic experiment table from a known curve");
    cmd_sim->add_option("--alpha", sim_alpha, "curve asymptote")->capture_default_str();
    cmd_sim->add_option("--beta", sim_beta, "curve deviation scale")->capture_default_str();
    cmd_sim->add_option("--gamma", sim_gamma, "curve convergence rate")->capture_default_str();
    cmd_sim->add_option("--sigma", sim_sigma, "noise standard deviation")->capture_default_str();
    cmd_sim->add_option("--seed", sim_seed, "base RNG seed")->capture_default_str();
    cmd_sim->add_option("--seeds", sim_seeds, "replicates per training size")
        ->capture_default_str();
    cmd_sim->add_option("--pathology", sim_pathology, "identifier")->capture_default_str();
    cmd_sim->add_option("--model", sim_model, "identifier")->capture_default_str();
    cmd_sim->add_option("--schedule", sim_schedule, "training sizes (default: standard ladder)")
        ->delimiter(',');
    cmd_sim->add_flag("--no-clamp", sim_no_clamp, "do not clamp samples to [0, 1]");
    cmd_sim->add_option("--output", sim_io.output, "output path (default: standard output)");
    cmd_sim->callback([&] {
        SynthSpec spec{PowerLawCurve(sim_alpha, sim_beta, sim_gamma),
                       sim_schedule.empty() ? SamplingSchedule::standard()
                                            : SamplingSchedule(sim_schedule),
                       sim_seeds, sim_sigma, sim_seed, !sim_no_clamp};
        const auto points = generate(spec, sim_pathology, sim_model);
        std::ostringstream out;
        write_csv(out, points);
        write_output(sim_io.output, out.str());
    });

    // export-plot --------------------------------------------------------
    IoOpts plot_io;
    std::vector<std::int64_t> plot_cutoffs{20, 35, 50};
    std::int64_t plot_fit_cutoff = 50;
    std::int64_t plot_slope_n = 5;
    std::vector<std::int64_t> plot_mae_cutoffs{20, 40};
    auto* cmd_plot = app.add_subcommand("export-plot", "write TSV plot data for the three figures");
    add_io_options(cmd_plot, plot_io, true);
    cmd_plot->get_option("--output")->required()->description("directory for the TSV files");
    cmd_plot->add_option("--cutoffs", plot_cutoffs, "fit-variant cutoffs for the curve file")
        ->delimiter(',')
        ->capture_default_str();
    cmd_plot->add_option("--cutoff", plot_fit_cutoff, "fit cutoff for the scatter file")
        ->capture_default_str();
    cmd_plot->add_option("--slope-n", plot_slope_n, "derivative evaluation size for the scatter")
        ->capture_default_str();
    cmd_plot->add_option("--mae-cutoffs", plot_mae_cutoffs, "cutoffs for the MAE file")
        ->delimiter(',')
        ->capture_default_str();
    cmd_plot->callback([&] {
        const auto series_set = aggregate(load_points(plot_io));
        const fs::path dir(plot_io.output);
        fs::create_directories(dir);
        write_output((dir / "curves.tsv").string(), curves_tsv(series_set, plot_cutoffs, config));
        const auto study = slope_correlation(series_set, plot_fit_cutoff, plot_slope_n, config);
        write_output((dir / "slope_scatter.tsv").string(), slope_scatter_tsv(study));
        const auto mae = extrapolation_mae(series_set, plot_mae_cutoffs, config);
        write_output((dir / "mae.tsv").string(), mae_tsv(mae));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "lcfit: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "lcfit: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "lcfit: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) { return run(argc, argv); }
