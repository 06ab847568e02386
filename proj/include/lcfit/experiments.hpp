#ifndef LCFIT_EXPERIMENTS_HPP
#define LCFIT_EXPERIMENTS_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lcfit {

/// One training run: the test-set ROC-AUC obtained for a pathology/model
/// pair with n_cases distinct positive training examples under a replicate
/// seed. (pathology, model, n_cases, seed) is unique within a dataset.
struct ExperimentPoint {
    std::string pathology;
    std::string model;
    std::int64_t n_cases; // >= 1
    std::int64_t seed;    // >= 0
    double roc_auc;       // in [0, 1]
};

struct SeriesPoint {
    std::int64_t n_cases;
    double mean_roc_auc;
    double std_roc_auc; // population standard deviation over seeds
    int n_seeds;
};

/// Seed-aggregated learning curve for one pathology/model pair. Points are
/// strictly increasing in n_cases.
struct LearningCurveSeries {
    std::string pathology;
    std::string model;
    std::vector<SeriesPoint> points;
    std::int64_t n_max;
};

enum class TableFormat { Csv, Json };

/// Parse and validate experiment rows.
/// CSV: UTF-8, header `pathology,model,n_cases,seed,roc_auc`, comma
/// delimiter, no quoting. JSON: array of objects with the same five keys.
/// Identifiers are lower-cased on ingest; row order is preserved.
/// Malformed rows raise ValidationError with a 1-based row number and the
/// offending field; repeated (pathology, model, n_cases, seed) keys raise a
/// duplicate-key error naming the key.
std::vector<ExperimentPoint> ingest(std::istream& in, TableFormat format);
std::vector<ExperimentPoint> ingest_csv(std::istream& in);
std::vector<ExperimentPoint> ingest_json(std::istream& in);

/// Emit rows in the ingest CSV schema.
void write_csv(std::ostream& out, std::span<const ExperimentPoint> points);

/// Group by (pathology, model) and aggregate seeds per n_cases into
/// mean/population-std points. Series are sorted by (pathology, model).
std::vector<LearningCurveSeries> aggregate(std::span<const ExperimentPoint> points);

/// Keep exactly the points with n_cases <= cutoff.
LearningCurveSeries restrict_series(const LearningCurveSeries& series, std::int64_t cutoff);

} // namespace lcfit

#endif
