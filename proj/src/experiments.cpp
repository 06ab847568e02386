#include "lcfit/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>
#include <tuple>

#include <nlohmann/json.hpp>

#include "lcfit/errors.hpp"

namespace lcfit {

namespace {

const char* const kCsvHeader = "pathology,model,n_cases,seed,roc_auc";

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::int64_t parse_int(const std::string& field, const std::string& value,
                       std::size_t row, std::int64_t min_value) {
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ValidationError("row " + std::to_string(row) + ": " + field +
                              ": expected a base-10 integer, got '" + value + "'");
    if (out < min_value)
        throw ValidationError("row " + std::to_string(row) + ": " + field + ": must be >= " +
                              std::to_string(min_value) + ", got " + value);
    return out;
}

double parse_roc(const std::string& value, std::size_t row) {
    std::size_t consumed = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (consumed != value.size() || value.empty())
        throw ValidationError("row " + std::to_string(row) +
                              ": roc_auc: expected a decimal number, got '" + value + "'");
    if (!(out >= 0.0 && out <= 1.0))
        throw ValidationError("row " + std::to_string(row) +
                              ": roc_auc: must lie in [0, 1], got " + value);
    return out;
}

std::string identifier(const std::string& field, const std::string& value, std::size_t row) {
    if (value.empty())
        throw ValidationError("row " + std::to_string(row) + ": " + field + ": must be non-empty");
    return to_lower(value);
}

using PointKey = std::tuple<std::string, std::string, std::int64_t, std::int64_t>;

void check_duplicate(std::set<PointKey>& seen, const ExperimentPoint& pt, std::size_t row) {
    const PointKey key{pt.pathology, pt.model, pt.n_cases, pt.seed};
    if (!seen.insert(key).second)
        throw ValidationError("row " + std::to_string(row) + ": duplicate key (" + pt.pathology +
                              ", " + pt.model + ", " + std::to_string(pt.n_cases) + ", " +
                              std::to_string(pt.seed) + ")");
}

} // namespace

std::vector<ExperimentPoint> ingest_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw ValidationError("row 1: missing header line '" + std::string(kCsvHeader) + "'");
    if (trim(line) != kCsvHeader)
        throw ValidationError("row 1: header must be '" + std::string(kCsvHeader) + "', got '" +
                              trim(line) + "'");

    std::vector<ExperimentPoint> points;
    std::set<PointKey> seen;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;

        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(trim(field));
        if (!line.empty() && line.back() == ',') fields.push_back("");
        if (fields.size() != 5)
            throw ValidationError("row " + std::to_string(row) + ": expected 5 fields, got " +
                                  std::to_string(fields.size()));

        ExperimentPoint pt;
        pt.pathology = identifier("pathology", fields[0], row);
        pt.model = identifier("model", fields[1], row);
        pt.n_cases = parse_int("n_cases", fields[2], row, 1);
        pt.seed = parse_int("seed", fields[3], row, 0);
        pt.roc_auc = parse_roc(fields[4], row);

        check_duplicate(seen, pt, row);
        points.push_back(std::move(pt));
    }
    return points;
}

std::vector<ExperimentPoint> ingest_json(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("json: ") + e.what());
    }
    if (!doc.is_array()) throw ValidationError("json: top-level value must be an array");

    std::vector<ExperimentPoint> points;
    std::set<PointKey> seen;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::size_t row = i + 1;
        const auto& obj = doc[i];
        if (!obj.is_object())
            throw ValidationError("row " + std::to_string(row) + ": expected an object");

        auto field = [&](const char* name) -> const nlohmann::json& {
            if (!obj.contains(name))
                throw ValidationError("row " + std::to_string(row) + ": " + name +
                                      ": missing field");
            return obj.at(name);
        };

        const auto& pathology = field("pathology");
        const auto& model = field("model");
        const auto& n_cases = field("n_cases");
        const auto& seed = field("seed");
        const auto& roc = field("roc_auc");
        if (!pathology.is_string())
            throw ValidationError("row " + std::to_string(row) + ": pathology: expected a string");
        if (!model.is_string())
            throw ValidationError("row " + std::to_string(row) + ": model: expected a string");
        if (!n_cases.is_number_integer())
            throw ValidationError("row " + std::to_string(row) + ": n_cases: expected an integer");
        if (!seed.is_number_integer())
            throw ValidationError("row " + std::to_string(row) + ": seed: expected an integer");
        if (!roc.is_number())
            throw ValidationError("row " + std::to_string(row) + ": roc_auc: expected a number");

        ExperimentPoint pt;
        pt.pathology = identifier("pathology", pathology.get<std::string>(), row);
        pt.model = identifier("model", model.get<std::string>(), row);
        pt.n_cases = n_cases.get<std::int64_t>();
        if (pt.n_cases < 1)
            throw ValidationError("row " + std::to_string(row) + ": n_cases: must be >= 1, got " +
                                  std::to_string(pt.n_cases));
        pt.seed = seed.get<std::int64_t>();
        if (pt.seed < 0)
            throw ValidationError("row " + std::to_string(row) + ": seed: must be >= 0, got " +
                                  std::to_string(pt.seed));
        pt.roc_auc = roc.get<double>();
        if (!(pt.roc_auc >= 0.0 && pt.roc_auc <= 1.0))
            throw ValidationError("row " + std::to_string(row) + ": roc_auc: must lie in [0, 1]");

        check_duplicate(seen, pt, row);
        points.push_back(std::move(pt));
    }
    return points;
}

std::vector<ExperimentPoint> ingest(std::istream& in, TableFormat format) {
    return format == TableFormat::Csv ? ingest_csv(in) : ingest_json(in);
}

void write_csv(std::ostream& out, std::span<const ExperimentPoint> points) {
    out << kCsvHeader << '\n';
    char buf[64];
    for (const auto& pt : points) {
        // shortest round-trip representation, so ingest(write_csv(x)) == x
        const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), pt.roc_auc);
        out << pt.pathology << ',' << pt.model << ',' << pt.n_cases << ',' << pt.seed << ','
            << std::string_view(buf, end) << '\n';
    }
}

std::vector<LearningCurveSeries> aggregate(std::span<const ExperimentPoint> points) {
    if (points.empty()) throw InsufficientDataError("aggregate: no experiment points supplied");

    std::map<std::pair<std::string, std::string>, std::map<std::int64_t, std::vector<double>>>
        groups;
    for (const auto& pt : points)
        groups[{pt.pathology, pt.model}][pt.n_cases].push_back(pt.roc_auc);

    std::vector<LearningCurveSeries> series_set;
    series_set.reserve(groups.size());
    for (const auto& [key, by_n] : groups) {
        LearningCurveSeries series;
        series.pathology = key.first;
        series.model = key.second;
        for (const auto& [n_cases, values] : by_n) {
            const int k = static_cast<int>(values.size());
            double mean = 0.0;
            for (double v : values) mean += v;
            mean /= k;
            double var = 0.0;
            for (double v : values) var += (v - mean) * (v - mean);
            var /= k; // population variance: the seeds are the whole replicate set
            series.points.push_back({n_cases, mean, std::sqrt(var), k});
        }
        series.n_max = series.points.back().n_cases;
        series_set.push_back(std::move(series));
    }
    return series_set;
}

LearningCurveSeries restrict_series(const LearningCurveSeries& series, std::int64_t cutoff) {
    LearningCurveSeries out;
    out.pathology = series.pathology;
    out.model = series.model;
    for (const auto& pt : series.points)
        if (pt.n_cases <= cutoff) out.points.push_back(pt);
    if (out.points.empty())
        throw InsufficientDataError("restrict: no points with n_cases <= " +
                                    std::to_string(cutoff) + " in series " + series.pathology +
                                    "/" + series.model);
    out.n_max = out.points.back().n_cases;
    return out;
}

} // namespace lcfit
