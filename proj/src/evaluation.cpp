#include "primerange/evaluation.hpp"

#include <fmt/format.h>

#include <cmath>

#include "primerange/error.hpp"

namespace primerange {

std::string_view to_string(MatchClass match) noexcept {
    switch (match) {
        case MatchClass::Exact: return "exact";
        case MatchClass::FloorMatch: return "floor";
        case MatchClass::CeilMatch: return "ceil";
        case MatchClass::None: return "none";
    }
    return "none";
}

void EvaluationSummary::add(const EvaluationRow& row) {
    ++rows;
    error_sum.add(row.relative_error);
    switch (row.match) {
        case MatchClass::Exact: ++exact; break;
        case MatchClass::FloorMatch: ++floor_match; break;
        case MatchClass::CeilMatch: ++ceil_match; break;
        case MatchClass::None: ++no_match; break;
    }
}

void EvaluationSummary::merge(const EvaluationSummary& other) {
    rows += other.rows;
    exact += other.exact;
    floor_match += other.floor_match;
    ceil_match += other.ceil_match;
    no_match += other.no_match;
    error_sum.add(other.error_sum.value());
}

double EvaluationSummary::average_relative_error() const {
    if (rows == 0) throw Error(ErrorKind::Validation, "average relative error of an empty evaluation");
    return error_sum.value() / static_cast<double>(rows);
}

std::vector<SeriesPoint> ratio_series(std::span<const CensusRecord> census) {
    std::vector<SeriesPoint> out;
    out.reserve(census.size());
    for (const auto& r : census) {
        if (r.x < 2) throw Error(ErrorKind::Validation, fmt::format("ratio series is undefined at x={}", r.x));
        if (r.prime_count == 0) throw Error(ErrorKind::Validation, fmt::format("zero prime count at x={}", r.x));
        const double range = static_cast<double>(r.x_squared - r.x);
        out.push_back({r.x, range / static_cast<double>(r.prime_count)});
    }
    return out;
}

std::vector<SeriesPoint> difference_series(std::span<const CensusRecord> census) {
    std::vector<SeriesPoint> out;
    for (std::size_t i = 1; i < census.size(); ++i) {
        const auto& prev = census[i - 1];
        const auto& cur = census[i];
        if (cur.x != prev.x + 1) {
            throw Error(ErrorKind::Gap, fmt::format("gap in census between x={} and x={}", prev.x, cur.x));
        }
        if (cur.x < 3) continue;
        out.push_back({cur.x, static_cast<double>(cur.prime_count) - static_cast<double>(prev.prime_count)});
    }
    return out;
}

double relative_error(double prediction, double true_value) {
    if (!(true_value > 0.0)) {
        throw Error(ErrorKind::Domain, fmt::format("relative error against true value {}", true_value));
    }
    return std::abs(prediction - true_value) / true_value;
}

double relative_error(double prediction, std::uint64_t true_count) {
    if (true_count == 0) throw Error(ErrorKind::Domain, "relative error against a true count of 0");
    return relative_error(prediction, static_cast<double>(true_count));
}

double average_relative_error(std::span<const EvaluationRow> rows) {
    if (rows.empty()) throw Error(ErrorKind::Validation, "average relative error of no rows");
    CompensatedSum sum;
    for (const auto& r : rows) sum.add(r.relative_error);
    return sum.value() / static_cast<double>(rows.size());
}

MatchClass classify_match(double prediction, std::uint64_t true_count) {
    const double truth = static_cast<double>(true_count);
    if (std::abs(prediction - truth) < 1e-9 * truth) return MatchClass::Exact;
    if (std::floor(prediction) == truth) return MatchClass::FloorMatch;
    if (std::ceil(prediction) == truth) return MatchClass::CeilMatch;
    return MatchClass::None;
}

EvaluationSummary evaluate_model(std::span<const CensusRecord> census, const ModelSpec& spec, const RowSink& sink) {
    if (census.empty()) throw Error(ErrorKind::Validation, "evaluation needs a non-empty census");
    EvaluationSummary summary;
    summary.spec = spec;
    for (const auto& r : census) {
        EvaluationRow row;
        row.x = r.x;
        row.true_count = r.prime_count;
        row.prediction = predict(r.x, spec);
        row.relative_error = relative_error(row.prediction, r.prime_count);
        row.match = classify_match(row.prediction, r.prime_count);
        summary.add(row);
        if (sink) sink(row);
    }
    return summary;
}

DifferenceSummary evaluate_difference_model(std::span<const CensusRecord> census, const ModelSpec& spec) {
    if (census.size() < 2) throw Error(ErrorKind::Validation, "difference evaluation needs two consecutive rows");
    const auto series = difference_series(census);
    if (series.empty()) throw Error(ErrorKind::Validation, "difference series is empty (needs x >= 3)");
    CompensatedSum sum;
    for (const auto& p : series) sum.add(relative_error(predict_difference(p.x, spec), p.value));
    return {spec, series.size(), sum.value() / static_cast<double>(series.size())};
}

std::vector<std::uint64_t> monotonicity_violations(std::span<const SeriesPoint> series) {
    std::vector<std::uint64_t> out;
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (!(series[i].value > series[i - 1].value)) out.push_back(series[i].x);
    }
    return out;
}

std::string format_percent(double fraction) {
    const double hundredths = std::round(fraction * 10000.0);  // std::round is half away from zero
    return fmt::format("{:.2f}%", hundredths / 100.0);
}

}  // namespace primerange
