#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "primerange/fitting.hpp"
#include "primerange/models.hpp"
#include "primerange/records.hpp"

namespace primerange {

// Precedence Exact > FloorMatch > CeilMatch > None.
enum class MatchClass { Exact, FloorMatch, CeilMatch, None };

std::string_view to_string(MatchClass match) noexcept;

struct EvaluationRow {
    std::uint64_t x = 0;
    std::uint64_t true_count = 0;
    double prediction = 0.0;
    double relative_error = 0.0;  // fraction, not percent
    MatchClass match = MatchClass::None;
};

struct SeriesPoint {
    std::uint64_t x = 0;
    double value = 0.0;
};

// Streaming fold of evaluation rows; merge() is associative up to rounding.
struct EvaluationSummary {
    ModelSpec spec;
    std::uint64_t rows = 0;
    std::uint64_t exact = 0;
    std::uint64_t floor_match = 0;
    std::uint64_t ceil_match = 0;
    std::uint64_t no_match = 0;
    CompensatedSum error_sum;

    void add(const EvaluationRow& row);
    void merge(const EvaluationSummary& other);
    double average_relative_error() const;  // throws on empty
};

// (x² − x) / count for each record. Records with x < 2 or a zero count
// are rejected with a Validation error.
std::vector<SeriesPoint> ratio_series(std::span<const CensusRecord> census);

// count(x) − count(x−1), emitted for x >= 3. Gaps raise a Gap error.
std::vector<SeriesPoint> difference_series(std::span<const CensusRecord> census);

double relative_error(double prediction, std::uint64_t true_count);
double relative_error(double prediction, double true_value);
double average_relative_error(std::span<const EvaluationRow> rows);
MatchClass classify_match(double prediction, std::uint64_t true_count);

using RowSink = std::function<void(const EvaluationRow&)>;

EvaluationSummary evaluate_model(std::span<const CensusRecord> census, const ModelSpec& spec,
                                 const RowSink& sink = {});

struct DifferenceSummary {
    ModelSpec spec;
    std::uint64_t points = 0;
    double average_relative_error = 0.0;
};

DifferenceSummary evaluate_difference_model(std::span<const CensusRecord> census, const ModelSpec& spec);

// x values where series[i].value <= series[i-1].value.
std::vector<std::uint64_t> monotonicity_violations(std::span<const SeriesPoint> series);

// 100·fraction rounded half away from zero to 2 decimals, e.g. "0.60%".
std::string format_percent(double fraction);

}  // namespace primerange
