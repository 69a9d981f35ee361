#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "primerange/models.hpp"
#include "primerange/records.hpp"

namespace primerange {

enum class PlotKind { Count, Ratio, Difference, Compare };

struct PlotConfig {
    PlotKind kind = PlotKind::Count;
    std::optional<std::uint64_t> x_min;  // defaults to the census bounds
    std::optional<std::uint64_t> x_max;
    unsigned width = 1200;
    unsigned height = 700;
    bool log_y = false;
};

struct PlotPoint {
    double x = 0.0;
    double y = 0.0;
};

// Min-max decimation into `columns` buckets over the x extent. Keeps the first
// and last points and only ever returns points of the input, in input order.
std::vector<PlotPoint> decimate(std::span<const PlotPoint> points, std::size_t columns);

// Standalone SVG 1.1 document. Compare needs at least one model; other kinds
// ignore `models`.
std::string render(std::span<const CensusRecord> census, const PlotConfig& config,
                   std::span<const ModelSpec> models = {});

}  // namespace primerange
