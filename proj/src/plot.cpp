#include "primerange/plot.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "primerange/error.hpp"
#include "primerange/evaluation.hpp"

namespace primerange {

namespace {

constexpr std::array<const char*, 8> kPalette{"#000000", "#d62728", "#1f77b4", "#2ca02c",
                                              "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};

struct Series {
    std::string label;
    std::vector<PlotPoint> points;
};

struct Frame {
    double left, top, width, height;
    double x_lo, x_hi, y_lo, y_hi;
    bool log_y;

    double px(double x) const { return left + (x - x_lo) / (x_hi - x_lo) * width; }
    double py(double y) const {
        const double v = log_y ? std::log10(y) : y;
        return top + height - (v - y_lo) / (y_hi - y_lo) * height;
    }
};

std::string escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

// Step of 1, 2 or 5 × 10^k giving roughly `target` intervals over `span`.
double nice_step(double span, int target) {
    const double raw = span / target;
    const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / magnitude;
    const double f = r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0;
    return f * magnitude;
}

std::vector<double> ticks(double lo, double hi, int target) {
    std::vector<double> out;
    const double step = nice_step(hi - lo, target);
    for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step) {
        out.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
    }
    return out;
}

std::string tick_label(double v) { return fmt::format("{:.6g}", v); }

const char* kind_title(PlotKind kind) {
    switch (kind) {
        case PlotKind::Count: return "Count of Primes in [x, x²] vs. x";
        case PlotKind::Ratio: return "Count Ratio (x² − x) / count vs. x";
        case PlotKind::Difference: return "Count Difference vs. x";
        case PlotKind::Compare: return "Predicted vs. Actual Count for Different Functions";
    }
    return "";
}

const char* y_label(PlotKind kind) {
    switch (kind) {
        case PlotKind::Count: return "count of primes";
        case PlotKind::Ratio: return "ratio";
        case PlotKind::Difference: return "count difference";
        case PlotKind::Compare: return "count of primes";
    }
    return "";
}

std::vector<Series> build_series(std::span<const CensusRecord> rows, PlotKind kind,
                                 std::span<const ModelSpec> models) {
    std::vector<Series> out;
    auto from_series = [](std::string label, const std::vector<SeriesPoint>& s) {
        Series series{std::move(label), {}};
        for (const auto& p : s) series.points.push_back({static_cast<double>(p.x), p.value});
        return series;
    };
    switch (kind) {
        case PlotKind::Ratio:
            out.push_back(from_series("ratio", ratio_series(rows)));
            break;
        case PlotKind::Difference:
            out.push_back(from_series("difference", difference_series(rows)));
            break;
        case PlotKind::Count:
        case PlotKind::Compare: {
            Series truth{"Actual count", {}};
            for (const auto& r : rows) truth.points.push_back({static_cast<double>(r.x), static_cast<double>(r.prime_count)});
            out.push_back(std::move(truth));
            if (kind == PlotKind::Compare) {
                for (const auto& spec : models) {
                    Series s{std::string(model_title(spec.kind)), {}};
                    for (const auto& r : rows) s.points.push_back({static_cast<double>(r.x), predict(r.x, spec)});
                    out.push_back(std::move(s));
                }
            }
            break;
        }
    }
    return out;
}

}  // namespace

std::vector<PlotPoint> decimate(std::span<const PlotPoint> points, std::size_t columns) {
    if (columns == 0 || points.size() <= columns) return {points.begin(), points.end()};
    const double x_lo = points.front().x;
    const double x_hi = points.back().x;
    const double span = x_hi > x_lo ? x_hi - x_lo : 1.0;

    std::vector<std::size_t> keep{0};
    std::size_t i = 0;
    while (i < points.size()) {
        const auto column = static_cast<std::size_t>((points[i].x - x_lo) / span * static_cast<double>(columns - 1));
        std::size_t lo = i, hi = i, j = i;
        for (; j < points.size(); ++j) {
            const auto c = static_cast<std::size_t>((points[j].x - x_lo) / span * static_cast<double>(columns - 1));
            if (c != column) break;
            if (points[j].y < points[lo].y) lo = j;
            if (points[j].y > points[hi].y) hi = j;
        }
        keep.push_back(std::min(lo, hi));
        keep.push_back(std::max(lo, hi));
        i = j;
    }
    keep.push_back(points.size() - 1);
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());

    std::vector<PlotPoint> out;
    out.reserve(keep.size());
    for (auto k : keep) out.push_back(points[k]);
    return out;
}

std::string render(std::span<const CensusRecord> census, const PlotConfig& config, std::span<const ModelSpec> models) {
    if (census.empty()) throw Error(ErrorKind::Validation, "plot: empty census");
    const auto x_min = config.x_min.value_or(census.front().x);
    const auto x_max = config.x_max.value_or(census.back().x);
    if (x_min > x_max || x_min < census.front().x || x_max > census.back().x) {
        throw Error(ErrorKind::Validation,
                    fmt::format("plot: x-range [{}, {}] is empty or outside the census [{}, {}]", x_min, x_max,
                                census.front().x, census.back().x));
    }
    if (config.kind == PlotKind::Compare && models.empty()) {
        throw Error(ErrorKind::Validation, "plot: compare needs at least one model");
    }
    if (config.width < 200 || config.height < 150) throw Error(ErrorKind::Validation, "plot: canvas too small");

    // Rows are consecutive in x, so the selection is a contiguous slice.
    const auto first = std::lower_bound(census.begin(), census.end(), x_min,
                                        [](const CensusRecord& r, std::uint64_t x) { return r.x < x; });
    const auto last = std::upper_bound(census.begin(), census.end(), x_max,
                                       [](std::uint64_t x, const CensusRecord& r) { return x < r.x; });
    const std::span<const CensusRecord> rows(first, last);
    auto series = build_series(rows, config.kind, models);
    if (series.front().points.empty()) throw Error(ErrorKind::Validation, "plot: selection yields no points");

    const bool compare = config.kind == PlotKind::Compare;
    Frame f{};
    f.left = 100;
    f.top = 50;
    f.width = config.width - f.left - (compare ? 230.0 : 30.0);
    f.height = config.height - f.top - 70.0;
    f.log_y = config.log_y;

    double y_min = std::numeric_limits<double>::infinity();
    double y_max = -std::numeric_limits<double>::infinity();
    for (const auto& s : series) {
        for (const auto& p : s.points) {
            if (config.log_y && !(p.y > 0.0)) {
                throw Error(ErrorKind::Domain, fmt::format("plot: log-y needs positive values; {} at x={}", p.y, p.x));
            }
            const double v = config.log_y ? std::log10(p.y) : p.y;
            y_min = std::min(y_min, v);
            y_max = std::max(y_max, v);
        }
    }
    if (y_max == y_min) {
        y_min -= 1.0;
        y_max += 1.0;
    }
    f.x_lo = static_cast<double>(series.front().points.front().x);
    f.x_hi = static_cast<double>(series.front().points.back().x);
    if (f.x_hi == f.x_lo) {
        f.x_lo -= 1.0;
        f.x_hi += 1.0;
    }
    const double pad = (y_max - y_min) * 0.02;
    f.y_lo = y_min - pad;
    f.y_hi = y_max + pad;

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    svg += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n",
        config.width, config.height);
    svg += fmt::format("<rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n", config.width,
                       config.height);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
                       f.left + f.width / 2, escape(kind_title(config.kind)));

    // Axes and grid.
    svg += "<g id=\"axes\" stroke=\"#000000\" stroke-width=\"1\">\n";
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\"/>\n", f.left, f.top,
                       f.top + f.height);
    svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\"/>\n", f.left,
                       f.top + f.height, f.left + f.width);
    svg += "</g>\n<g id=\"ticks\" font-size=\"11\">\n";
    for (double t : ticks(f.x_lo, f.x_hi, 8)) {
        const double x = f.px(t);
        svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"#000000\"/>\n",
                           x, f.top + f.height, f.top + f.height + 5);
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", x,
                           f.top + f.height + 18, tick_label(t));
    }
    for (double t : ticks(f.y_lo, f.y_hi, 6)) {
        const double y = f.top + f.height - (t - f.y_lo) / (f.y_hi - f.y_lo) * f.height;
        svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" stroke=\"#e0e0e0\"/>\n",
                           f.left, y, f.left + f.width);
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n", f.left - 6, y + 4,
                           config.log_y ? "1e" + tick_label(t) : tick_label(t));
    }
    svg += "</g>\n";
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">x</text>\n", f.left + f.width / 2,
                       static_cast<double>(config.height) - 20);
    svg += fmt::format(
        "<text x=\"20\" y=\"{0:.2f}\" text-anchor=\"middle\" transform=\"rotate(-90 20 {0:.2f})\">{1}{2}</text>\n",
        f.top + f.height / 2, y_label(config.kind), config.log_y ? " (log scale)" : "");

    // Data.
    const auto columns = static_cast<std::size_t>(f.width);
    svg += "<g id=\"series\" fill=\"none\" stroke-width=\"1.5\">\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto pts = decimate(series[i].points, columns);
        svg += fmt::format("<polyline stroke=\"{}\" points=\"", kPalette[i % kPalette.size()]);
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j) svg += ' ';
            svg += fmt::format("{:.2f},{:.2f}", f.px(pts[j].x), f.py(pts[j].y));
        }
        svg += "\"/>\n";
    }
    svg += "</g>\n";

    if (compare) {
        const double lx = f.left + f.width + 20;
        svg += "<g id=\"legend\">\n";
        for (std::size_t i = 0; i < series.size(); ++i) {
            const double ly = f.top + 10 + 22.0 * static_cast<double>(i);
            svg += fmt::format(
                "<g class=\"legend-entry\"><line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" "
                "stroke=\"{3}\" stroke-width=\"3\"/><text x=\"{4:.2f}\" y=\"{5:.2f}\">{6}</text></g>\n",
                lx, ly, lx + 24, kPalette[i % kPalette.size()], lx + 30, ly + 4, escape(series[i].label));
        }
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace primerange
