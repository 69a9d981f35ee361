#include <doctest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <random>
#include <regex>
#include <sstream>

#include "primerange/census.hpp"
#include "primerange/error.hpp"
#include "primerange/evaluation.hpp"
#include "primerange/plot.hpp"

using namespace primerange;

namespace {

const std::vector<CensusRecord>& rows_1000() {
    static const auto rows = census(1000);
    return rows;
}

std::vector<std::string> polylines(const std::string& svg) {
    std::vector<std::string> out;
    const std::regex re("<polyline[^>]*points=\"([^\"]*)\"");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it) {
        out.push_back((*it)[1].str());
    }
    return out;
}

std::vector<std::pair<double, double>> parse_points(const std::string& attr) {
    std::vector<std::pair<double, double>> out;
    std::istringstream in(attr);
    std::string token;
    while (in >> token) {
        const auto comma = token.find(',');
        out.emplace_back(std::stod(token.substr(0, comma)), std::stod(token.substr(comma + 1)));
    }
    return out;
}

void check_parses(const std::string& svg) {
    std::istringstream in(svg);
    boost::property_tree::ptree tree;
    CHECK_NOTHROW(boost::property_tree::read_xml(in, tree));
    CHECK(tree.get_child_optional("svg").has_value());
}

}  // namespace

TEST_CASE("count plot has one polyline with every point") {
    PlotConfig config;
    const auto svg = render(rows_1000(), config);
    check_parses(svg);
    const auto lines = polylines(svg);
    REQUIRE(lines.size() == 1);
    const auto pts = parse_points(lines[0]);
    CHECK(pts.size() == 999);
    // Screen y decreases as the count grows.
    for (std::size_t i = 1; i < pts.size(); ++i) REQUIRE(pts[i].second < pts[i - 1].second);
}

TEST_CASE("ratio plot tracks the ratio series through the axis inversion") {
    PlotConfig config;
    config.kind = PlotKind::Ratio;
    const auto svg = render(rows_1000(), config);
    check_parses(svg);
    const auto lines = polylines(svg);
    REQUIRE(lines.size() == 1);
    const auto pts = parse_points(lines[0]);
    const auto series = ratio_series(rows_1000());
    REQUIRE(pts.size() == series.size());
    // Higher ratio <=> smaller screen y, wherever the values differ visibly.
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double dv = series[i].value - series[i - 1].value;
        if (std::abs(dv) > 1e-3) REQUIRE((dv > 0) == (pts[i].second <= pts[i - 1].second));
    }
    CHECK(pts.back().second < pts.front().second);
}

TEST_CASE("difference and compare plots") {
    PlotConfig config;
    config.kind = PlotKind::Difference;
    auto svg = render(rows_1000(), config);
    check_parses(svg);
    CHECK(polylines(svg).size() == 1);
    CHECK(parse_points(polylines(svg)[0]).size() == 998);

    config.kind = PlotKind::Compare;
    std::vector<ModelSpec> models;
    for (auto kind : kCountModels) models.push_back(ModelSpec::defaults(kind));
    svg = render(rows_1000(), config, models);
    check_parses(svg);
    CHECK(polylines(svg).size() == 7);
    std::size_t legend = 0;
    for (auto pos = svg.find("class=\"legend-entry\""); pos != std::string::npos;
         pos = svg.find("class=\"legend-entry\"", pos + 1)) {
        ++legend;
    }
    CHECK(legend == 7);
    CHECK(svg.find("Bertrand&apos;s") != std::string::npos);

    CHECK_THROWS_AS(render(rows_1000(), config), Error);
}

TEST_CASE("render is deterministic") {
    for (auto kind : {PlotKind::Count, PlotKind::Ratio, PlotKind::Difference}) {
        PlotConfig config;
        config.kind = kind;
        config.log_y = kind == PlotKind::Count;
        CHECK(render(rows_1000(), config) == render(rows_1000(), config));
    }
}

TEST_CASE("x-range selection and errors") {
    PlotConfig config;
    config.x_min = 100;
    config.x_max = 199;
    const auto svg = render(rows_1000(), config);
    CHECK(parse_points(polylines(svg)[0]).size() == 100);

    config.x_min = 500;
    config.x_max = 400;
    CHECK_THROWS_AS(render(rows_1000(), config), Error);
    config.x_min = 1;
    config.x_max = 10;
    CHECK_THROWS_AS(render(rows_1000(), config), Error);
    CHECK_THROWS_AS(render(std::vector<CensusRecord>{}, PlotConfig{}), Error);
}

TEST_CASE("decimation keeps endpoints and stays inside the envelope") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (std::size_t n : {10u, 1000u, 12345u}) {
        std::vector<PlotPoint> pts;
        for (std::size_t i = 0; i < n; ++i) pts.push_back({static_cast<double>(i), u(rng)});
        const auto out = decimate(pts, 300);
        CHECK(out.front().x == pts.front().x);
        CHECK(out.back().x == pts.back().x);
        CHECK(out.size() <= std::max<std::size_t>(n, 2 * 300 + 2));
        // Every kept point is an input point.
        std::size_t j = 0;
        for (const auto& p : out) {
            while (j < pts.size() && (pts[j].x != p.x || pts[j].y != p.y)) ++j;
            REQUIRE(j < pts.size());
        }
        if (n > 300) {
            // The global extremes survive.
            const auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(),
                                                      [](auto& a, auto& b) { return a.y < b.y; });
            const auto [olo, ohi] = std::minmax_element(out.begin(), out.end(),
                                                        [](auto& a, auto& b) { return a.y < b.y; });
            CHECK(olo->y == lo->y);
            CHECK(ohi->y == hi->y);
        }
    }
}

TEST_CASE("wide census is decimated but keeps its ends") {
    const auto rows = census(3000);
    PlotConfig config;
    config.width = 600;
    const auto pts = parse_points(polylines(render(rows, config))[0]);
    CHECK(pts.size() < rows.size());
    CHECK(pts.front().first == doctest::Approx(100.0));
}
