#include "primerange/fitting.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "primerange/error.hpp"

namespace primerange {

namespace {

[[noreturn]] void singular(std::string_view why) {
    throw Error(ErrorKind::SingularDesign, fmt::format("singular design: {}", why));
}

double mean(std::span<const double> v) {
    CompensatedSum s;
    for (double d : v) s.add(d);
    return s.value() / static_cast<double>(v.size());
}

FitResult with_domain(FitResult fit, std::span<const FitPoint> points) {
    auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                        [](const FitPoint& a, const FitPoint& b) { return a.x < b.x; });
    fit.x_min = lo->x;
    fit.x_max = hi->x;
    return fit;
}

void require_points(std::span<const FitPoint> points) {
    if (points.size() < 2) singular(fmt::format("{} point(s), need at least 2", points.size()));
}

std::vector<double> log_x(std::span<const FitPoint> points) {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) {
        if (p.x < 1) throw Error(ErrorKind::Domain, fmt::format("x={} has no logarithm", p.x));
        out.push_back(std::log(static_cast<double>(p.x)));
    }
    return out;
}

}  // namespace

void CompensatedSum::add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
        compensation_ += (sum_ - t) + v;
    } else {
        compensation_ += (v - t) + sum_;
    }
    sum_ = t;
}

double FitResult::power_coefficient() const { return std::exp(intercept); }

FitResult ordinary_least_squares(std::span<const double> regressor, std::span<const double> response) {
    const std::size_t n = regressor.size();
    if (n != response.size()) throw Error(ErrorKind::Validation, "regressor and response lengths differ");
    if (n < 2) singular(fmt::format("{} point(s), need at least 2", n));

    const double mx = mean(regressor);
    const double my = mean(response);
    CompensatedSum sxx, sxy, syy;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = regressor[i] - mx;
        const double dy = response[i] - my;
        sxx.add(dx * dx);
        sxy.add(dx * dy);
        syy.add(dy * dy);
    }
    if (!(sxx.value() > 0.0)) singular("all regressor values are equal");

    FitResult fit;
    fit.slope = sxy.value() / sxx.value();
    fit.intercept = my - fit.slope * mx;
    fit.n_points = n;

    CompensatedSum ss_res;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = response[i] - (fit.intercept + fit.slope * regressor[i]);
        ss_res.add(r * r);
    }
    if (syy.value() > 0.0) {
        fit.r_squared = std::clamp(1.0 - ss_res.value() / syy.value(), 0.0, 1.0);
    } else {
        fit.r_squared = 1.0;  // constant response, fitted exactly
    }
    return fit;
}

FitResult fit_line(std::span<const FitPoint> points) {
    require_points(points);
    std::vector<double> xs, vs;
    xs.reserve(points.size());
    vs.reserve(points.size());
    for (const auto& p : points) {
        xs.push_back(static_cast<double>(p.x));
        vs.push_back(p.value);
    }
    return with_domain(ordinary_least_squares(xs, vs), points);
}

FitResult fit_log_linear(std::span<const FitPoint> points) {
    require_points(points);
    std::vector<double> vs;
    vs.reserve(points.size());
    for (const auto& p : points) vs.push_back(p.value);
    return with_domain(ordinary_least_squares(log_x(points), vs), points);
}

FitResult fit_power(std::span<const FitPoint> points) {
    require_points(points);
    std::vector<double> lv;
    lv.reserve(points.size());
    for (const auto& p : points) {
        if (!(p.value > 0.0)) {
            throw Error(ErrorKind::Domain, fmt::format("power fit needs v > 0; got v={} at x={}", p.value, p.x));
        }
        lv.push_back(std::log(p.value));
    }
    return with_domain(ordinary_least_squares(log_x(points), lv), points);
}

FitResult fit_hyperbolic_z(std::span<const FitPoint> points) {
    require_points(points);
    std::vector<double> z;
    z.reserve(points.size());
    for (const auto& p : points) {
        if (!(p.value >= 1.0)) {
            throw Error(ErrorKind::Domain, fmt::format("arcosh undefined for count={} at x={}", p.value, p.x));
        }
        z.push_back(std::acosh(p.value));
    }
    return with_domain(ordinary_least_squares(log_x(points), z), points);
}

}  // namespace primerange
