#pragma once

#include <cstdint>
#include <span>

namespace primerange {

struct FitPoint {
    std::uint64_t x = 0;
    double value = 0.0;
};

// Straight-line fit in whatever coordinates the caller regressed on.
// For fit_power, slope is the exponent b and intercept is ln a.
struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t n_points = 0;
    std::uint64_t x_min = 0;
    std::uint64_t x_max = 0;

    double power_coefficient() const;  // exp(intercept)
};

// Neumaier-compensated running sum.
class CompensatedSum {
   public:
    void add(double v) noexcept;
    double value() const noexcept { return sum_ + compensation_; }

   private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

// Ordinary least squares of `response` on `regressor`. Throws SingularDesign
// if fewer than two points or all regressors equal.
FitResult ordinary_least_squares(std::span<const double> regressor, std::span<const double> response);

FitResult fit_line(std::span<const FitPoint> points);           // v on x
FitResult fit_log_linear(std::span<const FitPoint> points);     // v on ln x
FitResult fit_power(std::span<const FitPoint> points);          // ln v on ln x
FitResult fit_hyperbolic_z(std::span<const FitPoint> points);   // arcosh(v) on ln x

}  // namespace primerange
