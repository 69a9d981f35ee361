#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace primerange {

enum class ModelKind { Hyperbolic, PowerSeries, Polynomial, Conic, CustomRatio, Bertrand, DifferenceLine };

// The six count estimators, in reporting order.
inline constexpr ModelKind kCountModels[] = {ModelKind::Hyperbolic,  ModelKind::PowerSeries,
                                             ModelKind::Polynomial,  ModelKind::CustomRatio,
                                             ModelKind::Conic,       ModelKind::Bertrand};

// Short machine name ("hyperbolic", "power", ...), used in files and flags.
std::string_view model_key(ModelKind kind) noexcept;
// Human name matching the table layouts ("Hyperbolic", "Power Series", ...).
std::string_view model_title(ModelKind kind) noexcept;
std::optional<ModelKind> parse_model_key(std::string_view key) noexcept;

// Names of the constants a model carries, in storage order.
std::span<const std::string_view> constant_names(ModelKind kind) noexcept;

struct ModelSpec {
    ModelKind kind = ModelKind::CustomRatio;
    std::vector<double> constants;  // parallel to constant_names(kind)
    bool overridden = false;        // any constant differs from the published default

    static ModelSpec defaults(ModelKind kind);

    double constant(std::string_view name) const;
    void set_constant(std::string_view name, double value);  // marks overridden
};

double predict_hyperbolic(std::uint64_t x, const ModelSpec& spec);
double predict_power(std::uint64_t x, const ModelSpec& spec);
double predict_polynomial(std::uint64_t x, const ModelSpec& spec);
double predict_conic(std::uint64_t x, const ModelSpec& spec);
double predict_custom_ratio(std::uint64_t x, const ModelSpec& spec);
double predict_bertrand(std::uint64_t x);
double predict_difference(std::uint64_t x, const ModelSpec& spec);

// Discriminant of the conic's quadratic in y at x.
double conic_discriminant(std::uint64_t x, const ModelSpec& spec);

// Dispatches on spec.kind.
double predict(std::uint64_t x, const ModelSpec& spec);

}  // namespace primerange
