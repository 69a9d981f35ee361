#include "primerange/models.hpp"

#include <array>
#include <cmath>
#include <string>

#include "primerange/error.hpp"

namespace primerange {

namespace {

constexpr std::array<std::string_view, 2> kHyperbolicNames{"z_slope", "z_intercept"};
constexpr std::array<std::string_view, 2> kPowerNames{"a", "b"};
constexpr std::array<std::string_view, 3> kPolynomialNames{"a", "b", "c"};
constexpr std::array<std::string_view, 6> kConicNames{"A", "B", "C", "D", "E", "F"};
constexpr std::array<std::string_view, 2> kCustomRatioNames{"k_slope", "k_intercept"};
constexpr std::array<std::string_view, 2> kDifferenceNames{"slope", "intercept"};

std::vector<double> default_constants(ModelKind kind) {
    switch (kind) {
        case ModelKind::Hyperbolic:
            return {1.9023, -1.2634};
        case ModelKind::PowerSeries:
            return {0.141294556371966, 1.90234115616265};
        case ModelKind::Polynomial:
            return {0.0376, 1208.1, -3e7};
        case ModelKind::Conic:
            return {3.11199927582249e-9,  -9.33817244194697e-15, 3.45730472758733e-21,
                    5.15593800268165e-5, -7.63287093993319e-8,  -1.0};
        case ModelKind::CustomRatio:
            return {2.0038, -1.0932};
        case ModelKind::Bertrand:
            return {};
        case ModelKind::DifferenceLine:
            return {0.0755, 1018.8};
    }
    return {};
}

[[noreturn]] void domain_error(std::string_view model, std::uint64_t x, std::string_view why) {
    throw Error(ErrorKind::Domain,
                std::string(model) + ": x=" + std::to_string(x) + " " + std::string(why));
}

double ln(std::uint64_t x, std::string_view model) {
    if (x == 0) domain_error(model, x, "outside domain (x >= 1 required)");
    return std::log(static_cast<double>(x));
}

}  // namespace

std::string_view model_key(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::Hyperbolic: return "hyperbolic";
        case ModelKind::PowerSeries: return "power";
        case ModelKind::Polynomial: return "polynomial";
        case ModelKind::Conic: return "conic";
        case ModelKind::CustomRatio: return "custom_ratio";
        case ModelKind::Bertrand: return "bertrand";
        case ModelKind::DifferenceLine: return "difference";
    }
    return "unknown";
}

std::string_view model_title(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::Hyperbolic: return "Hyperbolic";
        case ModelKind::PowerSeries: return "Power Series";
        case ModelKind::Polynomial: return "Polynomial";
        case ModelKind::Conic: return "Conics";
        case ModelKind::CustomRatio: return "Custom Ratio";
        case ModelKind::Bertrand: return "Bertrand's";
        case ModelKind::DifferenceLine: return "Difference Line";
    }
    return "Unknown";
}

std::optional<ModelKind> parse_model_key(std::string_view key) noexcept {
    for (auto kind : {ModelKind::Hyperbolic, ModelKind::PowerSeries, ModelKind::Polynomial,
                      ModelKind::Conic, ModelKind::CustomRatio, ModelKind::Bertrand,
                      ModelKind::DifferenceLine}) {
        if (model_key(kind) == key) return kind;
    }
    return std::nullopt;
}

std::span<const std::string_view> constant_names(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::Hyperbolic: return kHyperbolicNames;
        case ModelKind::PowerSeries: return kPowerNames;
        case ModelKind::Polynomial: return kPolynomialNames;
        case ModelKind::Conic: return kConicNames;
        case ModelKind::CustomRatio: return kCustomRatioNames;
        case ModelKind::Bertrand: return {};
        case ModelKind::DifferenceLine: return kDifferenceNames;
    }
    return {};
}

ModelSpec ModelSpec::defaults(ModelKind kind) {
    return ModelSpec{kind, default_constants(kind), false};
}

double ModelSpec::constant(std::string_view name) const {
    auto names = constant_names(kind);
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return constants.at(i);
    }
    throw Error(ErrorKind::Validation,
                "model " + std::string(model_key(kind)) + " has no constant '" + std::string(name) + "'");
}

void ModelSpec::set_constant(std::string_view name, double value) {
    auto names = constant_names(kind);
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) {
            constants.at(i) = value;
            overridden = overridden || value != default_constants(kind)[i];
            return;
        }
    }
    throw Error(ErrorKind::Validation,
                "model " + std::string(model_key(kind)) + " has no constant '" + std::string(name) + "'");
}

double predict_hyperbolic(std::uint64_t x, const ModelSpec& spec) {
    const auto& k = spec.constants;
    return std::cosh(k[0] * ln(x, "hyperbolic") + k[1]);
}

double predict_power(std::uint64_t x, const ModelSpec& spec) {
    const auto& k = spec.constants;
    if (x == 0) domain_error("power", x, "outside domain (x >= 1 required)");
    return k[0] * std::pow(static_cast<double>(x), k[1]);
}

double predict_polynomial(std::uint64_t x, const ModelSpec& spec) {
    const auto& k = spec.constants;
    const double xd = static_cast<double>(x);
    const double p = (k[0] * xd + k[1]) * xd + k[2];
    return xd > p ? xd : p;
}

double conic_discriminant(std::uint64_t x, const ModelSpec& spec) {
    const auto& k = spec.constants;
    const double xd = static_cast<double>(x);
    const double linear = k[1] * xd + k[4];                     // Bx + E
    const double rest = (k[0] * xd + k[3]) * xd + k[5];         // Ax² + Dx + F
    return linear * linear - 4.0 * k[2] * rest;
}

// The "-" root of C·y² + (Bx+E)·y + (Ax²+Dx+F) = 0. When Bx+E < 0 the textbook
// form subtracts two nearly equal terms, so the root is taken from the product
// of roots instead: y₋ = 2(Ax²+Dx+F) / (−(Bx+E) + √disc).
double predict_conic(std::uint64_t x, const ModelSpec& spec) {
    const auto& k = spec.constants;
    if (k[2] == 0.0) domain_error("conic", x, "degenerate (C == 0)");
    const double xd = static_cast<double>(x);
    const double linear = k[1] * xd + k[4];
    const double rest = (k[0] * xd + k[3]) * xd + k[5];
    const double disc = linear * linear - 4.0 * k[2] * rest;
    if (!(disc >= 0.0)) domain_error("conic", x, "has a negative discriminant");
    const double root = std::sqrt(disc);

    double q;
    if (linear < 0.0) {
        q = 2.0 * rest / (-linear + root);
    } else {
        q = (-linear - root) / (2.0 * k[2]);
    }
    return xd > q ? xd : q;
}

double predict_custom_ratio(std::uint64_t x, const ModelSpec& spec) {
    if (x < 2) domain_error("custom_ratio", x, "outside domain (x >= 2 required)");
    const auto& k = spec.constants;
    const double denom = k[0] * ln(x, "custom_ratio") + k[1];
    if (!(denom > 0.0)) domain_error("custom_ratio", x, "makes the denominator non-positive");
    const double xd = static_cast<double>(x);
    return (xd * xd - xd) / denom;
}

double predict_bertrand(std::uint64_t x) {
    if (x == 0) domain_error("bertrand", x, "outside domain (x >= 1 required)");
    return 0.5 * std::log2(static_cast<double>(x) * static_cast<double>(x));
}

double predict_difference(std::uint64_t x, const ModelSpec& spec) {
    const auto& k = spec.constants;
    return k[0] * static_cast<double>(x) + k[1];
}

double predict(std::uint64_t x, const ModelSpec& spec) {
    switch (spec.kind) {
        case ModelKind::Hyperbolic: return predict_hyperbolic(x, spec);
        case ModelKind::PowerSeries: return predict_power(x, spec);
        case ModelKind::Polynomial: return predict_polynomial(x, spec);
        case ModelKind::Conic: return predict_conic(x, spec);
        case ModelKind::CustomRatio: return predict_custom_ratio(x, spec);
        case ModelKind::Bertrand: return predict_bertrand(x);
        case ModelKind::DifferenceLine: return predict_difference(x, spec);
    }
    throw Error(ErrorKind::Validation, "unknown model kind");
}

}  // namespace primerange
