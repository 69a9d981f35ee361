#include "cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "primerange/census.hpp"
#include "primerange/error.hpp"
#include "primerange/evaluation.hpp"
#include "primerange/fitting.hpp"
#include "primerange/models.hpp"
#include "primerange/pi_oracle.hpp"
#include "primerange/plot.hpp"
#include "primerange/storage.hpp"

namespace primerange {

namespace {

unsigned default_workers() {
    if (const char* env = std::getenv("PRIMERANGE_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<ModelSpec> parse_models(const std::string& list) {
    std::vector<ModelSpec> specs;
    if (list == "all") {
        for (auto kind : kCountModels) specs.push_back(ModelSpec::defaults(kind));
        return specs;
    }
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto kind = parse_model_key(item);
        if (!kind) throw Error(ErrorKind::Validation, fmt::format("unknown model '{}'", item));
        specs.push_back(ModelSpec::defaults(*kind));
    }
    if (specs.empty()) throw Error(ErrorKind::Validation, "no models given");
    return specs;
}

std::vector<CensusRecord> restrict_range(std::vector<CensusRecord> rows, std::optional<std::uint64_t> lo,
                                         std::optional<std::uint64_t> hi) {
    std::erase_if(rows, [&](const CensusRecord& r) { return (lo && r.x < *lo) || (hi && r.x > *hi); });
    if (rows.empty()) throw Error(ErrorKind::Validation, "x-range selects no census rows");
    return rows;
}

void print_constants(std::ostream& out, const ModelSpec& spec) {
    auto names = constant_names(spec.kind);
    out << "  " << model_key(spec.kind) << (spec.overridden ? " (overridden)" : "") << ":";
    if (names.empty()) out << " (none)";
    for (std::size_t i = 0; i < names.size(); ++i) out << ' ' << names[i] << '=' << format_real(spec.constants[i]);
    out << '\n';
}

struct CensusArgs {
    std::uint64_t max_x = 0;
    std::string out;
    std::string checkpoint;
    bool resume = false;
    unsigned workers = 0;
    std::uint64_t segment_length = std::uint64_t{1} << 22;
    std::uint64_t checkpoint_every = 1000;
    std::uint64_t stop_after = 0;
};

int cmd_census(const CensusArgs& a, std::ostream& out) {
    SweepOptions options;
    options.workers = a.workers;
    options.segment_length = a.segment_length;
    options.checkpoint_every = a.checkpoint_every;
    if (a.stop_after) options.stop_after_x = a.stop_after;

    std::optional<std::filesystem::path> checkpoint;
    if (!a.checkpoint.empty()) checkpoint = a.checkpoint;

    if (a.resume) {
        if (!checkpoint) throw Error(ErrorKind::Validation, "--resume requires --checkpoint");
        const auto outcome = resume_census(*checkpoint, options);
        out << fmt::format("resumed: {} rows, last_completed_x={}, {}\n", outcome.rows_emitted,
                           outcome.last_completed_x, outcome.completed ? "complete" : "interrupted");
        return 0;
    }
    if (a.max_x == 0) throw Error(ErrorKind::Validation, "--max-x is required");
    if (a.out.empty()) {
        if (checkpoint) throw Error(ErrorKind::Validation, "--checkpoint requires --out");
        out << kCensusHeader << '\n';
        census_sweep(a.max_x, options, [&](const CensusRecord& r) { out << format_census_line(r); });
        return 0;
    }
    const auto outcome = run_census(a.max_x, a.out, checkpoint, options);
    if (!outcome.completed) {
        out << fmt::format("interrupted after x={} ({} rows); resume with --resume --checkpoint\n",
                           outcome.last_completed_x, outcome.rows_emitted);
    }
    return 0;
}

struct EvaluateArgs {
    std::string census;
    std::string models = "all";
    std::string constants;
    std::string out;
    std::string format = "text";
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
    const auto rows = read_census(a.census);
    auto specs = parse_models(a.models);
    if (!a.constants.empty()) apply_overrides(read_constants(a.constants), specs);

    std::ofstream csv;
    if (!a.out.empty()) {
        csv.open(a.out, std::ios::trunc);
        if (!csv) throw Error(ErrorKind::Io, a.out + ": cannot open for writing");
        csv << kEvaluationHeader << '\n';
    }

    struct Line {
        ModelSpec spec;
        double are;
        std::uint64_t rows;
    };
    std::vector<Line> lines;
    for (const auto& spec : specs) {
        if (spec.kind == ModelKind::DifferenceLine) {
            const auto d = evaluate_difference_model(rows, spec);
            lines.push_back({spec, d.average_relative_error, d.points});
            continue;
        }
        RowSink sink;
        if (csv.is_open()) sink = [&](const EvaluationRow& r) { csv << format_evaluation_line(r, spec.kind); };
        const auto summary = evaluate_model(rows, spec, sink);
        lines.push_back({spec, summary.average_relative_error(), summary.rows});
    }
    if (csv.is_open() && !csv.flush()) throw Error(ErrorKind::Io, a.out + ": write failed");

    if (a.format == "csv") {
        out << "model,rows,average_relative_error,average_relative_error_percent\n";
        for (const auto& l : lines) {
            out << fmt::format("{},{},{},{}\n", model_key(l.spec.kind), l.rows, format_real(l.are),
                               format_percent(l.are));
        }
        return 0;
    }
    out << fmt::format("Average Value of Relative Errors (x = {}..{})\n", rows.front().x, rows.back().x);
    out << fmt::format("{:<28} | {:>22} | {}\n", "Function", "Average Relative Error", "Unrounded");
    out << std::string(72, '-') << '\n';
    for (const auto& l : lines) {
        out << fmt::format("{:<28} | {:>22} | {}\n", std::string(model_title(l.spec.kind)) + " Equation",
                           format_percent(l.are), format_real(l.are));
    }
    out << "constants used:\n";
    for (const auto& l : lines) print_constants(out, l.spec);
    return 0;
}

struct FitArgs {
    std::string census;
    std::string target;
    std::optional<std::uint64_t> x_min, x_max;
    std::string constants_out;
};

int cmd_fit(const FitArgs& a, std::ostream& out) {
    const auto rows = restrict_range(read_census(a.census), a.x_min, a.x_max);
    std::vector<FitPoint> points;
    FitResult fit;
    ModelSpec spec;
    auto to_points = [&](const std::vector<SeriesPoint>& s) {
        for (const auto& p : s) points.push_back({p.x, p.value});
    };
    if (a.target == "ratio") {
        to_points(ratio_series(rows));
        fit = fit_log_linear(points);
        spec = ModelSpec::defaults(ModelKind::CustomRatio);
        spec.set_constant("k_slope", fit.slope);
        spec.set_constant("k_intercept", fit.intercept);
    } else if (a.target == "difference") {
        to_points(difference_series(rows));
        fit = fit_line(points);
        spec = ModelSpec::defaults(ModelKind::DifferenceLine);
        spec.set_constant("slope", fit.slope);
        spec.set_constant("intercept", fit.intercept);
    } else {
        for (const auto& r : rows) points.push_back({r.x, static_cast<double>(r.prime_count)});
        if (a.target == "power") {
            fit = fit_power(points);
            spec = ModelSpec::defaults(ModelKind::PowerSeries);
            spec.set_constant("a", fit.power_coefficient());
            spec.set_constant("b", fit.slope);
        } else {
            fit = fit_hyperbolic_z(points);
            spec = ModelSpec::defaults(ModelKind::Hyperbolic);
            spec.set_constant("z_slope", fit.slope);
            spec.set_constant("z_intercept", fit.intercept);
        }
    }
    out << "target=" << a.target << '\n'
        << "slope=" << format_real(fit.slope) << '\n'
        << "intercept=" << format_real(fit.intercept) << '\n'
        << "r_squared=" << format_real(fit.r_squared) << '\n'
        << "n_points=" << fit.n_points << '\n'
        << "x_min=" << fit.x_min << '\n'
        << "x_max=" << fit.x_max << '\n';
    if (a.target == "power") {
        out << "a=" << format_real(fit.power_coefficient()) << '\n' << "b=" << format_real(fit.slope) << '\n';
    }
    if (!a.constants_out.empty()) {
        const std::vector<ModelSpec> specs{spec};
        write_constants(specs, a.constants_out);
    }
    return 0;
}

int cmd_matches(const std::string& census_path, const std::string& models, const std::string& format,
                std::ostream& out) {
    const auto rows = read_census(census_path);
    std::vector<EvaluationSummary> summaries;
    for (const auto& spec : parse_models(models)) {
        if (spec.kind == ModelKind::DifferenceLine) {
            throw Error(ErrorKind::Validation, "matches applies to count models only");
        }
        summaries.push_back(evaluate_model(rows, spec));
    }
    if (format == "csv") {
        out << "model,accurately_predicted,matched_after_ceiling,matched_after_flooring,rows\n";
        for (const auto& s : summaries) {
            out << fmt::format("{},{},{},{},{}\n", model_key(s.spec.kind), s.exact, s.ceil_match, s.floor_match,
                               s.rows);
        }
        return 0;
    }
    out << fmt::format("{:<14} | {:>20} | {:>32} | {:>32}\n", "Function", "Accurately Predicted",
                       "Matched After Ceiling Prediction", "Matched After Flooring Prediction");
    out << std::string(108, '-') << '\n';
    for (const auto& s : summaries) {
        out << fmt::format("{:<14} | {:>20} | {:>32} | {:>32}\n", model_title(s.spec.kind), s.exact, s.ceil_match,
                           s.floor_match);
    }
    return 0;
}

int cmd_verify(const std::string& census_path, std::size_t sample, std::uint64_t seed, std::ostream& out) {
    const auto rows = read_census(census_path);
    if (sample == 0 || sample > rows.size()) {
        throw Error(ErrorKind::Validation,
                    fmt::format("--sample must be in 1..{} for this census", rows.size()));
    }
    // Floyd's sampling; rng() % n keeps the draw sequence portable.
    std::mt19937_64 rng(seed);
    std::set<std::size_t> chosen;
    for (std::size_t j = rows.size() - sample; j < rows.size(); ++j) {
        const std::size_t t = static_cast<std::size_t>(rng() % (j + 1));
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    int failures = 0;
    for (auto index : chosen) {
        const auto& r = rows[index];
        const auto expected = count_in_range_oracle(r.x);
        if (expected == r.prime_count) {
            out << fmt::format("OK x={} count={}\n", r.x, r.prime_count);
        } else {
            out << fmt::format("MISMATCH x={} census={} oracle={}\n", r.x, r.prime_count, expected);
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}

struct PlotArgs {
    std::string census;
    std::string kind;
    std::string models = "all";
    std::string out;
    std::optional<std::uint64_t> x_min, x_max;
    unsigned width = 1200, height = 700;
    bool log_y = false;
};

int cmd_plot(const PlotArgs& a) {
    const auto rows = read_census(a.census);
    PlotConfig config;
    config.kind = a.kind == "count"        ? PlotKind::Count
                  : a.kind == "ratio"      ? PlotKind::Ratio
                  : a.kind == "difference" ? PlotKind::Difference
                                           : PlotKind::Compare;
    config.x_min = a.x_min;
    config.x_max = a.x_max;
    config.width = a.width;
    config.height = a.height;
    config.log_y = a.log_y;
    std::vector<ModelSpec> specs;
    if (config.kind == PlotKind::Compare) specs = parse_models(a.models);
    const auto svg = render(rows, config, specs);
    std::ofstream file(a.out, std::ios::trunc | std::ios::binary);
    if (!file || !(file << svg) || !file.flush()) throw Error(ErrorKind::Io, a.out + ": cannot write SVG");
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Prime census over [x, x²] and estimator evaluation", "primerange"};
    app.require_subcommand(1);

    CensusArgs census_args;
    census_args.workers = default_workers();
    auto* census = app.add_subcommand("census", "Count primes in [x, x²] for x = 2..max-x");
    census->add_option("--max-x", census_args.max_x, "Largest x")->check(CLI::Range(std::uint64_t{2}, kMaxX));
    census->add_option("--out", census_args.out, "Census CSV path (stdout when omitted)");
    census->add_option("--checkpoint", census_args.checkpoint, "Checkpoint file");
    census->add_flag("--resume", census_args.resume, "Resume from --checkpoint");
    census->add_option("--workers", census_args.workers, "Sieve threads (default $PRIMERANGE_WORKERS or cores)")
        ->check(CLI::PositiveNumber);
    census->add_option("--segment-length", census_args.segment_length, "Numbers per sieve segment")
        ->check(CLI::PositiveNumber);
    census->add_option("--checkpoint-every", census_args.checkpoint_every, "x values between checkpoints")
        ->check(CLI::PositiveNumber);
    census->add_option("--stop-after", census_args.stop_after, "Stop (checkpointed) after this x");

    std::uint64_t pi_n = 0;
    std::string pi_method = "oracle";
    auto* pi_cmd = app.add_subcommand("pi", "Print π(N)");
    pi_cmd->add_option("N", pi_n, "Upper bound")->required();
    pi_cmd->add_option("--method", pi_method, "oracle|sieve")->check(CLI::IsMember({"oracle", "sieve"}));

    EvaluateArgs eval_args;
    auto* evaluate = app.add_subcommand("evaluate", "Average relative error per model");
    evaluate->add_option("--census", eval_args.census, "Census CSV")->required();
    evaluate->add_option("--models", eval_args.models, "Comma-separated model keys or 'all'");
    evaluate->add_option("--constants", eval_args.constants, "Constants override file");
    evaluate->add_option("--out", eval_args.out, "Per-row evaluation CSV");
    evaluate->add_option("--format", eval_args.format, "text|csv")->check(CLI::IsMember({"text", "csv"}));

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "Least-squares fit of a census-derived series");
    fit->add_option("--census", fit_args.census, "Census CSV")->required();
    fit->add_option("--target", fit_args.target, "ratio|difference|power|hyperbolic")
        ->required()
        ->check(CLI::IsMember({"ratio", "difference", "power", "hyperbolic"}));
    fit->add_option("--x-min", fit_args.x_min, "Smallest x included");
    fit->add_option("--x-max", fit_args.x_max, "Largest x included");
    fit->add_option("--constants-out", fit_args.constants_out, "Write fitted constants file");

    std::string matches_census, matches_model, matches_format = "text";
    auto* matches = app.add_subcommand("matches", "Exact / ceiling / floor match tallies");
    matches->add_option("--census", matches_census, "Census CSV")->required();
    matches->add_option("--model", matches_model, "Model key, list, or 'all'")->required();
    matches->add_option("--format", matches_format, "text|csv")->check(CLI::IsMember({"text", "csv"}));

    std::string verify_census;
    std::size_t verify_sample = 0;
    std::uint64_t verify_seed = 0;
    auto* verify = app.add_subcommand("verify", "Cross-check random census rows against the π oracle");
    verify->add_option("--census", verify_census, "Census CSV")->required();
    verify->add_option("--sample", verify_sample, "Rows to check")->required();
    verify->add_option("--seed", verify_seed, "Sampling seed");

    PlotArgs plot_args;
    auto* plot = app.add_subcommand("plot", "Render an SVG figure");
    plot->add_option("--census", plot_args.census, "Census CSV")->required();
    plot->add_option("--kind", plot_args.kind, "count|ratio|difference|compare")
        ->required()
        ->check(CLI::IsMember({"count", "ratio", "difference", "compare"}));
    plot->add_option("--models", plot_args.models, "Models for compare (list or 'all')");
    plot->add_option("--out", plot_args.out, "SVG path")->required();
    plot->add_option("--x-min", plot_args.x_min, "Smallest x shown");
    plot->add_option("--x-max", plot_args.x_max, "Largest x shown");
    plot->add_option("--width", plot_args.width, "Width in pixels");
    plot->add_option("--height", plot_args.height, "Height in pixels");
    plot->add_flag("--log-y", plot_args.log_y, "Logarithmic y axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (*census) return cmd_census(census_args, out);
        if (*pi_cmd) {
            out << (pi_method == "sieve" ? prime_pi_sieve(pi_n) : pi(pi_n)) << '\n';
            return 0;
        }
        if (*evaluate) return cmd_evaluate(eval_args, out);
        if (*fit) return cmd_fit(fit_args, out);
        if (*matches) return cmd_matches(matches_census, matches_model, matches_format, out);
        if (*verify) return cmd_verify(verify_census, verify_sample, verify_seed, out);
        if (*plot) return cmd_plot(plot_args);
    } catch (const Error& e) {
        err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

}  // namespace primerange
