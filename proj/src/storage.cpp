#include "primerange/storage.hpp"

#include <fmt/format.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <system_error>

#include "primerange/error.hpp"

namespace primerange {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void io_error(const fs::path& path, std::string_view what) {
    throw Error(ErrorKind::Io, fmt::format("{}: {} ({})", path.string(), what, std::strerror(errno)));
}

bool parse_u64(std::string_view text, std::uint64_t& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

bool parse_double(std::string_view text, double& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

}  // namespace

void Digest::update(std::string_view bytes) noexcept {
    for (unsigned char c : bytes) {
        state_ ^= c;
        state_ *= 0x100000001b3ULL;
    }
}

std::string format_census_line(const CensusRecord& r) {
    return fmt::format("{},{},{}\n", r.x, r.x_squared, r.prime_count);
}

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

std::string format_evaluation_line(const EvaluationRow& row, ModelKind kind) {
    return fmt::format("{},{},{},{},{},{}\n", row.x, row.true_count, model_key(kind), format_real(row.prediction),
                       format_real(row.relative_error), to_string(row.match));
}

fs::path partial_path(const fs::path& path) {
    fs::path p = path;
    p += kPartialSuffix;
    return p;
}

CensusWriter::CensusWriter(const fs::path& path) : final_(path), working_(partial_path(path)) {
    file_ = std::fopen(working_.c_str(), "wb");
    if (file_ == nullptr) io_error(working_, "cannot open for writing");
    put(kCensusHeader);
    put("\n");
}

CensusWriter::CensusWriter(const fs::path& path, std::uint64_t keep_bytes, std::uint64_t digest,
                           std::uint64_t rows)
    : final_(path), working_(partial_path(path)), bytes_(keep_bytes), rows_(rows), digest_(digest) {
    std::error_code ec;
    fs::resize_file(working_, keep_bytes, ec);
    if (ec) throw Error(ErrorKind::Io, working_.string() + ": cannot truncate (" + ec.message() + ")");
    file_ = std::fopen(working_.c_str(), "ab");
    if (file_ == nullptr) io_error(working_, "cannot open for appending");
}

CensusWriter::~CensusWriter() {
    if (file_ != nullptr) std::fclose(file_);
}

void CensusWriter::put(std::string_view bytes) {
    if (std::fwrite(bytes.data(), 1, bytes.size(), file_) != bytes.size()) io_error(working_, "write failed");
    bytes_ += bytes.size();
}

void CensusWriter::write(const CensusRecord& record) {
    const std::string line = format_census_line(record);
    put(line);
    digest_.update(line);
    ++rows_;
}

void CensusWriter::sync() {
    if (std::fflush(file_) != 0) io_error(working_, "flush failed");
    if (::fsync(::fileno(file_)) != 0) io_error(working_, "fsync failed");
}

void CensusWriter::commit() {
    sync();
    if (std::fclose(file_) != 0) {
        file_ = nullptr;
        io_error(working_, "close failed");
    }
    file_ = nullptr;
    std::error_code ec;
    fs::rename(working_, final_, ec);
    if (ec) throw Error(ErrorKind::Io, final_.string() + ": cannot rename partial output (" + ec.message() + ")");
}

std::uint64_t write_census(std::span<const CensusRecord> records, const fs::path& path) {
    CensusWriter writer(path);
    for (const auto& r : records) writer.write(r);
    writer.commit();
    return writer.rows();
}

std::vector<CensusRecord> read_census(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        if (!fs::exists(path)) throw Error(ErrorKind::NotFound, path.string() + ": no such census file");
        throw Error(ErrorKind::Io, path.string() + ": cannot open");
    }
    std::string line;
    if (!std::getline(in, line) || trim(line) != kCensusHeader) {
        throw Error(ErrorKind::HeaderMismatch,
                    fmt::format("{}:1: expected header '{}'", path.string(), kCensusHeader));
    }
    std::vector<CensusRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = trim(line);
        if (view.empty()) continue;
        const auto c1 = view.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : view.find(',', c1 + 1);
        CensusRecord r;
        if (c2 == std::string_view::npos || !parse_u64(view.substr(0, c1), r.x) ||
            !parse_u64(view.substr(c1 + 1, c2 - c1 - 1), r.x_squared) ||
            !parse_u64(view.substr(c2 + 1), r.prime_count)) {
            throw Error(ErrorKind::Validation, fmt::format("{}:{}: malformed row '{}'", path.string(), line_no, view));
        }
        if (r.x == 0 || r.x > kMaxX || r.x_squared != r.x * r.x) {
            throw Error(ErrorKind::SquareMismatch,
                        fmt::format("{}:{}: x_squared {} != {}²", path.string(), line_no, r.x_squared, r.x));
        }
        if (!out.empty()) {
            const auto prev = out.back().x;
            if (r.x <= prev) {
                throw Error(ErrorKind::NonMonotonic,
                            fmt::format("{}:{}: x={} does not follow x={}", path.string(), line_no, r.x, prev));
            }
            if (r.x != prev + 1) {
                throw Error(ErrorKind::Gap,
                            fmt::format("{}:{}: gap, x jumps {} -> {}", path.string(), line_no, prev, r.x));
            }
        }
        out.push_back(r);
    }
    if (in.bad()) throw Error(ErrorKind::Io, path.string() + ": read failed");
    return out;
}

void write_checkpoint(const SweepCheckpoint& c, const fs::path& path) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::FILE* f = std::fopen(tmp.c_str(), "wb");
        if (f == nullptr) io_error(tmp, "cannot open checkpoint for writing");
        const std::string body = fmt::format(
            "{}\nn_max={}\noutput={}\noutput_bytes={}\nlast_completed_x={}\ncumulative_pi_at_square={}\n"
            "segment_cursor={}\ndigest={:016x}\n",
            kCheckpointHeader, c.n_max, c.output_path, c.output_bytes, c.last_completed_x,
            c.cumulative_pi_at_square, c.segment_cursor, c.digest);
        const bool ok = std::fwrite(body.data(), 1, body.size(), f) == body.size() && std::fflush(f) == 0 &&
                        ::fsync(::fileno(f)) == 0;
        if (std::fclose(f) != 0 || !ok) io_error(tmp, "checkpoint write failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw Error(ErrorKind::Io, path.string() + ": cannot install checkpoint (" + ec.message() + ")");
}

SweepCheckpoint read_checkpoint(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        if (!fs::exists(path)) throw Error(ErrorKind::NotFound, path.string() + ": no such checkpoint");
        throw Error(ErrorKind::Io, path.string() + ": cannot open checkpoint");
    }
    auto corrupt = [&](std::string_view why) {
        return Error(ErrorKind::Integrity, fmt::format("{}: corrupted checkpoint: {}", path.string(), why));
    };
    std::string line;
    if (!std::getline(in, line) || trim(line) != kCheckpointHeader) throw corrupt("bad version header");

    SweepCheckpoint c;
    unsigned seen = 0;
    while (std::getline(in, line)) {
        std::string_view view = trim(line);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) throw corrupt(fmt::format("line '{}'", view));
        const auto key = view.substr(0, eq);
        const auto value = view.substr(eq + 1);
        auto number = [&](std::uint64_t& field, unsigned bit) {
            if (!parse_u64(value, field)) throw corrupt(fmt::format("bad value for {}", key));
            seen |= bit;
        };
        if (key == "n_max") number(c.n_max, 1u << 0);
        else if (key == "output_bytes") number(c.output_bytes, 1u << 1);
        else if (key == "last_completed_x") number(c.last_completed_x, 1u << 2);
        else if (key == "cumulative_pi_at_square") number(c.cumulative_pi_at_square, 1u << 3);
        else if (key == "segment_cursor") number(c.segment_cursor, 1u << 4);
        else if (key == "digest") {
            auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), c.digest, 16);
            if (ec != std::errc() || ptr != value.data() + value.size() || value.size() != 16)
                throw corrupt("bad digest");
            seen |= 1u << 5;
        } else if (key == "output") {
            c.output_path = std::string(value);
            seen |= 1u << 6;
        } else {
            throw corrupt(fmt::format("unknown key '{}'", key));
        }
    }
    if (seen != 0x7f) throw corrupt("missing fields");
    return c;
}

std::vector<ConstantOverride> read_constants(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        if (!fs::exists(path)) throw Error(ErrorKind::NotFound, path.string() + ": no such constants file");
        throw Error(ErrorKind::Io, path.string() + ": cannot open");
    }
    std::vector<ConstantOverride> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        const auto dot = view.find('.');
        auto bad = [&](std::string_view why) {
            return Error(ErrorKind::Validation, fmt::format("{}:{}: {}", path.string(), line_no, why));
        };
        if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq)
            throw bad("expected model.constant=value");
        const auto kind = parse_model_key(trim(view.substr(0, dot)));
        if (!kind) throw bad(fmt::format("unknown model '{}'", view.substr(0, dot)));
        const auto name = trim(view.substr(dot + 1, eq - dot - 1));
        bool known = false;
        for (auto n : constant_names(*kind)) known = known || n == name;
        if (!known) throw bad(fmt::format("unknown constant '{}' for {}", name, model_key(*kind)));
        double value = 0.0;
        if (!parse_double(trim(view.substr(eq + 1)), value)) throw bad("value is not a real number");
        out.push_back({*kind, std::string(name), value});
    }
    return out;
}

void apply_overrides(std::span<const ConstantOverride> overrides, std::vector<ModelSpec>& specs) {
    for (const auto& o : overrides) {
        for (auto& spec : specs) {
            if (spec.kind == o.kind) spec.set_constant(o.name, o.value);
        }
    }
}

void write_constants(std::span<const ModelSpec> specs, const fs::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, path.string() + ": cannot open for writing");
    for (const auto& spec : specs) {
        auto names = constant_names(spec.kind);
        for (std::size_t i = 0; i < names.size(); ++i) {
            out << model_key(spec.kind) << '.' << names[i] << '=' << format_real(spec.constants[i]) << '\n';
        }
    }
    if (!out.flush()) throw Error(ErrorKind::Io, path.string() + ": write failed");
}

}  // namespace primerange
