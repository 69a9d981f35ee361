#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "primerange/evaluation.hpp"
#include "primerange/models.hpp"
#include "primerange/records.hpp"

namespace primerange {

inline constexpr std::string_view kCensusHeader = "x,x_squared,prime_count";
inline constexpr std::string_view kCheckpointHeader = "primerange-checkpoint v1";
inline constexpr std::string_view kPartialSuffix = ".partial";

// FNV-1a, 64 bit.
class Digest {
   public:
    Digest() = default;
    explicit Digest(std::uint64_t state) : state_(state) {}

    void update(std::string_view bytes) noexcept;
    std::uint64_t value() const noexcept { return state_; }

   private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string format_census_line(const CensusRecord& record);  // newline-terminated

// Real numbers are written with 17 significant digits so they round-trip.
std::string format_real(double value);

std::filesystem::path partial_path(const std::filesystem::path& path);

// Streaming census writer. Rows go to `<path>.partial`; commit() makes them
// durable and renames onto `path`. A writer destroyed without commit() leaves
// the `.partial` file behind as the marker of an incomplete run.
class CensusWriter {
   public:
    // Starts a fresh file with the header line.
    explicit CensusWriter(const std::filesystem::path& path);
    // Reopens an existing partial file truncated to `keep_bytes`, continuing
    // the running digest from `digest`.
    CensusWriter(const std::filesystem::path& path, std::uint64_t keep_bytes, std::uint64_t digest,
                 std::uint64_t rows);
    CensusWriter(const CensusWriter&) = delete;
    CensusWriter& operator=(const CensusWriter&) = delete;
    ~CensusWriter();

    void write(const CensusRecord& record);
    void sync();  // flush + fsync
    void commit();

    std::uint64_t bytes_written() const noexcept { return bytes_; }
    std::uint64_t digest() const noexcept { return digest_.value(); }
    std::uint64_t rows() const noexcept { return rows_; }
    const std::filesystem::path& working_path() const noexcept { return working_; }

   private:
    void put(std::string_view bytes);

    std::filesystem::path final_;
    std::filesystem::path working_;
    std::FILE* file_ = nullptr;
    std::uint64_t bytes_ = 0;
    std::uint64_t rows_ = 0;
    Digest digest_;
};

std::uint64_t write_census(std::span<const CensusRecord> records, const std::filesystem::path& path);

// Validates header, x_squared == x·x, strictly ascending x and no gaps.
std::vector<CensusRecord> read_census(const std::filesystem::path& path);

void write_checkpoint(const SweepCheckpoint& checkpoint, const std::filesystem::path& path);
SweepCheckpoint read_checkpoint(const std::filesystem::path& path);

inline constexpr std::string_view kEvaluationHeader = "x,true_count,model,prediction,relative_error,match_class";

std::string format_evaluation_line(const EvaluationRow& row, ModelKind kind);  // newline-terminated

// Constants file: `model.constant=value` per line, `#` comments, blank lines.
struct ConstantOverride {
    ModelKind kind;
    std::string name;
    double value;
};
std::vector<ConstantOverride> read_constants(const std::filesystem::path& path);
void apply_overrides(std::span<const ConstantOverride> overrides, std::vector<ModelSpec>& specs);
void write_constants(std::span<const ModelSpec> specs, const std::filesystem::path& path);

}  // namespace primerange
