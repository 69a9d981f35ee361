#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "primerange/records.hpp"

namespace primerange {

struct SweepOptions {
    unsigned workers = 1;
    std::uint64_t segment_length = std::uint64_t{1} << 22;  // numbers per segment (odd-only storage)
    std::uint64_t checkpoint_every = 1000;                  // x values between checkpoints
    // Stop (after checkpointing) once this x has been emitted. Used to
    // simulate an interrupted run.
    std::optional<std::uint64_t> stop_after_x;
};

using RecordSink = std::function<void(const CensusRecord&)>;

// Odd-only sieve of Eratosthenes; all primes <= limit in ascending order.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

// π(n) by a segmented sweep over [0, n].
std::uint64_t prime_pi_sieve(std::uint64_t n, unsigned workers = 1);

// Number of primes in the closed range [x, x²], i.e. π(x²) − π(x−1).
// Throws RangeTooLarge when x exceeds kMaxX.
std::uint64_t count_in_range(std::uint64_t x, unsigned workers = 1);

// Emits records for x = 2..n_max in ascending order from one cumulative
// sieve pass over [0, n_max²]. Output is independent of options.workers
// and options.segment_length.
void census_sweep(std::uint64_t n_max, const SweepOptions& options, const RecordSink& sink);
std::vector<CensusRecord> census(std::uint64_t n_max, const SweepOptions& options = {});

struct SweepOutcome {
    std::uint64_t rows_emitted = 0;  // rows produced by this invocation
    std::uint64_t last_completed_x = 0;
    bool completed = false;          // false when stopped via stop_after_x
};

// File-backed sweep: writes the census CSV (via `<out>.partial` until done)
// and, when a checkpoint path is given, a checkpoint every
// options.checkpoint_every x values and on completion.
SweepOutcome run_census(std::uint64_t n_max, const std::filesystem::path& out,
                        const std::optional<std::filesystem::path>& checkpoint, const SweepOptions& options,
                        const RecordSink& sink = {});

// Continues the sweep recorded in `checkpoint`. Validates the digest of the
// durable census prefix first; a mismatch raises an Integrity error and
// nothing is written. Resuming a completed sweep emits nothing.
SweepOutcome resume_census(const std::filesystem::path& checkpoint, const SweepOptions& options,
                           const RecordSink& sink = {});

}  // namespace primerange
