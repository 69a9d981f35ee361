#pragma once

#include <cstdint>
#include <string>

namespace primerange {

// Largest x accepted anywhere; keeps x² inside 64 bits.
inline constexpr std::uint64_t kMaxX = 3'000'000'000ULL;

// One census row: the count of primes p with x <= p <= x².
struct CensusRecord {
    std::uint64_t x = 0;
    std::uint64_t x_squared = 0;
    std::uint64_t prime_count = 0;

    friend bool operator==(const CensusRecord&, const CensusRecord&) = default;
};

// Resumable state of a census sweep. Written after every checkpoint_every
// completed x values and once more on completion.
struct SweepCheckpoint {
    std::uint64_t n_max = 0;
    std::uint64_t last_completed_x = 0;
    std::uint64_t cumulative_pi_at_square = 0;  // π(last_completed_x²)
    std::uint64_t segment_cursor = 0;           // even sieve position to restart from
    std::uint64_t output_bytes = 0;             // durable prefix length of the census file
    std::uint64_t digest = 0;                   // FNV-1a 64 over the record lines of that prefix
    std::string output_path;                    // census file the digest refers to

    friend bool operator==(const SweepCheckpoint&, const SweepCheckpoint&) = default;
};

}  // namespace primerange
