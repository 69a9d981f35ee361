#include "primerange/census.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>
#include <thread>

#include "primerange/error.hpp"
#include "primerange/storage.hpp"

namespace primerange {

namespace fs = std::filesystem;

namespace {

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && (r > n / r)) --r;                   // r² > n
    while ((r + 1) <= n / (r + 1)) ++r;                 // (r+1)² <= n
    return r;
}

std::uint64_t ceil_sqrt(std::uint64_t n) {
    const auto r = isqrt(n);
    return r * r == n ? r : r + 1;
}

void check_x(std::uint64_t x) {
    if (x > kMaxX) {
        throw Error(ErrorKind::RangeTooLarge,
                    fmt::format("x={} exceeds the supported maximum {} (x² must fit 64 bits)", x, kMaxX));
    }
}

// Even sieve position from which a sweep restarts after emitting x:
// π(cursor − 1) == π(x²) because even x² > 2 is composite.
std::uint64_t cursor_after(std::uint64_t x) {
    const auto sq = x * x;
    return sq % 2 == 0 ? sq : sq + 1;
}

struct SegmentResult {
    std::uint64_t total = 0;                 // primes in [lo, hi)
    std::vector<std::uint64_t> at_square;    // primes in [lo, x²] for each x of the segment
};

// Sieves odd numbers of [lo, hi) into `flags` (flags[i] <-> lo + 2i + 1).
// `odd_primes` must cover every prime <= √(hi − 1).
void sieve_segment(std::uint64_t lo, std::uint64_t hi, std::span<const std::uint64_t> odd_primes,
                   std::vector<std::uint8_t>& flags) {
    const std::size_t count = (hi - lo) / 2;
    flags.assign(count, 1);
    if (lo == 0 && count > 0) flags[0] = 0;  // 1 is not prime
    for (const auto p : odd_primes) {
        const auto square = p * p;
        if (square >= hi) break;
        std::uint64_t start;
        if (square >= lo) {
            start = square;
        } else {
            start = (lo + p - 1) / p * p;
            if (start % 2 == 0) start += p;
        }
        for (std::uint64_t i = (start - lo - 1) / 2; i < count; i += p) flags[i] = 0;
    }
}

SegmentResult process_segment(std::uint64_t lo, std::uint64_t hi, std::uint64_t first_x, std::uint64_t last_x,
                              std::span<const std::uint64_t> odd_primes, std::vector<std::uint8_t>& flags) {
    sieve_segment(lo, hi, odd_primes, flags);
    SegmentResult result;
    const std::uint64_t two = (lo <= 2 && hi > 2) ? 1 : 0;
    std::uint64_t running = 0;
    std::size_t pos = 0;
    for (auto x = first_x; x <= last_x; ++x) {
        // Odd numbers in [lo, x²] occupy flag indices [0, (x² − lo + 1) / 2).
        const std::size_t end = (x * x - lo + 1) / 2;
        for (; pos < end; ++pos) running += flags[pos];
        result.at_square.push_back(running + two);
    }
    for (; pos < flags.size(); ++pos) running += flags[pos];
    result.total = running + two;
    return result;
}

// One cumulative pass over [start_lo, limit]. `pi_before` is π(start_lo − 1).
// For each x in [first_x, last_x] (ascending, squares inside the pass) calls
// on_square(x, π(x²)); returning false stops the pass. Returns π(limit), or
// nothing when stopped early.
class SegmentedPass {
   public:
    SegmentedPass(std::span<const std::uint64_t> primes, const SweepOptions& options)
        : workers_(std::max(1u, options.workers)),
          segment_(std::max<std::uint64_t>(2, options.segment_length + options.segment_length % 2)) {
        for (auto p : primes) {
            if (p != 2) odd_primes_.push_back(p);
        }
        buffers_.resize(workers_);
    }

    template <typename OnSquare>
    std::optional<std::uint64_t> run(std::uint64_t start_lo, std::uint64_t limit, std::uint64_t pi_before,
                                     std::uint64_t first_x, std::uint64_t last_x, OnSquare&& on_square) {
        std::uint64_t cumulative = pi_before;
        std::uint64_t next_x = first_x;
        std::uint64_t lo = start_lo;
        const std::size_t batch_size = workers_ * 2;
        std::vector<Job> jobs;
        std::vector<SegmentResult> results;

        while (lo <= limit) {
            jobs.clear();
            for (std::size_t j = 0; j < batch_size && lo <= limit; ++j) {
                const std::uint64_t hi = (limit - lo < segment_) ? limit + 1 : lo + segment_;
                Job job{lo, hi, 1, 0};
                if (next_x <= last_x) {
                    const auto xa = std::max(next_x, ceil_sqrt(lo));
                    const auto xb = std::min(last_x, isqrt(hi - 1));
                    if (xa <= xb) {
                        job.first_x = xa;
                        job.last_x = xb;
                        next_x = xb + 1;
                    }
                }
                jobs.push_back(job);
                lo = hi;
            }
            results.assign(jobs.size(), {});
            compute(jobs, results);
            for (std::size_t j = 0; j < jobs.size(); ++j) {
                const auto& job = jobs[j];
                for (std::uint64_t x = job.first_x; x <= job.last_x; ++x) {
                    if (!on_square(x, cumulative + results[j].at_square[x - job.first_x])) return std::nullopt;
                }
                cumulative += results[j].total;
            }
        }
        return cumulative;
    }

   private:
    struct Job {
        std::uint64_t lo, hi, first_x, last_x;
    };

    void compute(const std::vector<Job>& jobs, std::vector<SegmentResult>& results) {
        auto work = [&](std::size_t worker) {
            for (std::size_t j = worker; j < jobs.size(); j += workers_) {
                const auto& job = jobs[j];
                results[j] = process_segment(job.lo, job.hi, job.first_x, job.last_x, odd_primes_, buffers_[worker]);
            }
        };
        if (workers_ == 1 || jobs.size() == 1) {
            work(0);
            return;
        }
        std::vector<std::jthread> threads;
        for (std::size_t w = 1; w < workers_; ++w) threads.emplace_back(work, w);
        work(0);
    }

    std::size_t workers_;
    std::uint64_t segment_;
    std::vector<std::uint64_t> odd_primes_;
    std::vector<std::vector<std::uint8_t>> buffers_;
};

// Runs the census pass from `start_x` and hands each record plus π(x²) to `emit`.
template <typename Emit>
bool census_pass(std::uint64_t n_max, std::uint64_t start_x, std::uint64_t start_lo, std::uint64_t pi_before,
                 const SweepOptions& options, Emit&& emit) {
    const auto primes = primes_up_to(n_max);
    // primes below x, advanced as x ascends
    auto below = static_cast<std::size_t>(std::lower_bound(primes.begin(), primes.end(), start_x) - primes.begin());
    SegmentedPass pass(primes, options);
    auto finished = pass.run(start_lo, n_max * n_max, pi_before, start_x, n_max,
                             [&](std::uint64_t x, std::uint64_t pi_square) {
                                 while (below < primes.size() && primes[below] < x) ++below;
                                 return emit(CensusRecord{x, x * x, pi_square - below}, pi_square);
                             });
    return finished.has_value();
}

void check_n_max(std::uint64_t n_max) {
    if (n_max < 2) throw Error(ErrorKind::Domain, fmt::format("n_max={} (must be >= 2)", n_max));
    check_x(n_max);
}

SweepOutcome drive_file_sweep(std::uint64_t n_max, std::uint64_t start_x, std::uint64_t start_lo,
                              std::uint64_t pi_before, const fs::path& out, CensusWriter& writer,
                              const std::optional<fs::path>& checkpoint, const SweepOptions& options,
                              const RecordSink& sink) {
    SweepOutcome outcome;
    outcome.last_completed_x = start_x - 1;
    const auto every = std::max<std::uint64_t>(1, options.checkpoint_every);

    auto save = [&](std::uint64_t x, std::uint64_t pi_square, std::uint64_t bytes, std::uint64_t digest) {
        write_checkpoint(SweepCheckpoint{n_max, x, pi_square, cursor_after(x), bytes, digest, out.string()},
                         *checkpoint);
    };

    std::uint64_t last_pi_square = pi_before;
    const bool finished = census_pass(
        n_max, start_x, start_lo, pi_before, options, [&](const CensusRecord& r, std::uint64_t pi_square) {
            writer.write(r);
            if (sink) sink(r);
            ++outcome.rows_emitted;
            outcome.last_completed_x = r.x;
            last_pi_square = pi_square;
            const bool stop = options.stop_after_x && r.x >= *options.stop_after_x && r.x < n_max;
            if (checkpoint && r.x < n_max && (r.x % every == 0 || stop)) {
                writer.sync();
                save(r.x, pi_square, writer.bytes_written(), writer.digest());
            }
            return !stop;
        });
    if (!finished) {
        writer.sync();
        return outcome;
    }
    writer.commit();
    if (checkpoint) save(n_max, last_pi_square, writer.bytes_written(), writer.digest());
    outcome.completed = true;
    return outcome;
}

}  // namespace

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
    std::vector<std::uint64_t> primes;
    if (limit < 2) return primes;
    primes.push_back(2);
    // composite[i] <-> 2i + 1
    std::vector<std::uint8_t> composite(limit / 2 + 1, 0);
    for (std::uint64_t i = 1; 2 * i + 1 <= limit; ++i) {
        if (composite[i]) continue;
        const std::uint64_t p = 2 * i + 1;
        primes.push_back(p);
        for (std::uint64_t j = p * p / 2; 2 * j + 1 <= limit; j += p) composite[j] = 1;
    }
    return primes;
}

std::uint64_t prime_pi_sieve(std::uint64_t n, unsigned workers) {
    if (n < 2) return 0;
    const auto primes = primes_up_to(isqrt(n));
    SweepOptions options;
    options.workers = workers;
    SegmentedPass pass(primes, options);
    return *pass.run(0, n, 0, 1, 0, [](std::uint64_t, std::uint64_t) { return true; });
}

std::uint64_t count_in_range(std::uint64_t x, unsigned workers) {
    check_x(x);
    if (x < 2) return 0;
    return prime_pi_sieve(x * x, workers) - primes_up_to(x - 1).size();
}

void census_sweep(std::uint64_t n_max, const SweepOptions& options, const RecordSink& sink) {
    check_n_max(n_max);
    census_pass(n_max, 2, 0, 0, options, [&](const CensusRecord& r, std::uint64_t) {
        sink(r);
        return !(options.stop_after_x && r.x >= *options.stop_after_x);
    });
}

std::vector<CensusRecord> census(std::uint64_t n_max, const SweepOptions& options) {
    check_n_max(n_max);
    std::vector<CensusRecord> out;
    out.reserve(n_max > 1 ? n_max - 1 : 0);
    census_sweep(n_max, options, [&](const CensusRecord& r) { out.push_back(r); });
    return out;
}

SweepOutcome run_census(std::uint64_t n_max, const fs::path& out, const std::optional<fs::path>& checkpoint,
                        const SweepOptions& options, const RecordSink& sink) {
    check_n_max(n_max);
    CensusWriter writer(out);
    return drive_file_sweep(n_max, 2, 0, 0, out, writer, checkpoint, options, sink);
}

SweepOutcome resume_census(const fs::path& checkpoint_path, const SweepOptions& options, const RecordSink& sink) {
    const SweepCheckpoint c = read_checkpoint(checkpoint_path);
    auto corrupt = [&](std::string_view why) {
        return Error(ErrorKind::Integrity, fmt::format("{}: {}", checkpoint_path.string(), why));
    };
    if (c.n_max < 2 || c.n_max > kMaxX || c.last_completed_x < 2 || c.last_completed_x > c.n_max) {
        throw corrupt("checkpoint fields out of range");
    }
    if (c.segment_cursor != cursor_after(c.last_completed_x)) throw corrupt("segment cursor does not match x");

    const fs::path out = c.output_path;
    const bool completed = c.last_completed_x == c.n_max;
    const fs::path data = completed ? out : partial_path(out);
    if (!fs::exists(data)) throw Error(ErrorKind::NotFound, data.string() + ": census output for checkpoint not found");

    std::string prefix(c.output_bytes, '\0');
    {
        std::ifstream in(data, std::ios::binary);
        if (!in) throw Error(ErrorKind::Io, data.string() + ": cannot open");
        in.read(prefix.data(), static_cast<std::streamsize>(prefix.size()));
        if (static_cast<std::uint64_t>(in.gcount()) != c.output_bytes) throw corrupt("census output shorter than checkpoint");
    }
    const std::string header = std::string(kCensusHeader) + "\n";
    if (prefix.compare(0, header.size(), header) != 0) throw corrupt("census output header mismatch");
    Digest digest;
    digest.update(std::string_view(prefix).substr(header.size()));
    if (digest.value() != c.digest) throw corrupt("digest mismatch; refusing to resume");

    // The last durable row must agree with the recorded π(x²).
    const auto last_nl = prefix.rfind('\n', prefix.size() - 2);
    const std::string expected_tail =
        format_census_line({c.last_completed_x, c.last_completed_x * c.last_completed_x,
                            c.cumulative_pi_at_square - primes_up_to(c.last_completed_x - 1).size()});
    if (prefix.compare(last_nl + 1, std::string::npos, expected_tail) != 0) {
        throw corrupt("last census row disagrees with cumulative_pi_at_square");
    }

    if (completed) return SweepOutcome{0, c.n_max, true};

    CensusWriter writer(out, c.output_bytes, c.digest, c.last_completed_x - 1);
    return drive_file_sweep(c.n_max, c.last_completed_x + 1, c.segment_cursor, c.cumulative_pi_at_square, out,
                            writer, checkpoint_path, options, sink);
}

}  // namespace primerange
