#include <doctest.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <string>

#include "oracles.hpp"
#include "primerange/census.hpp"
#include "primerange/error.hpp"
#include "primerange/pi_oracle.hpp"
#include "primerange/storage.hpp"

using namespace primerange;

namespace {

// Left column of the published table of generated counts, x = 2..22.
constexpr std::array<std::uint64_t, 21> kSmallCounts{2,  3,  4,  7,  8,  12, 14, 18, 21, 26, 29,
                                                     34, 38, 42, 48, 55, 59, 65, 70, 77, 84};

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::Validation;
}

}  // namespace

TEST_CASE("primes_up_to agrees with trial division") {
    const auto primes = primes_up_to(10'000);
    std::vector<std::uint64_t> expected;
    for (std::uint64_t n = 0; n <= 10'000; ++n) {
        if (oracle::is_prime_trial(n)) expected.push_back(n);
    }
    CHECK(primes == expected);
    CHECK(primes_up_to(1).empty());
    CHECK(primes_up_to(2) == std::vector<std::uint64_t>{2});
}

TEST_CASE("prime_pi_sieve matches a plain sieve across segment edges") {
    const auto table = oracle::pi_table(200'000);
    for (std::uint64_t n : {0, 1, 2, 3, 4, 9, 10, 100, 4095, 4096, 4097, 65536, 199'999, 200'000}) {
        CHECK(prime_pi_sieve(n) == table[n]);
    }
}

TEST_CASE("count_in_range examples") {
    CHECK(count_in_range(2) == 2);
    CHECK(count_in_range(10) == 21);
    CHECK(count_in_range(1) == 0);
    CHECK(count_in_range(1347) == 135856);
    CHECK(kind_of([] { count_in_range(kMaxX + 1); }) == ErrorKind::RangeTooLarge);
}

TEST_CASE("census_sweep reproduces the small published rows") {
    const auto rows = census(22);
    REQUIRE(rows.size() == kSmallCounts.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].x == i + 2);
        CHECK(rows[i].x_squared == rows[i].x * rows[i].x);
        CHECK(rows[i].prime_count == kSmallCounts[i]);
    }
    const auto single = census(2);
    REQUIRE(single.size() == 1);
    CHECK(single[0] == CensusRecord{2, 4, 2});

    CHECK(kind_of([] { census(1); }) == ErrorKind::Domain);
    CHECK(kind_of([] { census(kMaxX + 1); }) == ErrorKind::RangeTooLarge);
}

TEST_CASE("census row for x=1347") {
    const auto rows = census(1347);
    CHECK(rows.back() == CensusRecord{1347, 1814409, 135856});
}

TEST_CASE("census equals π(x²) − π(x−1) from a plain sieve for x <= 3000") {
    const auto table = oracle::pi_table(3000ULL * 3000ULL);
    SweepOptions options;
    options.segment_length = 1 << 16;  // many segments, many squares per segment
    const auto rows = census(3000, options);
    REQUIRE(rows.size() == 2999);
    for (const auto& r : rows) {
        REQUIRE(r.prime_count == table[r.x_squared] - table[r.x - 1]);
    }
}

TEST_CASE("census equals the combinatorial oracle for x <= 3000") {
    const auto rows = census(3000);
    for (const auto& r : rows) REQUIRE(r.prime_count == count_in_range_oracle(r.x));
}

TEST_CASE("census invariants at desk scale") {
    const auto rows = census(10'000);
    std::vector<std::uint64_t> not_increasing, below_x;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].prime_count <= rows[i - 1].prime_count) not_increasing.push_back(rows[i].x);
        if (rows[i].prime_count < rows[i].x) below_x.push_back(rows[i].x);
    }
    CHECK(not_increasing.empty());
    CHECK(below_x.empty());
}

TEST_CASE("census output is independent of workers and segment length") {
    SweepOptions base;
    const auto reference = census(2000, base);
    for (unsigned workers : {2u, 4u, 8u}) {
        for (std::uint64_t segment : {std::uint64_t{1000}, std::uint64_t{4097}, std::uint64_t{1} << 22}) {
            SweepOptions o;
            o.workers = workers;
            o.segment_length = segment;
            CHECK(census(2000, o) == reference);
        }
    }
}

TEST_CASE("file sweep: interrupt and resume is byte-identical") {
    oracle::TempDir dir;
    SweepOptions options;
    options.segment_length = 1 << 18;
    options.checkpoint_every = 100;

    const auto full = dir / "full.csv";
    auto outcome = run_census(1000, full, std::nullopt, options);
    CHECK(outcome.completed);
    CHECK(outcome.rows_emitted == 999);
    CHECK_FALSE(std::filesystem::exists(partial_path(full)));

    const auto part = dir / "part.csv";
    const auto ckpt = dir / "part.ckpt";
    SweepOptions interrupted = options;
    interrupted.stop_after_x = 500;
    outcome = run_census(1000, part, ckpt, interrupted);
    CHECK_FALSE(outcome.completed);
    CHECK(outcome.last_completed_x == 500);
    CHECK_FALSE(std::filesystem::exists(part));
    CHECK(std::filesystem::exists(partial_path(part)));

    const auto saved = read_checkpoint(ckpt);
    CHECK(saved.last_completed_x == 500);
    CHECK(saved.cumulative_pi_at_square == pi(500 * 500));
    CHECK(saved.n_max == 1000);

    std::vector<CensusRecord> resumed_rows;
    SweepOptions resume = options;
    resume.workers = 3;
    outcome = resume_census(ckpt, resume, [&](const CensusRecord& r) { resumed_rows.push_back(r); });
    CHECK(outcome.completed);
    REQUIRE(resumed_rows.size() == 500);
    CHECK(resumed_rows.front().x == 501);
    CHECK(resumed_rows.back().x == 1000);
    CHECK(oracle::slurp(part) == oracle::slurp(full));

    SUBCASE("resuming a completed sweep emits nothing") {
        std::size_t emitted = 0;
        outcome = resume_census(ckpt, options, [&](const CensusRecord&) { ++emitted; });
        CHECK(outcome.completed);
        CHECK(emitted == 0);
        CHECK(outcome.rows_emitted == 0);
    }
}

TEST_CASE("resume refuses tampered or missing state") {
    oracle::TempDir dir;
    SweepOptions options;
    options.checkpoint_every = 50;
    options.stop_after_x = 120;
    const auto out = dir / "c.csv";
    const auto ckpt = dir / "c.ckpt";
    run_census(300, out, ckpt, options);
    const std::string original = oracle::slurp(ckpt);

    auto rewrite = [&](const std::string& from, const std::string& to) {
        std::string text = original;
        const auto at = text.find(from);
        REQUIRE(at != std::string::npos);
        text.replace(at, from.size(), to);
        std::ofstream(ckpt, std::ios::trunc) << text;
    };

    SUBCASE("digest") {
        const auto at = original.find("digest=");
        std::string text = original;
        text[at + 7] = text[at + 7] == '0' ? '1' : '0';
        std::ofstream(ckpt, std::ios::trunc) << text;
        CHECK(kind_of([&] { resume_census(ckpt, {}); }) == ErrorKind::Integrity);
    }
    SUBCASE("cumulative count") {
        const auto saved = read_checkpoint(ckpt);
        rewrite("cumulative_pi_at_square=" + std::to_string(saved.cumulative_pi_at_square),
                "cumulative_pi_at_square=" + std::to_string(saved.cumulative_pi_at_square + 1));
        CHECK(kind_of([&] { resume_census(ckpt, {}); }) == ErrorKind::Integrity);
    }
    SUBCASE("census data changed under the checkpoint") {
        std::string data = oracle::slurp(partial_path(out));
        data[data.find("\n50,") + 10] ^= 1;
        std::ofstream(partial_path(out), std::ios::trunc | std::ios::binary) << data;
        CHECK(kind_of([&] { resume_census(ckpt, {}); }) == ErrorKind::Integrity);
    }
    SUBCASE("garbled header") {
        rewrite("primerange-checkpoint v1", "primerange-checkpoint v9");
        CHECK(kind_of([&] { resume_census(ckpt, {}); }) == ErrorKind::Integrity);
    }
    SUBCASE("missing checkpoint") {
        CHECK(kind_of([&] { resume_census(dir / "nope.ckpt", {}); }) == ErrorKind::NotFound);
    }
    SUBCASE("missing census output") {
        std::filesystem::remove(partial_path(out));
        CHECK(kind_of([&] { resume_census(ckpt, {}); }) == ErrorKind::NotFound);
    }
}

TEST_CASE("unwritable census output is an I/O error") {
    CHECK(kind_of([] { run_census(10, "/nonexistent-dir/x.csv", std::nullopt, {}); }) == ErrorKind::Io);
}
