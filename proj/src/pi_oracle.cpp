#include "primerange/pi_oracle.hpp"

#include <fmt/format.h>

#include <cmath>

#include "primerange/error.hpp"
#include "primerange/records.hpp"

namespace primerange {

namespace {

std::uint64_t floor_sqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && r > n / r) --r;
    while (r + 1 <= n / (r + 1)) ++r;
    return r;
}

// ⌊v/p⌋ for a fixed p. For 32-bit U the quotient is a truncated product
// with 1/p rounded up: the result never falls below v/p, and overshoots by
// less than 2^-18 < 1/p, so it cannot reach the next integer.
template <typename U>
struct Divider {
    explicit Divider(U divisor)
        : p(divisor), inverse(std::nextafter(1.0 / static_cast<double>(divisor), 2.0)) {}

    U operator()(U v) const {
        if constexpr (sizeof(U) == 4) {
            return static_cast<U>(static_cast<double>(v) * inverse);
        } else {
            return v / p;
        }
    }

    U p;
    double inverse;
};

// Small keys in [qp, qp+p) share the quotient q; walk downward so small[q]
// is still the pre-update value when read.
template <typename U>
void sieve_small(std::vector<std::uint64_t>& small, U root, U p, std::uint64_t below_p) {
    for (U q = root / p; q >= p; --q) {
        const std::uint64_t drop = small[q] - below_p;
        const U hi = std::min<U>(root, q * p + p - 1);
        for (U v = q * p; v <= hi; ++v) small[v] -= drop;
    }
}

// Lucy_Hedgehog recurrence. U is the word used for quotients; 32-bit
// arithmetic is used whenever n fits.
template <typename U>
void sieve_quotients(U n, U root, std::vector<std::uint64_t>& small, std::vector<std::uint64_t>& large) {
    // Start with 2 already sieved: candidates in [2, v] are 2 and the odd
    // numbers, ⌊(v+1)/2⌋ of them for v >= 2.
    auto odd_start = [](U v) -> std::uint64_t { return v < 2 ? 0 : (std::uint64_t{v} + 1) / 2; };
    for (U v = 1; v <= root; ++v) small[v] = odd_start(v);
    std::vector<U> key(root + 1);  // key[k] = ⌊n/k⌋
    for (U k = 1; k <= root; ++k) {
        key[k] = n / k;
        large[k] = odd_start(key[k]);
    }

    // Removing multiples of p whose least prime factor is p:
    //   S(v) -= S(v/p) − S(p−1)  for every key v >= p².
    for (U p = 3; p <= root; p += 2) {
        if (small[p] == small[p - 1]) continue;  // p is composite
        const std::uint64_t below_p = small[p - 1];
        const std::uint64_t p2 = std::uint64_t{p} * p;

        const Divider<U> div(p);
        const U k_end = static_cast<U>(std::min<std::uint64_t>(root, n / p2));
        const U k_direct = std::min<U>(k_end, root / p);
        // ⌊⌊n/k⌋/p⌋ = ⌊n/(kp)⌋ is a large key while kp <= root, a small one after.
        for (U k = 1; k <= k_direct; ++k) large[k] -= large[k * p] - below_p;
        for (U k = k_direct + 1; k <= k_end; ++k) large[k] -= small[div(key[k])] - below_p;
        sieve_small(small, root, p, below_p);
    }
}

// π(n) alone. large[k] feeds large[1] only through chains k → k/q for primes
// q | k, so it is needed only while k is squarefree and p < lpf(k). Those k
// stay in `live` (ascending); the rest are dropped once p divides them.
// Entries past k_end are never read from `live` again, only via large[kp].
template <typename U>
std::uint64_t pi_pruned(U n, U root) {
    auto odd_start = [](U v) -> std::uint64_t { return v < 2 ? 0 : (std::uint64_t{v} + 1) / 2; };
    std::vector<std::uint64_t> small(root + 1), large(root + 1);
    std::vector<U> key(root + 1), live;
    live.reserve(root / 2 + 1);
    for (U v = 1; v <= root; ++v) small[v] = odd_start(v);
    for (U k = 1; k <= root; ++k) {
        key[k] = n / k;
        large[k] = odd_start(key[k]);
        if (k % 2 == 1) live.push_back(k);
    }

    for (U p = 3; p <= root; p += 2) {
        if (small[p] == small[p - 1]) continue;
        const std::uint64_t below_p = small[p - 1];
        const std::uint64_t p2 = std::uint64_t{p} * p;
        const Divider<U> div(p);
        const U k_end = static_cast<U>(std::min<std::uint64_t>(root, n / p2));
        const U k_direct = std::min<U>(k_end, root / p);

        // k_end never grows, so entries past it are finished and can go.
        std::size_t kept = 0;
        for (const U k : live) {
            if (k > k_end) break;
            if (div(k) * p == k) continue;
            large[k] -= (k <= k_direct ? large[k * p] : small[div(key[k])]) - below_p;
            live[kept++] = k;
        }
        live.resize(kept);
        sieve_small(small, root, p, below_p);
    }
    return large[1];
}

}  // namespace

PhiTable::PhiTable(std::uint64_t n) : n_(n), root_(floor_sqrt(n)) {
    small_.assign(root_ + 1, 0);
    large_.assign(root_ + 1, 0);
    if (root_ == 0) return;
    if (n <= 0xffffffffULL) {
        sieve_quotients<std::uint32_t>(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(root_), small_,
                                       large_);
    } else {
        sieve_quotients<std::uint64_t>(n, root_, small_, large_);
    }
}

std::uint64_t PhiTable::count_at(std::uint64_t v) const {
    if (v <= root_) return small_[v];
    const std::uint64_t k = n_ / v;
    if (k == 0 || k > root_ || n_ / k != v) {
        throw Error(ErrorKind::Domain, fmt::format("{} is not a key of the quotient table for n={}", v, n_));
    }
    return large_[k];
}

std::uint64_t pi(std::uint64_t n) {
    if (n < 2) return 0;
    if (n < 4) return n - 1;
    const std::uint64_t root = floor_sqrt(n);
    if (n <= 0xffffffffULL) {
        return pi_pruned<std::uint32_t>(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(root));
    }
    return pi_pruned<std::uint64_t>(n, root);
}

std::uint64_t count_in_range_oracle(std::uint64_t x) {
    if (x > kMaxX) {
        throw Error(ErrorKind::RangeTooLarge, fmt::format("x={} exceeds the supported maximum {}", x, kMaxX));
    }
    if (x < 2) return 0;
    return pi(x * x) - pi(x - 1);
}

}  // namespace primerange
