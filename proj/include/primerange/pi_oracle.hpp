#pragma once

#include <cstdint>
#include <vector>

namespace primerange {

// Running Legendre-style counts over the distinct values of ⌊n/k⌋.
// After sieving every prime p <= √n, count_at(v) == π(v) for each key v.
class PhiTable {
   public:
    explicit PhiTable(std::uint64_t n);

    std::uint64_t n() const noexcept { return n_; }
    std::size_t key_count() const noexcept { return small_.size() + large_.size(); }

    // Only defined for keys of the table: v == ⌊n/k⌋ for some k >= 1.
    std::uint64_t count_at(std::uint64_t v) const;

   private:
    std::uint64_t& slot(std::uint64_t v);

    std::uint64_t n_;
    std::uint64_t root_;
    std::vector<std::uint64_t> small_;  // small_[v]     for v <= root
    std::vector<std::uint64_t> large_;  // large_[k]  <-> v = ⌊n/k⌋ for k <= root, v > root
};

// Exact π(n) in O(n^{3/4}) time and O(√n) space.
std::uint64_t pi(std::uint64_t n);

// π(x²) − π(x−1) through the combinatorial route.
std::uint64_t count_in_range_oracle(std::uint64_t x);

}  // namespace primerange
