#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace robin {

/// Cap on how many n-subsets the graph builder tests. An unset max_subsets
/// means every subset is enumerated.
struct SubsetBudget {
  std::optional<std::uint64_t> max_subsets;
  std::uint64_t rng_seed = 0;

  static SubsetBudget unlimited() { return {}; }

  /// Throws std::invalid_argument when max_subsets == 0.
  static SubsetBudget bounded(std::uint64_t max_subsets, std::uint64_t rng_seed = 0);
};

/// Default cap: exhaustive up to 10^7 subsets, sampled beyond.
inline constexpr std::uint64_t kDefaultMaxSubsets = 10'000'000;

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// The n-subsets of {0, ..., N-1} to test. Exhaustive enumerations visit all
/// C(N, n) subsets in lexicographic order; sampled ones hold max_subsets
/// distinct subsets drawn uniformly without replacement, also visited in
/// lexicographic order. Iteration can be split into index ranges so workers
/// can share one enumeration.
class SubsetEnumeration {
 public:
  using Visitor = std::span<const std::uint32_t>;

  std::uint64_t size() const { return count_; }
  std::size_t arity() const { return arity_; }
  std::size_t universe() const { return universe_; }
  bool sampled() const { return sampled_; }

  /// Visits subsets [begin, end) of the enumeration order.
  template <typename F>
  void for_each_in_range(std::uint64_t begin, std::uint64_t end, F&& visit) const {
    if (begin >= end) return;
    std::vector<std::uint32_t> subset(arity_);
    if (sampled_) {
      for (std::uint64_t r = begin; r < end; ++r) {
        unpack(keys_[r], subset);
        visit(std::span<const std::uint32_t>(subset));
      }
      return;
    }
    unrank(begin, subset);
    for (std::uint64_t r = begin; r < end; ++r) {
      visit(std::span<const std::uint32_t>(subset));
      advance(subset);
    }
  }

  template <typename F>
  void for_each(F&& visit) const {
    for_each_in_range(0, count_, std::forward<F>(visit));
  }

  std::vector<std::vector<std::uint32_t>> collect() const;

 private:
  friend SubsetEnumeration enumerate_subsets(std::size_t, std::size_t, const SubsetBudget&);

  void unrank(std::uint64_t rank, std::vector<std::uint32_t>& out) const;
  void advance(std::vector<std::uint32_t>& subset) const;
  void unpack(std::uint64_t key, std::vector<std::uint32_t>& out) const;

  std::size_t universe_ = 0;
  std::size_t arity_ = 0;
  std::uint64_t count_ = 0;
  bool sampled_ = false;
  std::vector<std::uint64_t> keys_;  // sampled subsets, packed and sorted
};

/// Requires 1 <= n <= N. A bounded budget smaller than C(N, n) switches to
/// seeded sampling; sampling supports n <= 4 and N < 2^(64/n).
SubsetEnumeration enumerate_subsets(std::size_t universe, std::size_t arity,
                                    const SubsetBudget& budget);

}  // namespace robin
