#include "robin/subsets.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace robin {

SubsetBudget SubsetBudget::bounded(std::uint64_t max_subsets, std::uint64_t rng_seed) {
  if (max_subsets == 0) throw std::invalid_argument("subset budget must be at least 1");
  return SubsetBudget{max_subsets, rng_seed};
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i is exact at every step; reduce first to delay overflow.
    const std::uint64_t num = n - k + i;
    const std::uint64_t g = std::gcd(result, i);
    const std::uint64_t r = result / g;
    const std::uint64_t d = i / g;
    const std::uint64_t m = num / d;  // exact: d divides r * num and gcd(r, d) == 1
    if (r != 0 && m > kMax / r) return kMax;
    result = r * m;
  }
  return result;
}

void SubsetEnumeration::unrank(std::uint64_t rank, std::vector<std::uint32_t>& out) const {
  std::uint32_t v = 0;
  for (std::size_t pos = 0; pos < arity_; ++pos) {
    while (true) {
      const std::uint64_t with_v = binomial(universe_ - 1 - v, arity_ - 1 - pos);
      if (rank < with_v) break;
      rank -= with_v;
      ++v;
    }
    out[pos] = v++;
  }
}

void SubsetEnumeration::advance(std::vector<std::uint32_t>& subset) const {
  const auto n = static_cast<std::uint32_t>(universe_);
  const auto k = static_cast<std::uint32_t>(arity_);
  std::uint32_t i = k;
  while (i > 0) {
    --i;
    if (subset[i] < n - k + i) {
      ++subset[i];
      for (std::uint32_t j = i + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
      return;
    }
  }
}

void SubsetEnumeration::unpack(std::uint64_t key, std::vector<std::uint32_t>& out) const {
  const unsigned bits = 64 / static_cast<unsigned>(arity_);
  const std::uint64_t mask = bits == 64 ? ~0ULL : ((1ULL << bits) - 1);
  for (std::size_t pos = arity_; pos-- > 0;) {
    out[pos] = static_cast<std::uint32_t>(key & mask);
    key = bits == 64 ? 0 : key >> bits;
  }
}

std::vector<std::vector<std::uint32_t>> SubsetEnumeration::collect() const {
  std::vector<std::vector<std::uint32_t>> all;
  all.reserve(count_);
  for_each([&](std::span<const std::uint32_t> s) { all.emplace_back(s.begin(), s.end()); });
  return all;
}

SubsetEnumeration enumerate_subsets(std::size_t universe, std::size_t arity,
                                    const SubsetBudget& budget) {
  if (arity == 0 || arity > universe) {
    throw std::invalid_argument("subset arity must satisfy 1 <= n <= N");
  }
  SubsetEnumeration e;
  e.universe_ = universe;
  e.arity_ = arity;
  const std::uint64_t total = binomial(universe, arity);
  if (!budget.max_subsets || *budget.max_subsets >= total) {
    e.count_ = total;
    return e;
  }

  const unsigned bits = 64 / static_cast<unsigned>(arity);
  if (arity > 4 || (bits < 64 && universe >= (1ULL << bits))) {
    throw std::invalid_argument("subset sampling supports arity <= 4 and N < 2^(64/n)");
  }
  const std::uint64_t want = *budget.max_subsets;
  std::mt19937_64 rng(budget.rng_seed);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(universe - 1));
  std::vector<std::uint32_t> draw(arity);

  // Draw, dedupe, top up. The procedure is symmetric in the subsets, so the
  // final set is a uniform sample without replacement.
  std::vector<std::uint64_t> keys;
  keys.reserve(want);
  while (keys.size() < want) {
    const std::uint64_t missing = want - keys.size();
    for (std::uint64_t d = 0; d < missing; ++d) {
      for (std::size_t pos = 0; pos < arity; ++pos) {
        std::uint32_t v;
        do {
          v = pick(rng);
        } while (std::find(draw.begin(), draw.begin() + pos, v) != draw.begin() + pos);
        draw[pos] = v;
      }
      std::sort(draw.begin(), draw.end());
      std::uint64_t key = 0;
      for (auto v : draw) key = (bits == 64 ? 0 : key << bits) | v;
      keys.push_back(key);
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  }
  e.keys_ = std::move(keys);
  e.count_ = want;
  e.sampled_ = true;
  return e;
}

}  // namespace robin
