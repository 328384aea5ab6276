#include <algorithm>
#include <bit>
#include <chrono>

#include "robin/errors.hpp"
#include "robin/graph_solvers.hpp"

namespace robin {

namespace {

class Deadline {
 public:
  explicit Deadline(TimeBudget budget) {
    if (budget) end_ = std::chrono::steady_clock::now() + *budget;
  }

  bool expired() {
    if (!end_ || hit_) return hit_;
    if ((++calls_ & 255) == 0) hit_ = std::chrono::steady_clock::now() >= *end_;
    return hit_;
  }

 private:
  std::optional<std::chrono::steady_clock::time_point> end_;
  std::uint64_t calls_ = 0;
  bool hit_ = false;
};

/// Bit-matrix adjacency over a candidate set, local ids 0..m-1 in the order
/// the global ids were given.
class LocalGraph {
 public:
  LocalGraph(const CompatGraph& g, const std::vector<std::uint32_t>& vertices)
      : global_(vertices), words_((vertices.size() + 63) / 64), bits_(vertices.size() * words_, 0) {
    for (std::size_t a = 0; a < vertices.size(); ++a) {
      const auto row = g.neighbors(vertices[a]);
      for (std::size_t b = 0; b < vertices.size(); ++b) {
        if (b != a && std::binary_search(row.begin(), row.end(), vertices[b])) {
          bits_[a * words_ + b / 64] |= 1ULL << (b % 64);
        }
      }
    }
  }

  std::size_t size() const { return global_.size(); }
  std::uint32_t global(int local) const { return global_[static_cast<std::size_t>(local)]; }
  bool adjacent(int a, int b) const {
    return (bits_[static_cast<std::size_t>(a) * words_ + static_cast<std::size_t>(b) / 64] >>
            (b % 64)) & 1ULL;
  }
  const std::uint64_t* row(int a) const { return bits_.data() + static_cast<std::size_t>(a) * words_; }
  std::size_t words() const { return words_; }

 private:
  std::vector<std::uint32_t> global_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

/// Greedy sequential coloring of `candidates` in the given order. Writes the
/// vertices sorted by color into `order` and their colors (1-based) into
/// `colors`; returns the number of colors, an upper bound on any clique.
int color_sort(const LocalGraph& lg, const std::vector<int>& candidates, std::vector<int>& order,
               std::vector<int>& colors) {
  std::vector<std::vector<int>> classes;
  std::vector<std::vector<std::uint64_t>> class_bits;
  for (const int v : candidates) {
    const std::uint64_t* adj = lg.row(v);
    std::size_t c = 0;
    for (; c < classes.size(); ++c) {
      bool conflict = false;
      for (std::size_t w = 0; w < lg.words() && !conflict; ++w) conflict = (adj[w] & class_bits[c][w]) != 0;
      if (!conflict) break;
    }
    if (c == classes.size()) {
      classes.emplace_back();
      class_bits.emplace_back(lg.words(), 0);
    }
    classes[c].push_back(v);
    class_bits[c][static_cast<std::size_t>(v) / 64] |= 1ULL << (v % 64);
  }
  order.clear();
  colors.clear();
  for (std::size_t c = 0; c < classes.size(); ++c) {
    for (const int v : classes[c]) {
      order.push_back(v);
      colors.push_back(static_cast<int>(c) + 1);
    }
  }
  return static_cast<int>(classes.size());
}

/// Finds omega(G) and one maximum clique.
class CliqueSearch {
 public:
  CliqueSearch(const CompatGraph& g, const CoreDecomposition& cores, Deadline& deadline)
      : g_(g), cores_(cores), deadline_(deadline) {}

  void run() {
    const std::size_t n = g_.vertex_count();
    if (n == 0) return;
    std::vector<std::size_t> position(n);
    for (std::size_t i = 0; i < n; ++i) position[cores_.peel_order[i]] = i;

    seed_with_greedy_clique();

    // A clique is found from its earliest-peeled member, whose later
    // neighbors number at most its core number.
    for (std::size_t i = n; i-- > 0;) {
      if (aborted_) return;
      const std::uint32_t v = cores_.peel_order[i];
      if (cores_.core_number[v] + 1 <= best_.size()) continue;
      std::vector<std::uint32_t> later;
      for (const std::uint32_t u : g_.neighbors(v)) {
        if (position[u] > i && cores_.core_number[u] >= best_.size()) later.push_back(u);
      }
      if (later.size() + 1 <= best_.size()) continue;
      const LocalGraph lg(g_, later);
      std::vector<int> candidates(later.size());
      for (std::size_t k = 0; k < later.size(); ++k) candidates[k] = static_cast<int>(k);
      root_ = v;
      expand(lg, candidates);
    }
  }

  const std::vector<std::uint32_t>& best() const { return best_; }
  bool aborted() const { return aborted_; }

 private:
  void seed_with_greedy_clique() {
    // Start from the highest-core vertex and grow greedily by core number.
    const std::uint32_t start = cores_.peel_order.back();
    std::vector<std::uint32_t> clique{start};
    std::vector<std::uint32_t> pool(g_.neighbors(start).begin(), g_.neighbors(start).end());
    while (!pool.empty()) {
      const auto it = std::max_element(pool.begin(), pool.end(), [&](auto a, auto b) {
        return cores_.core_number[a] < cores_.core_number[b];
      });
      const std::uint32_t u = *it;
      clique.push_back(u);
      std::erase_if(pool, [&](std::uint32_t w) { return w == u || !g_.has_edge(u, w); });
    }
    best_ = std::move(clique);
  }

  void expand(const LocalGraph& lg, const std::vector<int>& candidates) {
    if (deadline_.expired()) {
      aborted_ = true;
      return;
    }
    std::vector<int> order;
    std::vector<int> colors;
    color_sort(lg, candidates, order, colors);
    for (std::size_t i = order.size(); i-- > 0;) {
      // +1 for the root vertex.
      if (stack_.size() + 1 + static_cast<std::size_t>(colors[i]) <= best_.size()) return;
      const int w = order[i];
      std::vector<int> next;
      for (std::size_t j = 0; j < i; ++j) {
        if (lg.adjacent(w, order[j])) next.push_back(order[j]);
      }
      stack_.push_back(lg.global(w));
      if (next.empty()) {
        if (stack_.size() + 1 > best_.size()) {
          best_ = stack_;
          best_.push_back(root_);
        }
      } else {
        expand(lg, next);
      }
      stack_.pop_back();
      if (aborted_) return;
    }
  }

  const CompatGraph& g_;
  const CoreDecomposition& cores_;
  Deadline& deadline_;
  std::uint32_t root_ = 0;
  std::vector<std::uint32_t> stack_;
  std::vector<std::uint32_t> best_;
  bool aborted_ = false;
};

/// Depth-first search over increasing vertex sequences; the first clique of
/// the target size it meets is the lexicographically smallest one.
class LexCliqueSearch {
 public:
  LexCliqueSearch(const CompatGraph& g, const CoreDecomposition& cores, Deadline& deadline)
      : g_(g), cores_(cores), deadline_(deadline) {}

  std::optional<std::vector<std::uint32_t>> find(std::size_t target) {
    if (target == 0) return std::vector<std::uint32_t>{};
    const std::size_t need = target - 1;
    for (std::size_t v = 0; v < g_.vertex_count(); ++v) {
      if (cores_.core_number[v] < need) continue;
      std::vector<std::uint32_t> later;
      for (const std::uint32_t u : g_.neighbors(v)) {
        if (u > v && cores_.core_number[u] >= need) later.push_back(u);
      }
      if (later.size() < need) continue;
      const LocalGraph lg(g_, later);
      std::vector<int> candidates(later.size());
      for (std::size_t k = 0; k < later.size(); ++k) candidates[k] = static_cast<int>(k);
      std::vector<std::uint32_t> chosen{static_cast<std::uint32_t>(v)};
      if (search(lg, candidates, need, chosen)) return chosen;
      if (aborted_) return std::nullopt;
    }
    return std::nullopt;
  }

  bool aborted() const { return aborted_; }

 private:
  bool search(const LocalGraph& lg, const std::vector<int>& candidates, std::size_t need,
              std::vector<std::uint32_t>& chosen) {
    if (need == 0) return true;
    if (candidates.size() < need) return false;
    if (deadline_.expired()) {
      aborted_ = true;
      return false;
    }
    std::vector<int> order;
    std::vector<int> colors;
    if (static_cast<std::size_t>(color_sort(lg, candidates, order, colors)) < need) return false;
    for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
      if (candidates.size() - idx < need) return false;
      const int u = candidates[idx];
      std::vector<int> next;
      for (std::size_t j = idx + 1; j < candidates.size(); ++j) {
        if (lg.adjacent(u, candidates[j])) next.push_back(candidates[j]);
      }
      chosen.push_back(lg.global(u));
      if (search(lg, next, need - 1, chosen)) return true;
      chosen.pop_back();
      if (aborted_) return false;
    }
    return false;
  }

  const CompatGraph& g_;
  const CoreDecomposition& cores_;
  Deadline& deadline_;
  bool aborted_ = false;
};

InlierSelection to_selection(const std::vector<std::uint32_t>& clique, bool exact) {
  InlierSelection sel;
  sel.mode = SelectionMode::kMaxClique;
  sel.vertices.assign(clique.begin(), clique.end());
  std::sort(sel.vertices.begin(), sel.vertices.end());
  sel.exact = exact;
  if (exact) sel.clique_number = sel.vertices.size();
  return sel;
}

}  // namespace

InlierSelection max_clique(const CompatGraph& g, TimeBudget time_budget) {
  const CoreDecomposition cores = core_decomposition(g);
  Deadline deadline(time_budget);

  CliqueSearch search(g, cores, deadline);
  search.run();
  if (search.aborted()) return to_selection(search.best(), false);

  LexCliqueSearch lex(g, cores, deadline);
  const auto smallest = lex.find(search.best().size());
  if (!smallest) return to_selection(search.best(), false);
  return to_selection(*smallest, true);
}

InlierSelection brute_force_max_clique(const CompatGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n > 25) throw GraphTooLarge("brute-force clique search is limited to 25 vertices");
  std::vector<std::uint32_t> adj(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto u : g.neighbors(v)) adj[v] |= 1u << u;
  }

  auto members = [](std::uint32_t mask) {
    std::vector<std::uint32_t> out;
    for (; mask != 0; mask &= mask - 1) out.push_back(static_cast<std::uint32_t>(std::countr_zero(mask)));
    return out;
  };

  int best_size = 0;
  std::vector<std::uint32_t> best_members;
  const std::uint32_t limit = n == 0 ? 1u : (1u << n);
  for (std::uint32_t mask = 1; mask < limit; ++mask) {
    const int size = std::popcount(mask);
    if (size < best_size) continue;
    bool clique = true;
    for (std::uint32_t rest = mask; rest != 0 && clique; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      clique = ((adj[static_cast<std::size_t>(v)] | (1u << v)) & mask) == mask;
    }
    if (!clique) continue;
    auto current = members(mask);
    if (size > best_size || current < best_members) {
      best_size = size;
      best_members = std::move(current);
    }
  }
  return to_selection(best_members, true);
}

}  // namespace robin
