#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "robin/compat_graph.hpp"

namespace robin {

struct CoreDecomposition {
  std::vector<std::uint32_t> core_number;
  std::uint32_t degeneracy = 0;
  /// Vertices in peeling order (non-decreasing core number): a degeneracy ordering.
  std::vector<std::uint32_t> peel_order;
};

enum class SelectionMode { kMaxClique, kMaxKCore, kNone };

std::string_view mode_name(SelectionMode mode);  // clique, kcore, none

/// Throws InputError for an unknown name.
SelectionMode parse_mode_name(std::string_view name);

struct InlierSelection {
  std::vector<std::size_t> vertices;  // sorted ascending
  SelectionMode mode = SelectionMode::kNone;
  /// False when the clique search ran out of time and returned its best so far.
  bool exact = true;
  /// omega(G), set for exact max-clique selections.
  std::optional<std::size_t> clique_number;
};

/// Bucket peeling (Batagelj-Zaversnik), O(V + E).
CoreDecomposition core_decomposition(const CompatGraph& g);

/// The k*-core: every vertex whose core number equals the degeneracy.
InlierSelection max_kcore(const CompatGraph& g);

using TimeBudget = std::optional<std::chrono::milliseconds>;

/// Exact maximum clique by branch and bound over a degeneracy ordering with
/// greedy-coloring bounds. Among several maximum cliques the lexicographically
/// smallest vertex set is returned. With a time budget the search may stop
/// early and report exact = false.
InlierSelection max_clique(const CompatGraph& g, TimeBudget time_budget = std::nullopt);

/// Exhaustive search over all vertex subsets, for graphs with at most 25
/// vertices. Same tie-break as max_clique. Throws GraphTooLarge beyond that.
InlierSelection brute_force_max_clique(const CompatGraph& g);

}  // namespace robin
