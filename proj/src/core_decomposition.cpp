#include <algorithm>

#include "robin/errors.hpp"
#include "robin/graph_solvers.hpp"

namespace robin {

std::string_view mode_name(SelectionMode mode) {
  switch (mode) {
    case SelectionMode::kMaxClique:
      return "clique";
    case SelectionMode::kMaxKCore:
      return "kcore";
    case SelectionMode::kNone:
      return "none";
  }
  return "unknown";
}

SelectionMode parse_mode_name(std::string_view name) {
  if (name == "clique") return SelectionMode::kMaxClique;
  if (name == "kcore") return SelectionMode::kMaxKCore;
  if (name == "none") return SelectionMode::kNone;
  throw InputError("unknown mode '" + std::string(name) + "' (expected clique, kcore or none)");
}

CoreDecomposition core_decomposition(const CompatGraph& g) {
  const std::size_t n = g.vertex_count();
  CoreDecomposition out;
  out.core_number.assign(n, 0);
  out.peel_order.resize(n);
  if (n == 0) return out;

  std::vector<std::uint32_t> degree(n);
  std::uint32_t max_degree = 0;
  for (std::size_t v = 0; v < n; ++v) {
    degree[v] = static_cast<std::uint32_t>(g.degree(v));
    max_degree = std::max(max_degree, degree[v]);
  }

  // Vertices sorted by current degree; bucket_start[d] is the first slot
  // holding degree d. Decrementing a neighbor swaps it to the front of its
  // bucket and shifts the bucket boundary by one.
  std::vector<std::size_t> bucket_start(max_degree + 2, 0);
  for (std::size_t v = 0; v < n; ++v) ++bucket_start[degree[v] + 1];
  for (std::size_t d = 1; d < bucket_start.size(); ++d) bucket_start[d] += bucket_start[d - 1];
  std::vector<std::uint32_t> order(n);
  std::vector<std::size_t> position(n);
  {
    std::vector<std::size_t> next(bucket_start.begin(), bucket_start.end() - 1);
    for (std::size_t v = 0; v < n; ++v) {
      position[v] = next[degree[v]]++;
      order[position[v]] = static_cast<std::uint32_t>(v);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t v = order[i];
    for (const std::uint32_t u : g.neighbors(v)) {
      if (degree[u] > degree[v]) {
        const std::uint32_t du = degree[u];
        const std::size_t pu = position[u];
        const std::size_t pw = bucket_start[du];
        const std::uint32_t w = order[pw];
        if (u != w) {
          std::swap(order[pu], order[pw]);
          position[u] = pw;
          position[w] = pu;
        }
        ++bucket_start[du];
        --degree[u];
      }
    }
  }

  out.peel_order = std::move(order);
  for (std::size_t v = 0; v < n; ++v) {
    out.core_number[v] = degree[v];
    out.degeneracy = std::max(out.degeneracy, degree[v]);
  }
  return out;
}

InlierSelection max_kcore(const CompatGraph& g) {
  const CoreDecomposition cores = core_decomposition(g);
  InlierSelection sel;
  sel.mode = SelectionMode::kMaxKCore;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (cores.core_number[v] == cores.degeneracy) sel.vertices.push_back(v);
  }
  return sel;
}

}  // namespace robin
