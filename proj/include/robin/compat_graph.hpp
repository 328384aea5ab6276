#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "robin/measurements.hpp"
#include "robin/subsets.hpp"

namespace robin {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

/// Undirected simple graph, one vertex per measurement. Adjacency is frozen
/// into sorted neighbor arrays (CSR layout) at construction.
class CompatGraph {
 public:
  CompatGraph() = default;

  /// Edges may come in any order and orientation; duplicates are merged.
  /// Throws std::invalid_argument on self-loops or out-of-range endpoints.
  CompatGraph(std::size_t n_vertices, std::vector<Edge> edges);

  std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return neighbors_.size() / 2; }

  std::span<const std::uint32_t> neighbors(std::size_t v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::size_t degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(std::size_t i, std::size_t j) const;

  /// Edges (i, j) with i < j in lexicographic order.
  std::vector<Edge> edges() const;

  /// True when the builder tested a random sample of subsets rather than all.
  bool sampled() const { return sampled_; }
  void set_sampled(bool sampled) { sampled_ = sampled; }

  friend bool operator==(const CompatGraph& a, const CompatGraph& b) {
    return a.offsets_ == b.offsets_ && a.neighbors_ == b.neighbors_;
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> neighbors_;
  bool sampled_ = false;
};

/// Builds the compatibility graph: every n-subset from the enumeration that
/// passes its compatibility test contributes edges between all its members
/// (a pair is adjacent if it shares at least one passing subset).
/// Throws TooFewMeasurements when N is below the invariant arity.
CompatGraph build_graph(const MeasurementSet& measurements, const SubsetBudget& budget);

/// "i j" per line, 0-indexed, i < j.
void write_edge_list(std::ostream& out, const CompatGraph& g);

/// Reads "i j" lines (blank lines and '#' comments skipped). The vertex count
/// is max index + 1 unless n_vertices is given. Throws InputError naming the line.
CompatGraph read_edge_list(std::istream& in, std::size_t n_vertices = 0);

}  // namespace robin
