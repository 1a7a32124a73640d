#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "vote_diffuse/opinion.hpp"

namespace vote_diffuse {

/// Disjoint classes covering [m]. Each class is sorted; classes are ordered
/// by their smallest member.
using Partition = std::vector<std::vector<Agent>>;

/// Undirected multigraph on agents [m], stored as pair -> occurrence count.
class AgentGraph {
public:
  explicit AgentGraph(std::size_t agents) : agents_(agents) {}

  void add(PairEvent edge, std::uint64_t count = 1);

  std::size_t agents() const noexcept { return agents_; }
  std::uint64_t count(PairEvent edge) const;
  bool has_edge(PairEvent edge) const { return count(edge) > 0; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::map<PairEvent, std::uint64_t>& edges() const noexcept { return edges_; }

  /// Keeps edges whose count is at least `min_count`.
  AgentGraph thresholded(std::uint64_t min_count) const;

  bool operator==(const AgentGraph&) const = default;

private:
  std::size_t agents_;
  std::map<PairEvent, std::uint64_t> edges_;
};

class DisjointSets {
public:
  explicit DisjointSets(std::size_t size);

  std::size_t find(std::size_t x);
  bool unite(std::size_t x, std::size_t y);
  std::size_t components() const noexcept { return components_; }

  Partition partition();

private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
  std::size_t components_;
};

/// Isolated agents come out as singleton classes.
Partition connected_components(const AgentGraph& graph);

bool is_connected(const AgentGraph& graph);

// Class index of every agent under `partition`.
std::vector<std::size_t> class_of(const Partition& partition, std::size_t agents);

}  // namespace vote_diffuse
