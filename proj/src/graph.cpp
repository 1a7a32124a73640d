#include "vote_diffuse/graph.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "vote_diffuse/errors.hpp"

namespace vote_diffuse {

void AgentGraph::add(PairEvent edge, std::uint64_t count) {
  if (edge.b() >= agents_) {
    throw DimensionError("edge agent " + std::to_string(edge.b() + 1) + " outside [1, " + std::to_string(agents_) +
                         "]");
  }
  if (count == 0) return;
  edges_[edge] += count;
}

std::uint64_t AgentGraph::count(PairEvent edge) const {
  const auto it = edges_.find(edge);
  return it == edges_.end() ? 0 : it->second;
}

AgentGraph AgentGraph::thresholded(std::uint64_t min_count) const {
  AgentGraph out(agents_);
  for (const auto& [edge, c] : edges_) {
    if (c >= min_count) out.edges_.emplace(edge, c);
  }
  return out;
}

DisjointSets::DisjointSets(std::size_t size) : parent_(size), rank_(size, 0), components_(size) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSets::find(std::size_t x) {
  std::size_t root = x;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[x] != root) {
    const std::size_t next = parent_[x];
    parent_[x] = root;
    x = next;
  }
  return root;
}

bool DisjointSets::unite(std::size_t x, std::size_t y) {
  x = find(x);
  y = find(y);
  if (x == y) return false;
  if (rank_[x] < rank_[y]) std::swap(x, y);
  parent_[y] = x;
  if (rank_[x] == rank_[y]) ++rank_[x];
  --components_;
  return true;
}

Partition DisjointSets::partition() {
  const std::size_t size = parent_.size();
  std::vector<std::size_t> slot(size, size);
  Partition out;
  // Ascending scan makes each class sorted and orders classes by smallest member.
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t root = find(i);
    if (slot[root] == size) {
      slot[root] = out.size();
      out.emplace_back();
    }
    out[slot[root]].push_back(static_cast<Agent>(i));
  }
  return out;
}

Partition connected_components(const AgentGraph& graph) {
  DisjointSets sets(graph.agents());
  for (const auto& [edge, count] : graph.edges()) {
    if (count > 0) sets.unite(edge.a(), edge.b());
  }
  return sets.partition();
}

bool is_connected(const AgentGraph& graph) {
  return connected_components(graph).size() == 1;
}

std::vector<std::size_t> class_of(const Partition& partition, std::size_t agents) {
  std::vector<std::size_t> out(agents, partition.size());
  for (std::size_t c = 0; c < partition.size(); ++c) {
    for (Agent i : partition[c]) {
      if (i >= agents) throw DimensionError("partition member outside agent range");
      out[i] = c;
    }
  }
  if (std::find(out.begin(), out.end(), partition.size()) != out.end()) {
    throw DimensionError("partition does not cover every agent");
  }
  return out;
}

}  // namespace vote_diffuse
