#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ispn {

// Directed acyclic graph over named variables. adj[i*n+j] == 1 means i -> j.
class CausalGraph {
 public:
  CausalGraph() = default;
  CausalGraph(std::vector<std::string> names, std::vector<std::uint8_t> adj);

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::uint8_t>& adjacency() const { return adj_; }

  bool edge(int from, int to) const { return adj_[static_cast<std::size_t>(from) * names_.size() + to] != 0; }
  void set_edge(int from, int to, bool present);

  // Index of a named variable; throws UnknownVariable.
  int index_of(const std::string& name) const;

  std::vector<int> parents(int v) const;
  std::vector<int> children(int v) const;

  // Topological order; throws CycleError if the graph has a cycle.
  std::vector<int> topological_order() const;

  // Ancestors of v (excluding v).
  std::vector<int> ancestors(int v) const;

  // Drop all incoming edges of each listed variable (graph surgery for
  // interventions). Returns the mutilated copy.
  CausalGraph mutilated(const std::vector<int>& targets) const;

  bool operator==(const CausalGraph& other) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::uint8_t> adj_;
};

}  // namespace ispn
