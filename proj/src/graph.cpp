#include "ispn/graph.hpp"

#include <algorithm>

#include "ispn/errors.hpp"

namespace ispn {

CausalGraph::CausalGraph(std::vector<std::string> names, std::vector<std::uint8_t> adj)
    : names_(std::move(names)), adj_(std::move(adj)) {
  const std::size_t n = names_.size();
  if (adj_.size() != n * n)
    throw ShapeMismatch("adjacency must be n*n, got " + std::to_string(adj_.size()));
  for (std::size_t i = 0; i < n; ++i)
    if (adj_[i * n + i] != 0) throw CycleError("self loop at " + names_[i]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (names_[i] == names_[j]) throw Error("duplicate variable name " + names_[i]);
  topological_order();  // throws CycleError on cycles
}

void CausalGraph::set_edge(int from, int to, bool present) {
  adj_[static_cast<std::size_t>(from) * names_.size() + to] = present ? 1 : 0;
}

int CausalGraph::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  throw UnknownVariable("no variable named '" + name + "'");
}

std::vector<int> CausalGraph::parents(int v) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (edge(i, v)) out.push_back(i);
  return out;
}

std::vector<int> CausalGraph::children(int v) const {
  std::vector<int> out;
  for (int j = 0; j < size(); ++j)
    if (edge(v, j)) out.push_back(j);
  return out;
}

std::vector<int> CausalGraph::topological_order() const {
  const int n = size();
  std::vector<int> indeg(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (edge(i, j)) ++indeg[j];
  std::vector<int> ready, order;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    // Smallest index first keeps the order deterministic.
    auto it = std::min_element(ready.begin(), ready.end());
    int v = *it;
    ready.erase(it);
    order.push_back(v);
    for (int j = 0; j < n; ++j)
      if (edge(v, j) && --indeg[j] == 0) ready.push_back(j);
  }
  if (static_cast<int>(order.size()) != n) throw CycleError("graph contains a cycle");
  return order;
}

std::vector<int> CausalGraph::ancestors(int v) const {
  std::vector<bool> seen(size(), false);
  std::vector<int> stack = parents(v);
  std::vector<int> out;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    if (seen[u]) continue;
    seen[u] = true;
    out.push_back(u);
    for (int p : parents(u)) stack.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

CausalGraph CausalGraph::mutilated(const std::vector<int>& targets) const {
  CausalGraph g = *this;
  for (int t : targets) {
    if (t < 0 || t >= size()) throw UnknownVariable("mutilate: bad index " + std::to_string(t));
    for (int i = 0; i < size(); ++i) g.set_edge(i, t, false);
  }
  return g;
}

}  // namespace ispn
