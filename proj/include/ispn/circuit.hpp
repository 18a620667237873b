#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "ispn/scm.hpp"

namespace ispn {

enum class NodeKind : std::uint8_t { Sum, Product, Leaf };

// One circuit node. Children are node ids and must precede the node itself
// (nodes are stored in topological order). `slot` indexes parameters: sum
// nodes own weight slots [slot, slot + children.size()), leaves own the
// (mu, sigma) pair at [2*slot, 2*slot + 2).
struct Node {
  NodeKind kind = NodeKind::Leaf;
  int var = -1;
  int slot = -1;
  std::vector<int> children;
};

// Affine standardization of a variable: z = (x - center) / halfwidth.
struct VarTransform {
  double center = 0.0;
  double halfwidth = 1.0;
};

enum class Violation : std::uint8_t {
  Acyclicity,       // child id out of range or >= parent id
  Arity,            // leaf with children / inner node without / bad var
  Completeness,     // sum children with differing scopes
  Decomposability,  // product children with overlapping scopes
  ScopeRecursion,   // stored scope table disagrees with recomputation
  SlotCoverage,     // parameter slots out of range, overlapping, or gappy
};

std::string violation_name(Violation v);

struct ValidationReport {
  struct Item {
    Violation kind;
    int node;
  };
  std::vector<Item> items;
  bool ok() const { return items.empty(); }
  bool has(Violation v) const;
};

// Sums sharing one child list are evaluated together: one max shift, one
// exp per child, then a weight-matrix/vector product. A chunk marks a run of
// children that is exactly another group's member list, letting the linear
// d-values flow source-to-consumer without leaving linear space.
struct SumGroup {
  std::vector<int> members;
  std::vector<int> children;
  struct Chunk {
    int source_group = -1;  // -1: literal children
    int begin = 0;
    int len = 0;
  };
  std::vector<Chunk> chunks;
  bool materialize = false;  // member log-values are needed individually
  int trigger = -1;          // smallest member id; forward evaluates here
  int e_offset = 0;          // offsets into flat workspace arrays
  int d_offset = 0;
};

class CircuitStructure {
 public:
  CircuitStructure() = default;
  // Takes ownership of nodes; computes scopes, slot totals, and sum groups.
  // Throws InvalidCircuit on malformed indices (use validate() for the
  // semantic checks on possibly-corrupted structures).
  CircuitStructure(int num_vars, std::vector<Node> nodes, int root,
                   std::vector<VarTransform> transforms);

  int num_vars() const { return num_vars_; }
  int root() const { return root_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<VarTransform>& transforms() const { return transforms_; }
  int num_sum_weights() const { return num_sum_weights_; }
  int num_leaf_params() const { return num_leaf_params_; }
  int num_parameters() const { return num_sum_weights_ + num_leaf_params_; }
  int num_leaves() const { return num_leaf_params_ / 2; }

  const std::vector<std::uint64_t>& scopes() const { return scopes_; }
  const std::vector<SumGroup>& groups() const { return groups_; }
  int group_of(int node) const { return group_of_[node]; }
  int total_group_children() const { return total_group_children_; }

  // Semantic checks; never throws, reports the first offending node per
  // category occurrence.
  ValidationReport validate() const;

  nlohmann::json to_json() const;
  static CircuitStructure from_json(const nlohmann::json& j);
  // FNV-1a over the canonical serialization.
  std::uint64_t hash() const;

  // Test hook: direct access to the stored scope table (corruption tests).
  std::vector<std::uint64_t>& mutable_scopes() { return scopes_; }
  std::vector<Node>& mutable_nodes() { return nodes_; }

 private:
  void finalize();

  int num_vars_ = 0;
  int root_ = -1;
  std::vector<Node> nodes_;
  std::vector<VarTransform> transforms_;
  std::vector<std::uint64_t> scopes_;
  std::vector<SumGroup> groups_;
  std::vector<int> group_of_;
  int num_sum_weights_ = 0;
  int num_leaf_params_ = 0;
  int total_group_children_ = 0;
};

// Random tensorized construction: per repetition, a seeded permutation of the
// variables is split in half `depth` times; leaf regions hold
// `leaves_per_var` Gaussian inputs per variable, inner regions
// `sums_per_region` mixtures over the cross products of their child regions,
// and one root sum mixes all repetitions.
struct RatConfig {
  int repetitions = 1;
  int sums_per_region = 1;
  int leaves_per_var = 1;
  int depth = 1;
  std::uint64_t seed = 0;

  bool operator==(const RatConfig&) const = default;
};

VarTransform transform_for(const Domain& d);

CircuitStructure build_rat(const RatConfig& cfg, const std::vector<Domain>& domains);

}  // namespace ispn
