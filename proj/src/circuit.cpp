#include "ispn/circuit.hpp"

#include <algorithm>
#include <map>

#include "ispn/errors.hpp"
#include "ispn/rng.hpp"

namespace ispn {

std::string violation_name(Violation v) {
  switch (v) {
    case Violation::Acyclicity: return "acyclicity";
    case Violation::Arity: return "arity";
    case Violation::Completeness: return "completeness";
    case Violation::Decomposability: return "decomposability";
    case Violation::ScopeRecursion: return "scope-recursion";
    case Violation::SlotCoverage: return "slot-coverage";
  }
  return "?";
}

bool ValidationReport::has(Violation v) const {
  for (const auto& it : items)
    if (it.kind == v) return true;
  return false;
}

CircuitStructure::CircuitStructure(int num_vars, std::vector<Node> nodes, int root,
                                   std::vector<VarTransform> transforms)
    : num_vars_(num_vars), root_(root), nodes_(std::move(nodes)), transforms_(std::move(transforms)) {
  finalize();
}

void CircuitStructure::finalize() {
  const int n = static_cast<int>(nodes_.size());
  if (num_vars_ < 1 || num_vars_ > 64)
    throw InvalidCircuit("circuit supports 1..64 variables, got " + std::to_string(num_vars_));
  if (n == 0 || root_ < 0 || root_ >= n) throw InvalidCircuit("bad root id");
  if (static_cast<int>(transforms_.size()) != num_vars_)
    throw InvalidCircuit("need one transform per variable");
  for (const auto& t : transforms_)
    if (!(t.halfwidth > 0.0)) throw InvalidCircuit("halfwidth must be positive");

  // Structural sanity (hard errors); semantic checks live in validate().
  for (int i = 0; i < n; ++i) {
    const Node& nd = nodes_[i];
    for (int c : nd.children)
      if (c < 0 || c >= i)
        throw InvalidCircuit("node " + std::to_string(i) + " has non-topological child");
    if (nd.kind == NodeKind::Leaf) {
      if (nd.var < 0 || nd.var >= num_vars_)
        throw InvalidCircuit("leaf " + std::to_string(i) + " has bad variable");
      if (!nd.children.empty()) throw InvalidCircuit("leaf with children");
    } else if (nd.children.empty()) {
      throw InvalidCircuit("inner node " + std::to_string(i) + " has no children");
    }
  }

  // Scopes bottom-up.
  scopes_.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    const Node& nd = nodes_[i];
    if (nd.kind == NodeKind::Leaf) {
      scopes_[i] = std::uint64_t{1} << nd.var;
    } else {
      std::uint64_t s = 0;
      for (int c : nd.children) s |= scopes_[c];
      scopes_[i] = s;
    }
  }

  // Parameter totals.
  num_sum_weights_ = 0;
  num_leaf_params_ = 0;
  for (const Node& nd : nodes_) {
    if (nd.kind == NodeKind::Sum) num_sum_weights_ += static_cast<int>(nd.children.size());
    if (nd.kind == NodeKind::Leaf) num_leaf_params_ += 2;
  }

  // Group sums by identical child lists.
  groups_.clear();
  group_of_.assign(n, -1);
  std::map<std::vector<int>, int> by_children;
  for (int i = 0; i < n; ++i) {
    if (nodes_[i].kind != NodeKind::Sum) continue;
    auto [it, fresh] = by_children.try_emplace(nodes_[i].children, static_cast<int>(groups_.size()));
    if (fresh) {
      groups_.emplace_back();
      groups_.back().children = nodes_[i].children;
      groups_.back().trigger = i;
    }
    groups_[it->second].members.push_back(i);
    group_of_[i] = it->second;
  }

  // Chunk analysis: find runs of children equal to a whole other group.
  total_group_children_ = 0;
  int d_total = 0;
  for (auto& g : groups_) {
    g.e_offset = total_group_children_;
    g.d_offset = d_total;
    total_group_children_ += static_cast<int>(g.children.size());
    d_total += static_cast<int>(g.members.size());
    const auto& ch = g.children;
    std::size_t i = 0;
    while (i < ch.size()) {
      int src = ch[i] >= 0 && group_of_[ch[i]] >= 0 ? group_of_[ch[i]] : -1;
      bool matched = false;
      if (src >= 0) {
        const auto& sm = groups_[src].members;
        if (ch[i] == sm[0] && i + sm.size() <= ch.size() &&
            std::equal(sm.begin(), sm.end(), ch.begin() + i)) {
          g.chunks.push_back({src, static_cast<int>(i), static_cast<int>(sm.size())});
          i += sm.size();
          matched = true;
        }
      }
      if (!matched) {
        // literal run
        if (!g.chunks.empty() && g.chunks.back().source_group == -1 &&
            g.chunks.back().begin + g.chunks.back().len == static_cast<int>(i)) {
          ++g.chunks.back().len;
        } else {
          g.chunks.push_back({-1, static_cast<int>(i), 1});
        }
        ++i;
      }
    }
  }

  // The grouped backward pass finalizes a whole group's adjoints at its
  // highest member, so no parent of a member may precede that point.
  for (int p = 0; p < n; ++p)
    for (int c : nodes_[p].children)
      if (group_of_[c] >= 0 && p <= groups_[group_of_[c]].members.back())
        throw InvalidCircuit("sum group interleaved with a parent of node " + std::to_string(c));

  // Materialization: root, product inputs, and literal-chunk sums need
  // their log-values written out.
  auto mark = [&](int node) {
    if (node >= 0 && group_of_[node] >= 0) groups_[group_of_[node]].materialize = true;
  };
  mark(root_);
  for (const Node& nd : nodes_)
    if (nd.kind == NodeKind::Product)
      for (int c : nd.children) mark(c);
  for (const auto& g : groups_)
    for (const auto& ck : g.chunks)
      if (ck.source_group == -1)
        for (int k = ck.begin; k < ck.begin + ck.len; ++k) mark(g.children[k]);
}

ValidationReport CircuitStructure::validate() const {
  ValidationReport rep;
  const int n = static_cast<int>(nodes_.size());
  std::vector<std::uint64_t> scope(n, 0);
  std::vector<bool> broken(n, false);

  auto add = [&](Violation v, int node) { rep.items.push_back({v, node}); };

  for (int i = 0; i < n; ++i) {
    const Node& nd = nodes_[i];
    bool local_ok = true;
    for (int c : nd.children)
      if (c < 0 || c >= i) {
        add(Violation::Acyclicity, i);
        local_ok = false;
        break;
      }
    if (nd.kind == NodeKind::Leaf) {
      if (nd.var < 0 || nd.var >= num_vars_ || !nd.children.empty()) {
        add(Violation::Arity, i);
        local_ok = false;
      }
    } else if (nd.children.empty()) {
      add(Violation::Arity, i);
      local_ok = false;
    }
    if (!local_ok) {
      broken[i] = true;
      continue;
    }
    for (int c : nd.children)
      if (broken[c]) broken[i] = true;
    if (broken[i]) continue;

    if (nd.kind == NodeKind::Leaf) {
      scope[i] = std::uint64_t{1} << nd.var;
    } else {
      std::uint64_t s = 0;
      for (int c : nd.children) s |= scope[c];
      scope[i] = s;
      if (nd.kind == NodeKind::Sum) {
        for (int c : nd.children)
          if (scope[c] != scope[nd.children[0]]) {
            add(Violation::Completeness, i);
            break;
          }
      } else {
        std::uint64_t seen = 0;
        for (int c : nd.children) {
          if (seen & scope[c]) {
            add(Violation::Decomposability, i);
            break;
          }
          seen |= scope[c];
        }
      }
    }
  }

  // Stored scope table must match the recomputation (Eq. 2 recursion).
  if (static_cast<int>(scopes_.size()) != n) {
    add(Violation::ScopeRecursion, -1);
  } else {
    for (int i = 0; i < n; ++i)
      if (!broken[i] && scopes_[i] != scope[i]) {
        add(Violation::ScopeRecursion, i);
        break;
      }
  }

  // Slot coverage: sums partition [0, W), leaves partition [0, L/2).
  {
    std::vector<int> sum_owner(num_sum_weights_, -1);
    std::vector<int> leaf_owner(num_leaf_params_ / 2, -1);
    for (int i = 0; i < n; ++i) {
      const Node& nd = nodes_[i];
      if (broken[i]) continue;
      if (nd.kind == NodeKind::Sum) {
        int k = static_cast<int>(nd.children.size());
        if (nd.slot < 0 || nd.slot + k > num_sum_weights_) {
          add(Violation::SlotCoverage, i);
          continue;
        }
        bool clash = false;
        for (int s = nd.slot; s < nd.slot + k; ++s) {
          if (sum_owner[s] != -1) clash = true;
          sum_owner[s] = i;
        }
        if (clash) add(Violation::SlotCoverage, i);
      } else if (nd.kind == NodeKind::Leaf) {
        if (nd.slot < 0 || nd.slot >= static_cast<int>(leaf_owner.size())) {
          add(Violation::SlotCoverage, i);
          continue;
        }
        if (leaf_owner[nd.slot] != -1) add(Violation::SlotCoverage, i);
        leaf_owner[nd.slot] = i;
      }
    }
  }
  return rep;
}

nlohmann::json CircuitStructure::to_json() const {
  nlohmann::json j;
  j["format"] = "ispn-circuit-v1";
  j["num_vars"] = num_vars_;
  j["root"] = root_;
  nlohmann::json tr = nlohmann::json::array();
  for (const auto& t : transforms_) tr.push_back({{"center", t.center}, {"halfwidth", t.halfwidth}});
  j["transforms"] = tr;
  nlohmann::json ns = nlohmann::json::array();
  for (const Node& nd : nodes_) {
    nlohmann::json e;
    e["kind"] = nd.kind == NodeKind::Sum ? "sum" : nd.kind == NodeKind::Product ? "product" : "leaf";
    if (nd.kind == NodeKind::Leaf) {
      e["var"] = nd.var;
      e["slot"] = nd.slot;
    } else {
      e["children"] = nd.children;
      if (nd.kind == NodeKind::Sum) e["slot"] = nd.slot;
    }
    ns.push_back(e);
  }
  j["nodes"] = ns;
  return j;
}

CircuitStructure CircuitStructure::from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "ispn-circuit-v1") throw FormatError("not an ispn circuit file");
  std::vector<VarTransform> tr;
  for (const auto& t : j.at("transforms"))
    tr.push_back({t.at("center").get<double>(), t.at("halfwidth").get<double>()});
  std::vector<Node> nodes;
  for (const auto& e : j.at("nodes")) {
    Node nd;
    const std::string kind = e.at("kind").get<std::string>();
    if (kind == "sum") nd.kind = NodeKind::Sum;
    else if (kind == "product") nd.kind = NodeKind::Product;
    else if (kind == "leaf") nd.kind = NodeKind::Leaf;
    else throw FormatError("unknown node kind '" + kind + "'");
    if (nd.kind == NodeKind::Leaf) {
      nd.var = e.at("var").get<int>();
      nd.slot = e.at("slot").get<int>();
    } else {
      nd.children = e.at("children").get<std::vector<int>>();
      if (nd.kind == NodeKind::Sum) nd.slot = e.at("slot").get<int>();
    }
    nodes.push_back(std::move(nd));
  }
  return CircuitStructure(j.at("num_vars").get<int>(), std::move(nodes), j.at("root").get<int>(),
                          std::move(tr));
}

std::uint64_t CircuitStructure::hash() const {
  const std::string s = to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

VarTransform transform_for(const Domain& d) {
  if (d.binary) return {0.5, 0.5};
  return {0.5 * (d.lo + d.hi), 0.5 * (d.hi - d.lo)};
}

namespace {

struct RatBuilder {
  const RatConfig& cfg;
  std::vector<Node> nodes;
  int next_sum_slot = 0;
  int next_leaf_slot = 0;

  int add_leaf(int var) {
    Node nd;
    nd.kind = NodeKind::Leaf;
    nd.var = var;
    nd.slot = next_leaf_slot++;
    nodes.push_back(std::move(nd));
    return static_cast<int>(nodes.size()) - 1;
  }
  int add_product(std::vector<int> children) {
    Node nd;
    nd.kind = NodeKind::Product;
    nd.children = std::move(children);
    nodes.push_back(std::move(nd));
    return static_cast<int>(nodes.size()) - 1;
  }
  int add_sum(std::vector<int> children) {
    Node nd;
    nd.kind = NodeKind::Sum;
    nd.slot = next_sum_slot;
    next_sum_slot += static_cast<int>(children.size());
    nd.children = std::move(children);
    nodes.push_back(std::move(nd));
    return static_cast<int>(nodes.size()) - 1;
  }

  // Units of a region over `vars`: I leaves / factorized products at the
  // bottom, S sums over child cross products at inner levels.
  std::vector<int> region(const std::vector<int>& vars, int depth) {
    std::vector<int> units;
    if (depth == 0 || vars.size() == 1) {
      for (int i = 0; i < cfg.leaves_per_var; ++i) {
        if (vars.size() == 1) {
          units.push_back(add_leaf(vars[0]));
        } else {
          std::vector<int> parts;
          parts.reserve(vars.size());
          for (int v : vars) parts.push_back(add_leaf(v));
          units.push_back(add_product(std::move(parts)));
        }
      }
      return units;
    }
    std::size_t half = (vars.size() + 1) / 2;
    std::vector<int> left(vars.begin(), vars.begin() + half);
    std::vector<int> right(vars.begin() + half, vars.end());
    std::vector<int> ul = region(left, depth - 1);
    std::vector<int> ur = region(right, depth - 1);
    std::vector<int> prods;
    prods.reserve(ul.size() * ur.size());
    for (int a : ul)
      for (int b : ur) prods.push_back(add_product({a, b}));
    for (int s = 0; s < cfg.sums_per_region; ++s) units.push_back(add_sum(prods));
    return units;
  }
};

}  // namespace

CircuitStructure build_rat(const RatConfig& cfg, const std::vector<Domain>& domains) {
  const int n = static_cast<int>(domains.size());
  if (n < 1) throw InvalidCircuit("build_rat needs at least one variable");
  if (cfg.repetitions < 1 || cfg.sums_per_region < 1 || cfg.leaves_per_var < 1 || cfg.depth < 0)
    throw InvalidCircuit("rat config values must be positive");

  RatBuilder b{cfg, {}, 0, 0};
  RandomStream rng(cfg.seed);
  std::vector<int> root_children;
  for (int r = 0; r < cfg.repetitions; ++r) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i)
      std::swap(perm[i], perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
    std::vector<int> units = b.region(perm, cfg.depth);
    root_children.insert(root_children.end(), units.begin(), units.end());
  }
  int root = b.add_sum(std::move(root_children));

  std::vector<VarTransform> tr;
  tr.reserve(domains.size());
  for (const Domain& d : domains) tr.push_back(transform_for(d));
  return CircuitStructure(n, std::move(b.nodes), root, std::move(tr));
}

}  // namespace ispn
