#pragma once

// Bi-coloured 2d-tree of breakpoints built from a word evolution, plus the
// Hasse diagram and major graph views derived from it.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tdcount/word.hpp"

namespace tdc {

enum class Side : std::uint8_t { a = 0, b = 1 };

inline Side opposite(Side s) { return s == Side::a ? Side::b : Side::a; }
inline char side_char(Side s) { return s == Side::a ? 'a' : 'b'; }

/// n_a / n_b. td == 0 only for the two roots.
struct BreakpointId {
  int td = 0;
  Side side = Side::a;

  bool is_root() const { return td == 0; }
  std::string label() const { return std::to_string(td) + side_char(side); }
  static BreakpointId parse(const std::string& label);

  friend bool operator==(const BreakpointId&, const BreakpointId&) = default;
  friend auto operator<=>(const BreakpointId&, const BreakpointId&) = default;
};

inline constexpr BreakpointId kRootA{0, Side::a};
inline constexpr BreakpointId kRootB{0, Side::b};

/// A node's two typed parental edges; `major` names the type of the major one.
struct ParentEdges {
  BreakpointId a_parent;
  BreakpointId b_parent;
  Side major = Side::a;

  BreakpointId parent(Side s) const { return s == Side::a ? a_parent : b_parent; }
  BreakpointId major_parent() const { return parent(major); }
  BreakpointId minor_parent() const { return parent(opposite(major)); }

  friend bool operator==(const ParentEdges&, const ParentEdges&) = default;
};

/// Order edge a_node < b_node between two nodes sharing both parents.
struct Fence {
  BreakpointId a_node;
  BreakpointId b_node;

  friend bool operator==(const Fence&, const Fence&) = default;
  friend auto operator<=>(const Fence&, const Fence&) = default;
};

struct TdTree {
  int n = 0;
  std::map<BreakpointId, ParentEdges> parents;  // every non-root node
  std::vector<Fence> fences;                    // sorted by TD number

  std::vector<BreakpointId> nodes() const;  // roots first, then by TD number
  std::size_t node_count() const { return parents.size() + 2; }
  bool has_fence(int td) const;
};

TdTree build_2d_tree(const WordEvolution& evolution);

struct HasseDiagram {
  std::vector<BreakpointId> nodes;
  std::vector<std::pair<BreakpointId, BreakpointId>> edges;  // lower -> upper

  std::size_t index_of(BreakpointId id) const;
};

/// b-edges reversed, fences directed a -> b. Throws CycleDetected when the
/// result is not a DAG with single source 0a and single sink 0b.
HasseDiagram hasse_diagram(const TdTree& tree);

/// Forest of major edges plus fences. Used for 2d-trees, induced graphs of
/// induced evolutions, and induced trees of beta-subtrees.
struct MajorGraph {
  std::vector<BreakpointId> nodes;               // sorted
  std::map<BreakpointId, BreakpointId> parent;   // child -> major parent
  std::vector<Fence> fences;                     // sorted
  std::vector<BreakpointId> roots;               // parentless nodes
  // Counting removes the roots and their daughter edges first (2d-tree
  // convention); otherwise roots are counted like any other node.
  bool strip_roots = true;

  std::vector<BreakpointId> children(BreakpointId id) const;
  std::size_t subtree_size(BreakpointId id) const;
  BreakpointId root_of(BreakpointId id) const;
  std::optional<BreakpointId> parent_of(BreakpointId id) const;

  friend bool operator==(const MajorGraph&, const MajorGraph&) = default;
};

MajorGraph major_graph(const TdTree& tree);

/// Merges root B into root A; B's daughters hang from A.
MajorGraph contract_roots(const MajorGraph& graph, BreakpointId keep = kRootA, BreakpointId merge = kRootB);

struct PropertyCheck {
  std::string name;
  bool passed = true;
  std::vector<std::string> violations;  // offending nodes with a reason
};

struct StructureReport {
  std::vector<PropertyCheck> checks;

  bool passed() const;
  std::string summary() const;
};

/// Structural validators; never throws for a structurally complete tree.
StructureReport validate_structure(const TdTree& tree);
/// Throws StructureViolation naming the first offending node.
void require_valid_structure(const TdTree& tree);

/// Reversed iff n_a precedes n_b in reference order.
bool is_reversed(const std::vector<BreakpointId>& order, int td);

}  // namespace tdc
