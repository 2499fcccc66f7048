#pragma once

// Induced evolutions, 1-nodesets, beta-trees and the kernel identity that
// gives the closed product for the number of TD-Evolutions.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tdcount/count.hpp"
#include "tdcount/extensions.hpp"
#include "tdcount/td_tree.hpp"
#include "tdcount/word.hpp"

namespace tdc {

/// D: drop every copy of symbol 1 and lower the rest by one.
WordEvolution delete_first_td(const WordEvolution& e);
Word delete_symbol_one(const Word& w);

/// Every E' on n+1 TDs with D(E') = e, in lexicographic step order.
std::vector<WordEvolution> induced_evolutions(const WordEvolution& e, std::size_t max_results = 1'000'000);

/// Labels are those of the shifted tree: 1a/1b stand for the old roots.
struct OneNodeset {
  std::set<BreakpointId> members;

  bool contains(BreakpointId id) const { return members.count(id) != 0; }
  std::string to_string() const;  // "{1a,1b,2b}"
  friend bool operator==(const OneNodeset&, const OneNodeset&) = default;
};

OneNodeset one_nodeset_of(const WordEvolution& e, const WordEvolution& e_induced);
/// Throws InvalidNodeset naming the violated rule.
void validate_nodeset(const TdTree& tree, const OneNodeset& nodeset);

/// Major graph of the induced evolution, rebuilt from the tree of e. Includes
/// the new roots 0a, 0b above the relabelled old roots and the fence 1a-1b.
MajorGraph induced_major_graph(const TdTree& tree, const OneNodeset& nodeset);

struct BetaTree {
  std::map<BreakpointId, ParentEdges> parents;  // non-root nodes
  std::vector<Fence> fences;                    // may include the root pair

  std::vector<BreakpointId> nodes() const;  // roots first, then sorted
  std::size_t node_count() const { return parents.size() + 2; }
  bool has_root_fence() const;
  std::vector<BreakpointId> topological_order() const;  // roots first
  friend bool operator==(const BetaTree&, const BetaTree&) = default;
};

BetaTree to_beta_tree(const TdTree& tree);
StructureReport validate_beta_tree(const BetaTree& tree);
MajorGraph beta_major_graph(const BetaTree& tree);

struct BetaSubtree {
  std::set<BreakpointId> members;

  bool contains(BreakpointId id) const { return members.count(id) != 0; }
  std::string to_string() const;
  friend bool operator==(const BetaSubtree&, const BetaSubtree&) = default;
  friend auto operator<=>(const BetaSubtree&, const BetaSubtree&) = default;
};

/// Returns an empty string when tau is a beta-subtree, else the broken rule.
std::string beta_subtree_violation(const BetaTree& tree, const BetaSubtree& tau);
std::vector<BetaSubtree> enumerate_beta_subtrees(const BetaTree& tree, std::size_t max_nodes = 20);
BetaSubtree trivial_subtree();
/// Shifts a 1-nodeset back onto the unshifted tree of e.
BetaSubtree as_subtree(const OneNodeset& nodeset);

/// Roots kept, no root fence; counted without stripping the roots.
MajorGraph induced_tree(const BetaTree& tree, const BetaSubtree& tau);
/// T(epsilon) with the roots contracted. Built even when epsilon itself is
/// not a beta-subtree (a fence hanging from the roots).
MajorGraph contracted_trivial_tree(const BetaTree& tree);
/// Nodes in root A's component, A included.
std::size_t nodes_at_root_a(const MajorGraph& graph);

struct KernelCheck {
  std::size_t r = 0;
  Count lhs;
  Count rhs;
  std::size_t subtrees = 0;  // subtrees with N_A = r
  bool equal() const { return lhs == rhs; }
};

KernelCheck kernel_check(const BetaTree& tree, std::size_t r, std::size_t max_nodes = 20);
/// One entry per r = 1..N-1, sharing a single subtree enumeration.
std::vector<KernelCheck> kernel_check_all(const BetaTree& tree, std::size_t max_nodes = 20);

/// Seven nodes: a fenced pair 1a/1b under the roots, 4a below 1a, and
/// leaves 2b, 3b below 1b. Contracted count 9 * 2 = 18; r = 5 collects 6 + 12.
BetaTree fenced_example_tree();

/// Segment-wise growth; not uniform over beta-trees.
BetaTree random_beta_tree(std::uint64_t seed, std::size_t size, double fence_probability = 0.3);

Count closed_form(int n);
/// Sum of formula counts over every word evolution on n TDs.
Count total_evolutions_via_words(int n, int max_n = 6, int workers = 1);
/// Sum of formula counts over the induced evolutions of e.
Count induced_fiber_sum(const WordEvolution& e);

}  // namespace tdc
