#pragma once

// Linear-extension counts for TD posets: the closed product over the major
// graph, and an independent order-ideal DP over the Hasse diagram.

#include <functional>
#include <string>
#include <vector>

#include "tdcount/count.hpp"
#include "tdcount/td_tree.hpp"

namespace tdc {

struct FactorSite {
  enum class Kind { node, fence } kind = Kind::node;
  BreakpointId id;  // the node, or the fence's a-node

  std::string label() const;  // "node(1b)" / "fence(3)"
  friend bool operator==(const FactorSite&, const FactorSite&) = default;
};

struct ExtensionCount {
  Count value{1};
  // Every fence, and every node with two or more branches. Single-branch
  // nodes contribute 1 and are left out.
  std::vector<std::pair<FactorSite, Count>> factor_trace;

  std::string trace_lines() const;  // "site=fence(1) factor=27" per line
  std::string product_line() const;  // "27 * 2 * 10 = 540"
};

/// Throws MalformedGraph when a fence's daughters are not siblings or a node
/// has no unique parent.
ExtensionCount count_extensions_formula(const MajorGraph& graph);

struct ExtensionBudget {
  std::size_t max_nodes_dp = 26;
  std::size_t max_nodes_enumerate = 10;
};

Count count_extensions_bruteforce(const HasseDiagram& h, const ExtensionBudget& budget = {});

/// Visits every linear extension once, lexicographically by BreakpointId sequence.
void for_each_extension(const HasseDiagram& h, const std::function<void(const std::vector<BreakpointId>&)>& visit,
                        const ExtensionBudget& budget = {});
std::vector<std::vector<BreakpointId>> enumerate_extensions(const HasseDiagram& h, const ExtensionBudget& budget = {});

/// Shorthand: formula count for a word evolution.
Count evolutions_for(const WordEvolution& evolution);

}  // namespace tdc
