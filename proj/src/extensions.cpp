#include "tdcount/extensions.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace tdc {

std::string FactorSite::label() const {
  if (kind == Kind::fence) return "fence(" + std::to_string(id.td) + ")";
  return "node(" + std::to_string(id.td) + "_" + side_char(id.side) + ")";
}

std::string ExtensionCount::trace_lines() const {
  std::ostringstream os;
  for (const auto& [site, factor] : factor_trace) os << "site=" << site.label() << " factor=" << factor << '\n';
  return os.str();
}

std::string ExtensionCount::product_line() const {
  std::ostringstream os;
  if (factor_trace.empty()) {
    os << "1";
  } else {
    for (std::size_t i = 0; i < factor_trace.size(); ++i) os << (i ? " * " : "") << factor_trace[i].second;
  }
  os << " = " << value;
  return os.str();
}

ExtensionCount count_extensions_formula(const MajorGraph& graph) {
  std::set<BreakpointId> stripped;
  if (graph.strip_roots) stripped.insert(graph.roots.begin(), graph.roots.end());

  // Effective parent; nullopt marks the top level after root removal.
  std::map<BreakpointId, std::optional<BreakpointId>> up;
  std::map<std::optional<BreakpointId>, std::vector<BreakpointId>> kids;
  std::set<BreakpointId> node_set(graph.nodes.begin(), graph.nodes.end());
  for (BreakpointId id : graph.nodes) {
    if (stripped.count(id) != 0) continue;
    std::optional<BreakpointId> p = graph.parent_of(id);
    if (p && node_set.count(*p) == 0) throw MalformedGraph("parent " + p->label() + " of " + id.label() + " missing");
    if (!p && std::find(graph.roots.begin(), graph.roots.end(), id) == graph.roots.end())
      throw MalformedGraph("node " + id.label() + " has no major parent");
    if (p && stripped.count(*p) != 0) p.reset();
    // Unstripped roots are their own top level: give them a private slot.
    up[id] = p;
    if (p || graph.strip_roots) kids[p].push_back(id);
  }

  std::map<BreakpointId, std::uint64_t> size;
  std::function<std::uint64_t(BreakpointId)> subtree = [&](BreakpointId id) -> std::uint64_t {
    if (auto it = size.find(id); it != size.end()) return it->second;
    std::uint64_t total = 1;
    if (auto it = kids.find(id); it != kids.end())
      for (BreakpointId c : it->second) total += subtree(c);
    size[id] = total;
    return total;
  };

  ExtensionCount result;
  std::map<BreakpointId, BreakpointId> fence_partner;
  for (const Fence& f : graph.fences) {
    if (up.count(f.a_node) == 0 || up.count(f.b_node) == 0) {
      if (stripped.count(f.a_node) && stripped.count(f.b_node)) continue;  // fence between removed roots
      throw MalformedGraph("fence " + f.a_node.label() + "-" + f.b_node.label() + " touches a removed node");
    }
    if (up[f.a_node] != up[f.b_node] || (!up[f.a_node] && !graph.strip_roots))
      throw MalformedGraph("fence " + f.a_node.label() + "-" + f.b_node.label() + " bridges non-siblings");
    if (fence_partner.count(f.a_node) || fence_partner.count(f.b_node))
      throw MalformedGraph("node in two fences at " + f.a_node.label());
    fence_partner[f.a_node] = f.b_node;
    fence_partner[f.b_node] = f.a_node;
    std::uint64_t y1 = subtree(f.a_node), y2 = subtree(f.b_node);
    Count factor = binomial(y1 + y2, y1) - Count(1);
    result.value *= factor;
    result.factor_trace.push_back({{FactorSite::Kind::fence, f.a_node}, factor});
  }

  for (const auto& [par, children] : kids) {
    if (!par) continue;  // the removed roots contribute nothing
    std::vector<std::uint64_t> branches;
    std::set<BreakpointId> merged;
    for (BreakpointId c : children) {
      if (merged.count(c)) continue;
      std::uint64_t branch = subtree(c);
      if (auto it = fence_partner.find(c); it != fence_partner.end()) {
        branch += subtree(it->second);
        merged.insert(it->second);
      }
      branches.push_back(branch);
    }
    if (branches.size() < 2) continue;
    Count factor = multinomial(branches);
    result.value *= factor;
    result.factor_trace.push_back({{FactorSite::Kind::node, *par}, factor});
  }
  return result;
}

namespace {

struct IndexedPoset {
  std::size_t count = 0;
  std::vector<std::uint64_t> below;  // direct predecessors as a mask
};

IndexedPoset index_poset(const HasseDiagram& h, std::size_t limit) {
  if (h.nodes.size() > limit || h.nodes.size() > 64) {
    throw BudgetExceeded("poset with " + std::to_string(h.nodes.size()) + " nodes exceeds budget of " +
                         std::to_string(limit));
  }
  IndexedPoset p;
  p.count = h.nodes.size();
  p.below.assign(p.count, 0);
  for (const auto& [lo, hi] : h.edges) p.below[h.index_of(hi)] |= std::uint64_t{1} << h.index_of(lo);
  return p;
}

}  // namespace

Count count_extensions_bruteforce(const HasseDiagram& h, const ExtensionBudget& budget) {
  IndexedPoset p = index_poset(h, budget.max_nodes_dp);
  // Number of ways to build each order ideal, one element per layer.
  std::unordered_map<std::uint64_t, Count> layer{{0, Count(1)}};
  for (std::size_t step = 0; step < p.count; ++step) {
    std::unordered_map<std::uint64_t, Count> next;
    for (const auto& [ideal, ways] : layer) {
      for (std::size_t i = 0; i < p.count; ++i) {
        std::uint64_t bit = std::uint64_t{1} << i;
        if ((ideal & bit) == 0 && (p.below[i] & ~ideal) == 0) next[ideal | bit] += ways;
      }
    }
    layer = std::move(next);
  }
  Count total;
  for (const auto& [_, ways] : layer) total += ways;
  return total;
}

void for_each_extension(const HasseDiagram& h, const std::function<void(const std::vector<BreakpointId>&)>& visit,
                        const ExtensionBudget& budget) {
  IndexedPoset p = index_poset(h, budget.max_nodes_enumerate);
  std::vector<BreakpointId> order;
  order.reserve(p.count);
  std::function<void(std::uint64_t)> extend = [&](std::uint64_t placed) {
    if (order.size() == p.count) {
      visit(order);
      return;
    }
    // h.nodes is sorted, so index order is BreakpointId order.
    for (std::size_t i = 0; i < p.count; ++i) {
      std::uint64_t bit = std::uint64_t{1} << i;
      if ((placed & bit) != 0 || (p.below[i] & ~placed) != 0) continue;
      order.push_back(h.nodes[i]);
      extend(placed | bit);
      order.pop_back();
    }
  };
  extend(0);
}

std::vector<std::vector<BreakpointId>> enumerate_extensions(const HasseDiagram& h, const ExtensionBudget& budget) {
  std::vector<std::vector<BreakpointId>> out;
  for_each_extension(h, [&](const std::vector<BreakpointId>& o) { out.push_back(o); }, budget);
  return out;
}

Count evolutions_for(const WordEvolution& evolution) {
  return count_extensions_formula(major_graph(build_2d_tree(evolution))).value;
}

}  // namespace tdc
