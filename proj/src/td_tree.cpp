#include "tdcount/td_tree.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace tdc {

BreakpointId BreakpointId::parse(const std::string& label) {
  if (label.size() < 2) throw ParseError("breakpoint label too short: " + label, 0);
  char side = label.back();
  if (side != 'a' && side != 'b') throw ParseError("breakpoint label must end in a or b: " + label, label.size() - 1);
  int td = 0;
  for (std::size_t i = 0; i + 1 < label.size(); ++i) {
    if (label[i] < '0' || label[i] > '9') throw ParseError("bad breakpoint label: " + label, i);
    td = td * 10 + (label[i] - '0');
  }
  return {td, side == 'a' ? Side::a : Side::b};
}

std::vector<BreakpointId> TdTree::nodes() const {
  std::vector<BreakpointId> out{kRootA, kRootB};
  for (const auto& [id, _] : parents) out.push_back(id);
  return out;
}

bool TdTree::has_fence(int td) const {
  return std::any_of(fences.begin(), fences.end(), [td](const Fence& f) { return f.a_node.td == td; });
}

TdTree build_2d_tree(const WordEvolution& evolution) {
  TdTree tree;
  tree.n = evolution.td_count();
  // The first TD sits on [0a, 0b]; its major parents follow the fixed convention.
  tree.parents[{1, Side::a}] = ParentEdges{kRootA, kRootB, Side::b};
  tree.parents[{1, Side::b}] = ParentEdges{kRootA, kRootB, Side::a};
  tree.fences.push_back({{1, Side::a}, {1, Side::b}});

  // Segment s_i of word c_1..c_m is [(c_i)_a, (c_{i+1})_b] with c_0 = c_{m+1} = 0.
  auto segment_parents = [](const Word& w, std::size_t i) {
    int left = i == 0 ? 0 : static_cast<int>(w.at(i));
    int right = i == w.size() ? 0 : static_cast<int>(w.at(i + 1));
    if (left == right) throw StructureViolation("segment endpoints share TD number " + std::to_string(left));
    return ParentEdges{{left, Side::a}, {right, Side::b}, left > right ? Side::a : Side::b};
  };

  const auto& words = evolution.words();
  for (std::size_t k = 0; k < evolution.steps().size(); ++k) {
    const Word& w = words[k];
    DupChoice c = evolution.steps()[k];
    int td = static_cast<int>(k) + 2;
    tree.parents[{td, Side::a}] = segment_parents(w, static_cast<std::size_t>(c.a - 1));
    tree.parents[{td, Side::b}] = segment_parents(w, static_cast<std::size_t>(c.b));
    if (c.empty_duplication()) tree.fences.push_back({{td, Side::a}, {td, Side::b}});
  }
  return tree;
}

std::size_t HasseDiagram::index_of(BreakpointId id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
  if (it == nodes.end() || *it != id) throw MalformedGraph("node " + id.label() + " not in Hasse diagram");
  return static_cast<std::size_t>(it - nodes.begin());
}

HasseDiagram hasse_diagram(const TdTree& tree) {
  HasseDiagram h;
  h.nodes = tree.nodes();
  std::sort(h.nodes.begin(), h.nodes.end());
  for (const auto& [id, p] : tree.parents) {
    h.edges.emplace_back(p.a_parent, id);
    h.edges.emplace_back(id, p.b_parent);
  }
  for (const Fence& f : tree.fences) h.edges.emplace_back(f.a_node, f.b_node);

  // Kahn's algorithm; also pins the unique source and sink.
  std::size_t count = h.nodes.size();
  std::vector<std::vector<std::size_t>> out(count);
  std::vector<int> indegree(count, 0), outdegree(count, 0);
  for (const auto& [from, to] : h.edges) {
    std::size_t i = h.index_of(from), j = h.index_of(to);
    out[i].push_back(j);
    ++indegree[j];
    ++outdegree[i];
  }
  for (std::size_t i = 0; i < count; ++i) {
    if (indegree[i] == 0 && h.nodes[i] != kRootA) throw CycleDetected("extra source " + h.nodes[i].label());
    if (outdegree[i] == 0 && h.nodes[i] != kRootB) throw CycleDetected("extra sink " + h.nodes[i].label());
  }
  std::deque<std::size_t> ready;
  std::vector<int> remaining = indegree;
  for (std::size_t i = 0; i < count; ++i)
    if (remaining[i] == 0) ready.push_back(i);
  std::size_t seen = 0;
  while (!ready.empty()) {
    std::size_t i = ready.front();
    ready.pop_front();
    ++seen;
    for (std::size_t j : out[i])
      if (--remaining[j] == 0) ready.push_back(j);
  }
  if (seen != count) throw CycleDetected("Hasse diagram has a cycle");
  return h;
}

std::vector<BreakpointId> MajorGraph::children(BreakpointId id) const {
  std::vector<BreakpointId> out;
  for (const auto& [child, par] : parent)
    if (par == id) out.push_back(child);
  return out;
}

std::size_t MajorGraph::subtree_size(BreakpointId id) const {
  std::size_t total = 1;
  for (BreakpointId c : children(id)) total += subtree_size(c);
  return total;
}

BreakpointId MajorGraph::root_of(BreakpointId id) const {
  std::size_t guard = 0;
  for (auto it = parent.find(id); it != parent.end(); it = parent.find(id)) {
    id = it->second;
    if (++guard > parent.size()) throw MalformedGraph("major graph has a cycle");
  }
  return id;
}

std::optional<BreakpointId> MajorGraph::parent_of(BreakpointId id) const {
  auto it = parent.find(id);
  if (it == parent.end()) return std::nullopt;
  return it->second;
}

MajorGraph major_graph(const TdTree& tree) {
  MajorGraph g;
  g.nodes = tree.nodes();
  std::sort(g.nodes.begin(), g.nodes.end());
  for (const auto& [id, p] : tree.parents) g.parent[id] = p.major_parent();
  g.fences = tree.fences;
  std::sort(g.fences.begin(), g.fences.end());
  g.roots = {kRootA, kRootB};
  g.strip_roots = true;
  return g;
}

MajorGraph contract_roots(const MajorGraph& graph, BreakpointId keep, BreakpointId merge) {
  MajorGraph out = graph;
  out.nodes.erase(std::remove(out.nodes.begin(), out.nodes.end(), merge), out.nodes.end());
  for (auto& [child, par] : out.parent)
    if (par == merge) par = keep;
  out.roots.erase(std::remove(out.roots.begin(), out.roots.end(), merge), out.roots.end());
  out.fences.erase(std::remove_if(out.fences.begin(), out.fences.end(),
                                  [&](const Fence& f) { return f.a_node == merge || f.b_node == merge; }),
                   out.fences.end());
  return out;
}

bool StructureReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
}

std::string StructureReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.passed ? "pass " : "FAIL ") << c.name;
    for (const auto& v : c.violations) os << "\n  " << v;
    os << '\n';
  }
  return os.str();
}

namespace {

void flag(PropertyCheck& check, const std::string& what) {
  check.passed = false;
  check.violations.push_back(what);
}

// Ancestors along major edges, nearest first.
std::vector<BreakpointId> major_ancestors(const TdTree& tree, BreakpointId id) {
  std::vector<BreakpointId> out;
  while (!id.is_root()) {
    auto it = tree.parents.find(id);
    if (it == tree.parents.end()) break;
    id = it->second.major_parent();
    out.push_back(id);
    if (out.size() > tree.parents.size() + 2) break;
  }
  return out;
}

bool both_roots(const ParentEdges& p) { return p.a_parent.is_root() && p.b_parent.is_root(); }

}  // namespace

StructureReport validate_structure(const TdTree& tree) {
  StructureReport report;

  PropertyCheck parents{"parental-edges", true, {}};
  for (const auto& [id, p] : tree.parents) {
    if (p.a_parent.side != Side::a || p.b_parent.side != Side::b) flag(parents, id.label() + ": parent of wrong type");
    if (p.a_parent.td >= id.td || p.b_parent.td >= id.td) flag(parents, id.label() + ": parent not older");
    if (both_roots(p)) {
      // First TD convention: 1a hangs from 0b, 1b from 0a.
      if (p.major != opposite(id.side)) flag(parents, id.label() + ": root-segment major convention broken");
    } else if (p.major_parent().td <= p.minor_parent().td) {
      flag(parents, id.label() + ": major parent " + p.major_parent().label() + " is not the larger TD number");
    }
  }
  if (tree.node_count() != static_cast<std::size_t>(2 * tree.n + 2))
    flag(parents, "node count " + std::to_string(tree.node_count()) + " != 2n+2");
  report.checks.push_back(parents);

  PropertyCheck fences{"fences", true, {}};
  for (const Fence& f : tree.fences) {
    auto pa = tree.parents.find(f.a_node), pb = tree.parents.find(f.b_node);
    if (pa == tree.parents.end() || pb == tree.parents.end() || f.a_node.td != f.b_node.td) {
      flag(fences, "fence " + f.a_node.label() + "-" + f.b_node.label() + " is not a TD pair");
      continue;
    }
    if (pa->second.a_parent != pb->second.a_parent || pa->second.b_parent != pb->second.b_parent)
      flag(fences, "fence " + std::to_string(f.a_node.td) + " daughters do not share parents");
  }
  if (!tree.has_fence(1)) flag(fences, "initial fence missing");
  report.checks.push_back(fences);

  PropertyCheck forest{"major-forest", true, {}};
  for (const auto& [id, _] : tree.parents) {
    auto anc = major_ancestors(tree, id);
    if (anc.empty() || !anc.back().is_root()) flag(forest, id.label() + ": major path does not reach a root");
  }
  report.checks.push_back(forest);

  PropertyCheck hasse{"hasse-diagram", true, {}};
  std::optional<HasseDiagram> h;
  try {
    h = hasse_diagram(tree);
  } catch (const CycleDetected& e) {
    flag(hasse, e.what());
  }
  report.checks.push_back(hasse);

  // Minor parent reached by a major chain whose interior shares the major parent's type.
  PropertyCheck chain{"segment-chain", true, {}};
  PropertyCheck minor{"minor-parent-ancestor", true, {}};
  for (const auto& [id, p] : tree.parents) {
    if (both_roots(p)) continue;
    auto anc = major_ancestors(tree, id);
    auto it = std::find(anc.begin(), anc.end(), p.minor_parent());
    if (it == anc.end()) {
      flag(chain, id.label() + ": minor parent " + p.minor_parent().label() + " not on major chain");
      flag(minor, id.label() + ": minor parent " + p.minor_parent().label() + " is not an ancestor");
      continue;
    }
    for (auto j = anc.begin() + 1; j != it; ++j)
      if (j->side != p.major) flag(chain, id.label() + ": chain interior " + j->label() + " has the wrong type");
    // Most recent opposite-type ancestor.
    Side want = opposite(p.major);
    auto nearest = std::find_if(anc.begin(), anc.end(), [want](BreakpointId x) { return x.side == want; });
    if (nearest == anc.end() || *nearest != p.minor_parent())
      flag(minor, id.label() + ": minor parent " + p.minor_parent().label() +
                      " is not the most recent opposite-type ancestor");
  }
  report.checks.push_back(chain);
  report.checks.push_back(minor);

  // Every root-to-leaf major path is totally ordered a1 < .. < aI < bJ < .. < b1.
  PropertyCheck order{"chain-order", true, {}};
  if (h) {
    std::size_t count = h->nodes.size();
    std::vector<std::vector<bool>> reach(count, std::vector<bool>(count, false));
    std::vector<std::vector<std::size_t>> out(count);
    for (const auto& [from, to] : h->edges) out[h->index_of(from)].push_back(h->index_of(to));
    for (std::size_t s = 0; s < count; ++s) {
      std::vector<std::size_t> stack{s};
      while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t j : out[i])
          if (!reach[s][j]) {
            reach[s][j] = true;
            stack.push_back(j);
          }
      }
    }
    std::set<BreakpointId> internal;
    for (const auto& [id, p] : tree.parents) internal.insert(p.major_parent());
    for (const auto& [leaf, _] : tree.parents) {
      if (internal.count(leaf) != 0) continue;
      auto anc = major_ancestors(tree, leaf);
      std::vector<BreakpointId> path(anc.rbegin(), anc.rend());
      path.push_back(leaf);
      std::vector<BreakpointId> expected;
      for (BreakpointId x : path)
        if (x.side == Side::a) expected.push_back(x);
      for (auto x = path.rbegin(); x != path.rend(); ++x)
        if (x->side == Side::b) expected.push_back(*x);
      for (std::size_t i = 0; i + 1 < expected.size(); ++i) {
        if (!reach[h->index_of(expected[i])][h->index_of(expected[i + 1])]) {
          flag(order, "path to " + leaf.label() + ": " + expected[i].label() + " < " + expected[i + 1].label() +
                          " not forced");
        }
      }
    }
  } else {
    flag(order, "no Hasse diagram");
  }
  report.checks.push_back(order);
  return report;
}

void require_valid_structure(const TdTree& tree) {
  auto report = validate_structure(tree);
  for (const auto& c : report.checks)
    if (!c.passed) throw StructureViolation(c.name + ": " + c.violations.front());
}

bool is_reversed(const std::vector<BreakpointId>& order, int td) {
  auto pa = std::find(order.begin(), order.end(), BreakpointId{td, Side::a});
  auto pb = std::find(order.begin(), order.end(), BreakpointId{td, Side::b});
  if (pa == order.end() || pb == order.end()) throw ValidationError("TD " + std::to_string(td) + " not in order");
  return pa < pb;
}

}  // namespace tdc
