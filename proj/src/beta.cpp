#include "tdcount/beta.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace tdc {

Word delete_symbol_one(const Word& w) {
  std::vector<Symbol> out;
  out.reserve(w.size());
  for (Symbol s : w.symbols())
    if (s != 1) out.push_back(s - 1);
  return Word(std::move(out));
}

WordEvolution delete_first_td(const WordEvolution& e) {
  if (e.td_count() < 2) throw ValidationError("deletion needs at least two TDs");
  std::vector<Word> words;
  for (std::size_t k = 1; k < e.words().size(); ++k) words.push_back(delete_symbol_one(e.words()[k]));
  return WordEvolution::from_words(words);
}

std::vector<WordEvolution> induced_evolutions(const WordEvolution& e, std::size_t max_results) {
  const std::vector<Word>& target = e.words();
  std::vector<WordEvolution> out;
  std::vector<DupChoice> steps;
  std::function<void(const Word&)> extend = [&](const Word& current) {
    const std::size_t k = steps.size() + 1;  // TDs so far in E'
    if (k == target.size() + 1) {
      if (out.size() >= max_results)
        throw BudgetExceeded("more than " + std::to_string(max_results) + " induced evolutions");
      out.emplace_back(steps);
      return;
    }
    for (DupChoice c : choices_for(current.size())) {
      Word next = td_step(current, c, static_cast<Symbol>(k + 1));
      if (delete_symbol_one(next) != target[k - 1]) continue;
      steps.push_back(c);
      extend(next);
      steps.pop_back();
    }
  };
  extend(Word({1}));
  return out;
}

namespace {

std::string set_string(const std::set<BreakpointId>& members) {
  std::string out = "{";
  bool first = true;
  for (BreakpointId id : members) {
    out += (first ? "" : ",") + id.label();
    first = false;
  }
  return out + "}";
}

BreakpointId shifted(BreakpointId id) { return {id.td + 1, id.side}; }

}  // namespace

std::string OneNodeset::to_string() const { return set_string(members); }
std::string BetaSubtree::to_string() const { return set_string(members); }

OneNodeset one_nodeset_of(const WordEvolution& e, const WordEvolution& e_induced) {
  if (e_induced.td_count() != e.td_count() + 1 || delete_first_td(e_induced) != e)
    throw NotAnInducedPair(e_induced.to_string() + " is not induced from " + e.to_string());
  OneNodeset n;
  n.members = {{1, Side::a}, {1, Side::b}};
  const std::vector<Word>& words = e_induced.words();
  for (std::size_t k = 2; k <= words.size(); ++k) {
    const std::vector<Symbol>& w = words[k - 1].symbols();
    auto it = std::find(w.begin(), w.end(), static_cast<Symbol>(k));
    std::size_t p = static_cast<std::size_t>(it - w.begin());
    if (p > 0 && w[p - 1] == 1) n.members.insert({static_cast<int>(k), Side::b});
    if (p + 1 < w.size() && w[p + 1] == 1) n.members.insert({static_cast<int>(k), Side::a});
  }
  return n;
}

void validate_nodeset(const TdTree& tree, const OneNodeset& nodeset) {
  if (!nodeset.contains({1, Side::a}) || !nodeset.contains({1, Side::b}))
    throw InvalidNodeset("1-nodeset must contain 1a and 1b");
  for (BreakpointId id : nodeset.members) {
    if (id.td < 1 || id.td > tree.n + 1) throw InvalidNodeset("label " + id.label() + " outside the shifted tree");
    if (id.td == 1) continue;
    const ParentEdges& p = tree.parents.at({id.td - 1, id.side});
    if (!nodeset.contains(shifted(p.a_parent)) || !nodeset.contains(shifted(p.b_parent)))
      throw InvalidNodeset("parents of " + id.label() + " not in the nodeset");
  }
  for (const Fence& f : tree.fences) {
    const ParentEdges& p = tree.parents.at(f.a_node);
    if (nodeset.contains(shifted(p.a_parent)) && nodeset.contains(shifted(p.b_parent)) &&
        !nodeset.contains(shifted(f.a_node)) && !nodeset.contains(shifted(f.b_node)))
      throw InvalidNodeset("fence " + std::to_string(f.a_node.td + 1) + " has neither daughter in the nodeset");
  }
}

MajorGraph induced_major_graph(const TdTree& tree, const OneNodeset& nodeset) {
  validate_nodeset(tree, nodeset);
  // Old roots become the new TD 1 with their labels swapped.
  auto relabel = [](BreakpointId id) -> BreakpointId {
    if (id == kRootA) return {1, Side::b};
    if (id == kRootB) return {1, Side::a};
    return shifted(id);
  };
  MajorGraph g;
  g.nodes = {kRootA, kRootB};
  g.roots = {kRootA, kRootB};
  g.strip_roots = true;
  g.parent[{1, Side::a}] = kRootB;
  g.parent[{1, Side::b}] = kRootA;
  g.nodes.push_back({1, Side::a});
  g.nodes.push_back({1, Side::b});
  g.fences.push_back({{1, Side::a}, {1, Side::b}});
  for (const auto& [id, p] : tree.parents) {
    const bool in = nodeset.contains(shifted(id));
    const bool adjacent = !in && nodeset.contains(shifted(p.a_parent)) && nodeset.contains(shifted(p.b_parent));
    BreakpointId chosen = in ? p.parent(id.side) : adjacent ? p.parent(opposite(id.side)) : p.major_parent();
    g.nodes.push_back(relabel(id));
    g.parent[relabel(id)] = relabel(chosen);
  }
  for (const Fence& f : tree.fences)
    if (!nodeset.contains(shifted(f.a_node)) || !nodeset.contains(shifted(f.b_node)))
      g.fences.push_back({relabel(f.a_node), relabel(f.b_node)});
  std::sort(g.nodes.begin(), g.nodes.end());
  std::sort(g.fences.begin(), g.fences.end());
  return g;
}

std::vector<BreakpointId> BetaTree::nodes() const {
  std::vector<BreakpointId> out{kRootA, kRootB};
  for (const auto& [id, _] : parents) out.push_back(id);
  return out;
}

bool BetaTree::has_root_fence() const {
  return std::find(fences.begin(), fences.end(), Fence{kRootA, kRootB}) != fences.end();
}

std::vector<BreakpointId> BetaTree::topological_order() const {
  std::vector<BreakpointId> order{kRootA, kRootB};
  std::set<BreakpointId> placed(order.begin(), order.end());
  std::vector<BreakpointId> pending;
  for (const auto& [id, _] : parents) pending.push_back(id);
  while (!pending.empty()) {
    std::vector<BreakpointId> rest;
    for (BreakpointId id : pending) {
      const ParentEdges& p = parents.at(id);
      if (placed.count(p.a_parent) && placed.count(p.b_parent)) {
        order.push_back(id);
        placed.insert(id);
      } else {
        rest.push_back(id);
      }
    }
    if (rest.size() == pending.size()) throw CycleDetected("beta-tree parent edges form a cycle");
    pending = std::move(rest);
  }
  return order;
}

BetaTree to_beta_tree(const TdTree& tree) {
  BetaTree b;
  b.parents = tree.parents;
  b.fences = tree.fences;
  return b;
}

namespace {

void flag(PropertyCheck& check, const std::string& what) {
  check.passed = false;
  check.violations.push_back(what);
}

bool is_root(BreakpointId id) { return id == kRootA || id == kRootB; }

// Any-edge ancestry.
bool is_ancestor(const BetaTree& tree, BreakpointId anc, BreakpointId id) {
  std::vector<BreakpointId> stack{id};
  std::set<BreakpointId> seen;
  while (!stack.empty()) {
    BreakpointId x = stack.back();
    stack.pop_back();
    if (x == anc) return true;
    auto it = tree.parents.find(x);
    if (it == tree.parents.end() || !seen.insert(x).second) continue;
    stack.push_back(it->second.a_parent);
    stack.push_back(it->second.b_parent);
  }
  return false;
}

}  // namespace

StructureReport validate_beta_tree(const BetaTree& tree) {
  StructureReport report;
  PropertyCheck typed{"typed-parents", true, {}};
  PropertyCheck acyclic{"acyclic", true, {}};
  PropertyCheck chain{"parent-chain", true, {}};
  PropertyCheck fences{"fences", true, {}};

  std::set<BreakpointId> all;
  for (BreakpointId id : tree.nodes()) all.insert(id);
  for (const auto& [id, p] : tree.parents) {
    if (is_root(id)) flag(typed, id.label() + ": root with parents");
    if (p.a_parent.side != Side::a || p.b_parent.side != Side::b)
      flag(typed, id.label() + ": parent types do not match edge types");
    if (!all.count(p.a_parent) || !all.count(p.b_parent)) flag(typed, id.label() + ": parent missing");
  }
  bool has_cycle = false;
  try {
    tree.topological_order();
  } catch (const CycleDetected& e) {
    has_cycle = true;
    flag(acyclic, e.what());
  }
  if (!has_cycle && typed.passed) {
    for (const auto& [id, p] : tree.parents) {
      bool root_pair = p.a_parent == kRootA && p.b_parent == kRootB;
      if (root_pair) continue;
      if (!is_ancestor(tree, p.minor_parent(), p.major_parent()))
        flag(chain, id.label() + ": major parent " + p.major_parent().label() + " does not descend from minor " +
                        p.minor_parent().label());
    }
  }
  std::set<BreakpointId> fenced;
  for (const Fence& f : tree.fences) {
    if (f.a_node.side != Side::a || f.b_node.side != Side::b) {
      flag(fences, f.a_node.label() + "-" + f.b_node.label() + ": fence needs an a-node and a b-node");
      continue;
    }
    if (!fenced.insert(f.a_node).second || !fenced.insert(f.b_node).second)
      flag(fences, f.a_node.label() + "-" + f.b_node.label() + ": node in two fences");
    if (f.a_node == kRootA && f.b_node == kRootB) continue;
    auto pa = tree.parents.find(f.a_node), pb = tree.parents.find(f.b_node);
    if (pa == tree.parents.end() || pb == tree.parents.end()) {
      flag(fences, f.a_node.label() + "-" + f.b_node.label() + ": fence on a missing node");
    } else if (pa->second.a_parent != pb->second.a_parent || pa->second.b_parent != pb->second.b_parent) {
      flag(fences, f.a_node.label() + "-" + f.b_node.label() + ": daughters do not share parents");
    }
  }
  report.checks = {typed, acyclic, chain, fences};
  return report;
}

MajorGraph beta_major_graph(const BetaTree& tree) {
  MajorGraph g;
  g.nodes = tree.nodes();
  std::sort(g.nodes.begin(), g.nodes.end());
  for (const auto& [id, p] : tree.parents) g.parent[id] = p.major_parent();
  g.fences = tree.fences;
  std::sort(g.fences.begin(), g.fences.end());
  g.roots = {kRootA, kRootB};
  g.strip_roots = false;
  return g;
}

std::string beta_subtree_violation(const BetaTree& tree, const BetaSubtree& tau) {
  if (!tau.contains(kRootA) || !tau.contains(kRootB)) return "roots must be in the subtree";
  for (BreakpointId id : tau.members) {
    if (is_root(id)) continue;
    auto it = tree.parents.find(id);
    if (it == tree.parents.end()) return id.label() + " is not a node of the tree";
    if (!tau.contains(it->second.a_parent) || !tau.contains(it->second.b_parent))
      return "parents of " + id.label() + " missing";
  }
  for (const Fence& f : tree.fences) {
    if (is_root(f.a_node)) continue;
    const ParentEdges& p = tree.parents.at(f.a_node);
    if (tau.contains(p.a_parent) && tau.contains(p.b_parent) && !tau.contains(f.a_node) && !tau.contains(f.b_node))
      return "fence " + f.a_node.label() + "-" + f.b_node.label() + " has neither daughter";
  }
  return {};
}

std::vector<BetaSubtree> enumerate_beta_subtrees(const BetaTree& tree, std::size_t max_nodes) {
  if (tree.node_count() > max_nodes)
    throw BudgetExceeded("beta-tree with " + std::to_string(tree.node_count()) + " nodes exceeds budget of " +
                         std::to_string(max_nodes));
  std::vector<BreakpointId> order = tree.topological_order();
  std::vector<BetaSubtree> out;
  BetaSubtree tau = trivial_subtree();
  std::function<void(std::size_t)> walk = [&](std::size_t i) {
    if (i == order.size()) {
      if (beta_subtree_violation(tree, tau).empty()) out.push_back(tau);
      return;
    }
    BreakpointId id = order[i];
    walk(i + 1);
    const ParentEdges& p = tree.parents.at(id);
    if (tau.contains(p.a_parent) && tau.contains(p.b_parent)) {
      tau.members.insert(id);
      walk(i + 1);
      tau.members.erase(id);
    }
  };
  walk(2);
  std::sort(out.begin(), out.end());
  return out;
}

BetaSubtree trivial_subtree() { return BetaSubtree{{kRootA, kRootB}}; }

BetaSubtree as_subtree(const OneNodeset& nodeset) {
  BetaSubtree tau;
  for (BreakpointId id : nodeset.members) tau.members.insert({id.td - 1, id.side});
  return tau;
}

namespace {

MajorGraph build_induced_tree(const BetaTree& tree, const BetaSubtree& tau) {
  MajorGraph g;
  g.nodes = tree.nodes();
  std::sort(g.nodes.begin(), g.nodes.end());
  g.roots = {kRootA, kRootB};
  g.strip_roots = false;
  for (const auto& [id, p] : tree.parents) {
    const bool in = tau.contains(id);
    const bool adjacent = !in && tau.contains(p.a_parent) && tau.contains(p.b_parent);
    g.parent[id] = in ? p.parent(id.side) : adjacent ? p.parent(opposite(id.side)) : p.major_parent();
  }
  for (const Fence& f : tree.fences)
    if (!tau.contains(f.a_node) || !tau.contains(f.b_node)) g.fences.push_back(f);
  std::sort(g.fences.begin(), g.fences.end());
  return g;
}

}  // namespace

MajorGraph induced_tree(const BetaTree& tree, const BetaSubtree& tau) {
  if (std::string why = beta_subtree_violation(tree, tau); !why.empty()) throw InvalidSubtree(why);
  return build_induced_tree(tree, tau);
}

MajorGraph contracted_trivial_tree(const BetaTree& tree) {
  return contract_roots(build_induced_tree(tree, trivial_subtree()));
}

std::size_t nodes_at_root_a(const MajorGraph& graph) {
  std::size_t count = 0;
  for (BreakpointId id : graph.nodes)
    if (graph.root_of(id) == kRootA) ++count;
  return count;
}

std::vector<KernelCheck> kernel_check_all(const BetaTree& tree, std::size_t max_nodes) {
  const std::size_t total = tree.node_count();
  std::vector<KernelCheck> out(total - 1);
  const Count rhs = count_extensions_formula(contracted_trivial_tree(tree)).value;
  for (std::size_t r = 1; r < total; ++r) {
    out[r - 1].r = r;
    out[r - 1].rhs = rhs;
  }
  for (const BetaSubtree& tau : enumerate_beta_subtrees(tree, max_nodes)) {
    MajorGraph g = induced_tree(tree, tau);
    std::size_t r = nodes_at_root_a(g);
    if (r < 1 || r >= total) continue;
    out[r - 1].lhs += count_extensions_formula(g).value;
    ++out[r - 1].subtrees;
  }
  return out;
}

KernelCheck kernel_check(const BetaTree& tree, std::size_t r, std::size_t max_nodes) {
  if (r < 1 || r >= tree.node_count())
    throw ValidationError("r must lie in 1.." + std::to_string(tree.node_count() - 1));
  return kernel_check_all(tree, max_nodes)[r - 1];
}

BetaTree fenced_example_tree() {
  const BreakpointId a1{1, Side::a}, b1{1, Side::b}, b2{2, Side::b}, b3{3, Side::b}, a2{4, Side::a};
  BetaTree t;
  t.parents[a1] = {kRootA, kRootB, Side::b};
  t.parents[b1] = {kRootA, kRootB, Side::a};
  t.parents[b2] = {kRootA, b1, Side::b};
  t.parents[b3] = {kRootA, b1, Side::b};
  t.parents[a2] = {a1, kRootB, Side::a};
  t.fences = {{a1, b1}};
  return t;
}

BetaTree random_beta_tree(std::uint64_t seed, std::size_t size, double fence_probability) {
  if (size < 2) throw ValidationError("beta-tree needs at least the two roots");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  BetaTree tree;
  if (unit(rng) < fence_probability / 2) tree.fences.push_back({kRootA, kRootB});

  std::map<BreakpointId, std::size_t> born{{kRootA, 0}, {kRootB, 0}};
  std::vector<std::pair<BreakpointId, BreakpointId>> segments{{kRootA, kRootB}};
  int label = 1;
  auto place = [&](BreakpointId id, std::pair<BreakpointId, BreakpointId> seg) {
    const auto [u, v] = seg;
    ParentEdges p{u, v, Side::a};
    if (u == kRootA && v == kRootB) {
      p.major = opposite(id.side);
    } else {
      p.major = born.at(v) > born.at(u) ? Side::b : Side::a;
    }
    tree.parents[id] = p;
    born[id] = born.size();
  };
  while (tree.node_count() < size) {
    auto seg = segments[std::uniform_int_distribution<std::size_t>(0, segments.size() - 1)(rng)];
    const bool pair = tree.node_count() + 2 <= size && unit(rng) < fence_probability;
    if (pair) {
      BreakpointId xa{label, Side::a}, xb{label, Side::b};
      place(xa, seg);
      place(xb, seg);
      tree.fences.push_back({xa, xb});
      segments.push_back({xa, seg.second});
      segments.push_back({seg.first, xb});
    } else {
      Side side = unit(rng) < 0.5 ? Side::a : Side::b;
      BreakpointId x{label, side};
      place(x, seg);
      segments.push_back(side == Side::a ? std::pair{x, seg.second} : std::pair{seg.first, x});
    }
    ++label;
  }
  std::sort(tree.fences.begin(), tree.fences.end());
  return tree;
}

Count closed_form(int n) {
  if (n < 0) throw ValidationError("TD count must be non-negative");
  Count total(1);
  for (int k = 1; k <= n; ++k) total *= evolution_factor(static_cast<unsigned>(k));
  return total;
}

Count total_evolutions_via_words(int n, int max_n, int workers) {
  if (n < 1) throw ValidationError("TD count must be at least 1");
  if (n > max_n)
    throw BudgetExceeded("word enumeration at n=" + std::to_string(n) + " exceeds budget " + std::to_string(max_n));
  auto count_one = [](const std::vector<DupChoice>& steps, const Word&) {
    return evolutions_for(WordEvolution(steps));
  };
  if (workers <= 1 || n < 3) {
    Count total;
    for_each_word_evolution(n, [&](const std::vector<DupChoice>& s, const Word& w) { total += count_one(s, w); });
    return total;
  }
  std::vector<std::vector<DupChoice>> prefixes = evolution_prefixes(std::min(n - 1, 3));
  std::atomic<std::size_t> next{0};
  std::mutex m;
  Count total;
  std::exception_ptr error;
  auto run = [&] {
    try {
      Count local;
      for (std::size_t i = next++; i < prefixes.size(); i = next++)
        for_each_word_evolution_from(prefixes[i], n,
                                     [&](const std::vector<DupChoice>& s, const Word& w) { local += count_one(s, w); });
      std::lock_guard lock(m);
      total += local;
    } catch (...) {
      std::lock_guard lock(m);
      if (!error) error = std::current_exception();
    }
  };
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) threads.emplace_back(run);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
  return total;
}

Count induced_fiber_sum(const WordEvolution& e) {
  Count total;
  for (const WordEvolution& ep : induced_evolutions(e)) total += evolutions_for(ep);
  return total;
}

}  // namespace tdc
