#include "tdcount/export.hpp"

#include <sstream>

namespace tdc {

namespace {

using nlohmann::json;

std::string node_line(BreakpointId id) {
  const bool a = id.side == Side::a;
  return "  \"" + id.label() + "\" [shape=" + (a ? "box" : "ellipse") + ", color=" + (a ? "red" : "blue") + "];\n";
}

std::string edge_line(BreakpointId from, BreakpointId to, const std::string& attrs) {
  return "  \"" + from.label() + "\" -> \"" + to.label() + "\" [" + attrs + "];\n";
}

std::string fence_line(const Fence& f) {
  return edge_line(f.a_node, f.b_node, "style=bold, color=black, dir=none");
}

std::string type_color(Side s) { return s == Side::a ? "red" : "blue"; }

std::string parental_dot(const std::string& name, const std::vector<BreakpointId>& nodes,
                         const std::map<BreakpointId, ParentEdges>& parents, const std::vector<Fence>& fences) {
  std::string out = "digraph " + name + " {\n";
  for (BreakpointId id : nodes) out += node_line(id);
  for (const auto& [id, p] : parents) {
    for (Side s : {Side::a, Side::b}) {
      std::string style = s == p.major ? "solid" : "dashed";
      out += edge_line(p.parent(s), id, "color=" + type_color(s) + ", style=" + style);
    }
  }
  for (const Fence& f : fences) out += fence_line(f);
  return out + "}\n";
}

json parents_json(const std::map<BreakpointId, ParentEdges>& parents) {
  json nodes = json::array();
  for (const auto& [id, p] : parents) {
    nodes.push_back({{"id", id.label()},
                     {"a_parent", p.a_parent.label()},
                     {"b_parent", p.b_parent.label()},
                     {"major", std::string(1, side_char(p.major))}});
  }
  return nodes;
}

json fences_json(const std::vector<Fence>& fences) {
  json out = json::array();
  for (const Fence& f : fences) out.push_back({f.a_node.label(), f.b_node.label()});
  return out;
}

BreakpointId id_of(const json& j) {
  if (!j.is_string()) throw ParseError("expected a node label", 0);
  return BreakpointId::parse(j.get<std::string>());
}

std::map<BreakpointId, ParentEdges> parents_from(const json& nodes) {
  std::map<BreakpointId, ParentEdges> out;
  for (const json& n : nodes) {
    ParentEdges p{id_of(n.at("a_parent")), id_of(n.at("b_parent")), Side::a};
    std::string major = n.at("major").get<std::string>();
    if (major != "a" && major != "b") throw ParseError("major must be \"a\" or \"b\"", 0);
    p.major = major == "a" ? Side::a : Side::b;
    out[id_of(n.at("id"))] = p;
  }
  return out;
}

std::vector<Fence> fences_from(const json& fences) {
  std::vector<Fence> out;
  for (const json& f : fences) {
    if (!f.is_array() || f.size() != 2) throw ParseError("fence must be a pair of labels", 0);
    out.push_back({id_of(f[0]), id_of(f[1])});
  }
  return out;
}

template <typename F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), 0);
  }
}

}  // namespace

std::string to_dot(const TdTree& tree) { return parental_dot("tree", tree.nodes(), tree.parents, tree.fences); }

std::string to_dot(const BetaTree& tree) { return parental_dot("beta", tree.nodes(), tree.parents, tree.fences); }

std::string to_dot(const HasseDiagram& hasse) {
  std::string out = "digraph hasse {\n";
  for (BreakpointId id : hasse.nodes) out += node_line(id);
  for (const auto& [lo, hi] : hasse.edges) out += edge_line(lo, hi, "color=black");
  return out + "}\n";
}

std::string to_dot(const MajorGraph& graph) {
  std::string out = "digraph major {\n";
  for (BreakpointId id : graph.nodes) out += node_line(id);
  for (const auto& [child, par] : graph.parent) out += edge_line(par, child, "style=solid");
  for (const Fence& f : graph.fences) out += fence_line(f);
  return out + "}\n";
}

json to_json(const TdTree& tree) {
  return {{"n", tree.n}, {"nodes", parents_json(tree.parents)}, {"fences", fences_json(tree.fences)}};
}

json to_json(const BetaTree& tree) {
  return {{"nodes", parents_json(tree.parents)}, {"fences", fences_json(tree.fences)}};
}

json to_json(const HasseDiagram& hasse) {
  json nodes = json::array(), edges = json::array();
  for (BreakpointId id : hasse.nodes) nodes.push_back(id.label());
  for (const auto& [lo, hi] : hasse.edges) edges.push_back({lo.label(), hi.label()});
  return {{"nodes", nodes}, {"edges", edges}};
}

json to_json(const MajorGraph& graph) {
  json nodes = json::array(), parent = json::object(), roots = json::array();
  for (BreakpointId id : graph.nodes) nodes.push_back(id.label());
  for (const auto& [child, par] : graph.parent) parent[child.label()] = par.label();
  for (BreakpointId id : graph.roots) roots.push_back(id.label());
  return {{"nodes", nodes},
          {"parent", parent},
          {"fences", fences_json(graph.fences)},
          {"roots", roots},
          {"strip_roots", graph.strip_roots}};
}

TdTree td_tree_from_json(const json& j) {
  return guarded([&] {
    TdTree t;
    t.n = j.at("n").get<int>();
    t.parents = parents_from(j.at("nodes"));
    t.fences = fences_from(j.at("fences"));
    return t;
  });
}

BetaTree beta_tree_from_json(const json& j) {
  return guarded([&] {
    BetaTree t;
    t.parents = parents_from(j.at("nodes"));
    t.fences = fences_from(j.at("fences"));
    return t;
  });
}

HasseDiagram hasse_from_json(const json& j) {
  return guarded([&] {
    HasseDiagram h;
    for (const json& n : j.at("nodes")) h.nodes.push_back(id_of(n));
    for (const json& e : j.at("edges")) h.edges.emplace_back(id_of(e.at(0)), id_of(e.at(1)));
    return h;
  });
}

MajorGraph major_graph_from_json(const json& j) {
  return guarded([&] {
    MajorGraph g;
    for (const json& n : j.at("nodes")) g.nodes.push_back(id_of(n));
    for (const auto& [child, par] : j.at("parent").items()) g.parent[BreakpointId::parse(child)] = id_of(par);
    g.fences = fences_from(j.at("fences"));
    for (const json& r : j.at("roots")) g.roots.push_back(id_of(r));
    g.strip_roots = j.at("strip_roots").get<bool>();
    return g;
  });
}

}  // namespace tdc
