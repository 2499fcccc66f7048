#pragma once

// DOT and JSON views of trees, Hasse diagrams, major graphs and beta-trees.
// Visual vocabulary: a-nodes are red boxes, b-nodes blue ellipses; major
// edges solid, minor edges dashed, fences bold black.

#include <string>

#include <json.hpp>

#include "tdcount/beta.hpp"
#include "tdcount/td_tree.hpp"

namespace tdc {

std::string to_dot(const TdTree& tree);
std::string to_dot(const HasseDiagram& hasse);
std::string to_dot(const MajorGraph& graph);
std::string to_dot(const BetaTree& tree);

nlohmann::json to_json(const TdTree& tree);
nlohmann::json to_json(const HasseDiagram& hasse);
nlohmann::json to_json(const MajorGraph& graph);
nlohmann::json to_json(const BetaTree& tree);

/// Inverses of to_json; throw ParseError on malformed input.
TdTree td_tree_from_json(const nlohmann::json& j);
HasseDiagram hasse_from_json(const nlohmann::json& j);
MajorGraph major_graph_from_json(const nlohmann::json& j);
BetaTree beta_tree_from_json(const nlohmann::json& j);

}  // namespace tdc
