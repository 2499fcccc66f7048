#include <doctest.h>

#include <algorithm>

#include "tdcount/beta.hpp"
#include "tdcount/export.hpp"

using namespace tdc;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

WordEvolution E() { return WordEvolution({{1, 1}, {1, 0}, {2, 3}}); }

}  // namespace

TEST_CASE("DOT output") {
  std::string one = to_dot(build_2d_tree(WordEvolution()));
  CHECK(count_of(one, "shape=") == 4);
  CHECK(count_of(one, "->") == 5);  // four parent edges and the fence

  std::string tree = to_dot(build_2d_tree(E()));
  CHECK(count_of(tree, "shape=") == 10);
  CHECK(count_of(tree, "style=solid") == 8);
  CHECK(count_of(tree, "style=dashed") == 8);
  CHECK(count_of(tree, "dir=none") == 2);

  std::string major = to_dot(major_graph(build_2d_tree(E())));
  CHECK(count_of(major, "shape=") == 10);
  CHECK(count_of(major, "dir=none") == 2);
}

TEST_CASE("JSON round trips") {
  for_each_word_evolution(3, [](const std::vector<DupChoice>& steps, const Word&) {
    TdTree t = build_2d_tree(WordEvolution(steps));
    CHECK(td_tree_from_json(to_json(t)).parents == t.parents);
    CHECK(td_tree_from_json(to_json(t)).fences == t.fences);
    HasseDiagram h = hasse_diagram(t);
    HasseDiagram h2 = hasse_from_json(to_json(h));
    CHECK(h2.nodes == h.nodes);
    CHECK(h2.edges == h.edges);
    MajorGraph g = major_graph(t);
    CHECK(major_graph_from_json(to_json(g)) == g);
  });
  BetaTree b = fenced_example_tree();
  CHECK(beta_tree_from_json(to_json(b)) == b);
}

TEST_CASE("malformed JSON is rejected") {
  CHECK_THROWS_AS(td_tree_from_json(nlohmann::json::parse(R"({"nodes":[{"id":"1q"}]})")), ParseError);
  CHECK_THROWS_AS(beta_tree_from_json(nlohmann::json::array()), ParseError);
  CHECK_THROWS_AS(BreakpointId::parse("x"), ParseError);
}
