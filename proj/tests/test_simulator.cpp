#include <doctest.h>

#include <filesystem>
#include <map>
#include <set>

#include <json.hpp>

#include "tdcount/extensions.hpp"
#include "tdcount/simulator.hpp"

using namespace tdc;

namespace {

using Cnv = std::vector<std::uint32_t>;

std::vector<TdEvolutionRecord> all_records(int n) {
  std::vector<TdEvolutionRecord> out;
  enumerate_process(n, [&](const TdEvolutionRecord& r) { out.push_back(r); });
  return out;
}

}  // namespace

TEST_CASE("initial state and first TD") {
  GenomeState s;
  CHECK(word_of(s).empty());
  auto first = enumerate_choices(s);
  REQUIRE(first.size() == 1);
  CHECK(first[0] == TdChoice{0, 0, std::nullopt});
  GenomeState one = apply_td(s, first[0]);
  CHECK(word_of(one) == Word::parse("1"));
  CHECK(copy_numbers(one) == Cnv{1, 2, 1});
  CHECK(enumerate_choices(one).size() == 11);
}

TEST_CASE("order flag only for two cuts in distinct copies of one interval") {
  GenomeState s = apply_td(GenomeState{}, {0, 0, std::nullopt});
  for (const TdChoice& c : enumerate_choices(s)) {
    bool same_interval = c.g1 != c.g2 && s.genome[c.g1] == s.genome[c.g2];
    CHECK(c.a_first.has_value() == same_interval);
  }
}

TEST_CASE("BCD then DB across the join") {
  GenomeState s = apply_td(GenomeState{}, {0, 0, std::nullopt});
  std::set<Cnv> after_two;
  for (const TdChoice& c : enumerate_choices(s)) {
    GenomeState t = apply_td(s, c);
    after_two.insert(copy_numbers(t));
    CHECK(t.genome.size() >= s.genome.size());
  }
  CHECK(after_two.count(Cnv{1, 3, 2, 3, 1}) == 1);
  CHECK(after_two.count(Cnv{1, 2, 3, 2, 1}) == 1);

  bool seen = false;
  for (const auto& r : all_records(2)) {
    if (r.graphs[0].cnv == Cnv{1, 2, 2, 2, 1} && r.graphs[1].cnv == Cnv{1, 3, 2, 3, 1}) seen = true;
  }
  CHECK(seen);
}

TEST_CASE("n=2 records: 11 total, 3+3+5 by word, word-12 CNVs") {
  auto records = all_records(2);
  CHECK(records.size() == 11);
  std::map<std::string, int> by_word;
  std::multiset<Cnv> word12_cnvs;
  for (const auto& r : records) {
    std::string w = r.word_evolution.final_word().to_string();
    ++by_word[w];
    if (w == "12") word12_cnvs.insert(r.graphs.back().cnv);
  }
  CHECK(by_word == std::map<std::string, int>{{"12", 3}, {"21", 3}, {"121", 5}});
  CHECK(word12_cnvs == std::multiset<Cnv>{{1, 2, 3, 2, 1}, {1, 2, 3, 2, 1}, {1, 2, 1, 2, 1}});
}

TEST_CASE("records per word match the formula count for n <= 3") {
  for (int n = 1; n <= 3; ++n) {
    std::map<WordEvolution, std::uint64_t> per_evolution;
    std::set<std::string> keys;
    for (const auto& r : all_records(n)) {
      ++per_evolution[r.word_evolution];
      keys.insert(r.canonical_bytes());
    }
    std::size_t evolutions = 0;
    for_each_word_evolution(n, [&](const std::vector<DupChoice>& steps, const Word&) {
      WordEvolution e(steps);
      ++evolutions;
      CHECK(Count(per_evolution[e]) == evolutions_for(e));
    });
    CHECK(per_evolution.size() == evolutions);
    std::uint64_t total = 0;
    for (auto& [_, c] : per_evolution) total += c;
    CHECK(keys.size() == total);
  }
}

TEST_CASE("graph invariants") {
  for (const auto& r : all_records(3)) {
    REQUIRE(r.graphs.size() == 3);
    CHECK(r.final_order.size() == 6);
    for (std::size_t k = 0; k < r.graphs.size(); ++k) {
      const TdGraph& g = r.graphs[k];
      CHECK(g.cnv.size() == 7);
      CHECK(g.cnv.front() == 1);
      CHECK(g.cnv.back() == 1);
      CHECK(*std::min_element(g.cnv.begin(), g.cnv.end()) >= 1);
      CHECK(g.connections.size() == k + 1);
      CHECK(std::is_sorted(g.connections.begin(), g.connections.end()));
      for (const Connection& c : g.connections) CHECK(c.reversed == (c.from > c.to));
      if (k > 0)
        for (std::size_t i = 0; i < g.cnv.size(); ++i) CHECK(g.cnv[i] >= r.graphs[k - 1].cnv[i]);
    }
  }
}

TEST_CASE("record JSON") {
  auto records = all_records(2);
  auto j = nlohmann::json::parse(records.front().to_json());
  CHECK(j["graphs"].size() == 2);
  CHECK(j["graphs"][0]["cnv"].size() == 5);
  CHECK(j["steps"].size() == 1);
  CHECK(j.contains("word"));
  CHECK(j["final_order"].size() == 4);
}

TEST_CASE("tabulate rows") {
  CHECK(tabulate(1) == TableRow{1, 1, 1, 1, 1, 1, 1});
  CHECK(tabulate(2) == TableRow{2, 3, 7, 8, 11, 11, 10});
  TableRow three = tabulate(3);
  CHECK(three.csv() == "3,22,225,288,627");
  CHECK(three.choice_paths == 627);
}

TEST_CASE("worker count, full compare and spill mode do not change the row") {
  TableRow base = tabulate(3);
  ProcessOptions opt;
  opt.workers = 3;
  CHECK(tabulate(3, opt) == base);
  opt.full_compare = true;
  CHECK(tabulate(3, opt) == base);

  ProcessOptions spill;
  spill.workers = 2;
  spill.spill_dir = (std::filesystem::temp_directory_path() / "tdcount-test-spill").string();
  TableRow s = tabulate(3, spill);
  CHECK(s.evolutions == base.evolutions);
  CHECK(s.words == base.words);
  CHECK(s.cnvs == base.cnvs);
  CHECK(s.td_graphs == base.td_graphs);
}

TEST_CASE("budgets") {
  CHECK_THROWS_AS(tabulate(5), BudgetExceeded);
  ProcessOptions tiny;
  tiny.max_memory_bytes = 1024;
  CHECK_THROWS_AS(tabulate(4, tiny), BudgetExceeded);
}
