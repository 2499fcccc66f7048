#include <doctest.h>

#include "oracles.hpp"
#include "tdcount/beta.hpp"
#include "tdcount/word.hpp"

using namespace tdc;

TEST_CASE("td_step splices the duplicated block around the new symbol") {
  CHECK(td_step(Word::parse("3121"), {2, 3}, 4) == Word::parse("3124121"));
  CHECK(td_step(Word::parse("1"), {1, 0}, 2) == Word::parse("21"));
  CHECK(td_step(Word::parse("1"), {1, 1}, 2) == Word::parse("121"));
  CHECK(td_step(Word::parse("1"), {2, 1}, 2) == Word::parse("12"));
  CHECK_THROWS_AS(td_step(Word::parse("1"), {3, 2}, 2), IndexOutOfRange);
  CHECK_THROWS_AS(td_step(Word::parse("1"), {1, 2}, 2), IndexOutOfRange);
}

TEST_CASE("word parsing and printing") {
  CHECK(Word::parse("3124121").size() == 7);
  CHECK(Word::parse("10,2,1").to_string() == "10,2,1");
  CHECK_THROWS_AS(Word::parse("1x"), ParseError);
  CHECK_THROWS_AS(Word::parse("1,,2"), ParseError);
  CHECK_THROWS_AS(Word::parse("0"), ParseError);
}

TEST_CASE("recover_choice inverts td_step on every n=4 derivation") {
  for_each_word_evolution(4, [](const std::vector<DupChoice>& steps, const Word&) {
    WordEvolution e(steps);
    CHECK(WordEvolution::from_words(e.words()) == e);
  });
  CHECK_THROWS_AS(recover_choice(Word::parse("1"), Word::parse("1")), ValidationError);
  CHECK_THROWS_AS(recover_choice(Word::parse("121"), Word::parse("12231")), ValidationError);
}

TEST_CASE("evolution JSON") {
  WordEvolution e = parse_evolution(R"({"steps":[[1,1],[1,0],[2,3]]})");
  CHECK(e.to_string() == "[1 -> 121 -> 3121 -> 3124121]");
  CHECK(format_evolution(e) == R"({"steps":[[1,1],[1,0],[2,3]]})");
  CHECK(parse_evolution(format_evolution(e)) == e);
  CHECK(parse_evolution(R"({"steps":[]})").to_string() == "[1]");
  CHECK_THROWS_AS(parse_evolution("{"), ParseError);
  CHECK_THROWS_AS(parse_evolution(R"({"steps":[[1]]})"), ParseError);
  CHECK_THROWS_AS(parse_evolution(R"({"steps":[[5,5]]})"), ValidationError);
}

TEST_CASE("word invariants along every n=4 evolution") {
  for_each_word_evolution(4, [](const std::vector<DupChoice>& steps, const Word&) {
    WordEvolution e(steps);
    for (std::size_t k = 1; k <= e.words().size(); ++k) {
      const Word& w = e.words()[k - 1];
      CHECK(w.occurrences(static_cast<Symbol>(k)) == 1);
      CHECK(w.max_symbol() == k);
      for (Symbol s = 1; s <= k; ++s) CHECK(w.occurrences(s) >= 1);
      CHECK(w.size() >= k);
      CHECK(w.size() <= (std::size_t{1} << k) - 1);
    }
  });
}

TEST_CASE("small enumerations") {
  CHECK(enumerate_word_evolutions(1).size() == 1);
  auto two = enumerate_word_evolutions(2);
  std::set<std::string> finals;
  for (const auto& e : two) finals.insert(e.final_word().to_string());
  CHECK(finals == std::set<std::string>{"12", "21", "121"});
  CHECK(enumerate_word_evolutions(4).size() == 377);
  CHECK_THROWS_AS(enumerate_word_evolutions(4, 10), BudgetExceeded);
}

TEST_CASE("distinct words agree with a string-splicing oracle") {
  for (int n = 1; n <= 4; ++n) {
    oracle::WordCensus c = oracle::words_brute(n);
    DistinctWords dw = distinct_words(n, 5, true);
    CHECK(dw.distinct == c.distinct.size());
    CHECK(dw.evolutions == c.derivations);
    CHECK(dw.words == std::unordered_set<std::string>(c.distinct.begin(), c.distinct.end()));
  }
  CHECK(distinct_words(3).distinct == 22);
  CHECK_THROWS_AS(distinct_words(6, 5), BudgetExceeded);
}

TEST_CASE("length recursion against enumerated lengths") {
  CHECK(word_count_recursion(5, 3) == Count(5));
  CHECK(word_count_recursion(1, 1) == Count(1));
  CHECK(word_count_recursion(7, 3) == Count(1));
  CHECK(word_count_recursion(8, 3) == Count(0));
  CHECK(word_count_recursion(2, 3) == Count(0));
  for (int n = 1; n <= 4; ++n) {
    std::map<std::size_t, std::size_t> by_len;
    for (const auto& w : oracle::words_brute(n).distinct) ++by_len[w.size()];
    for (auto [m, c] : by_len) CHECK(word_count_recursion(m, n) == Count(c));
  }
  const std::vector<std::uint64_t> totals{1, 3, 22, 377, 15315, 1539281};
  for (int n = 1; n <= 6; ++n) CHECK(word_count_total(n) == Count(totals[n - 1]));
}

TEST_CASE("five words of length five at n=3") {
  std::set<std::string> five;
  for (const auto& w : oracle::words_brute(3).distinct)
    if (w.size() == 5) five.insert(w);
  CHECK(five == std::set<std::string>{"12312", "21321", "13121", "12321", "12131"});
}

TEST_CASE("delete_first_td") {
  auto evo = [](std::initializer_list<const char*> ws) {
    std::vector<Word> v;
    for (const char* w : ws) v.push_back(Word::parse(w));
    return WordEvolution::from_words(v);
  };
  CHECK(delete_first_td(evo({"1", "12", "12312", "1412312", "1412352312"})) == evo({"1", "121", "3121", "3124121"}));
  CHECK(delete_first_td(evo({"1", "12"})) == WordEvolution());
  CHECK(delete_first_td(evo({"1", "21"})) == WordEvolution());
  CHECK(delete_first_td(evo({"1", "121"})) == WordEvolution());
  CHECK(delete_symbol_one(Word::parse("1412352312")) == Word::parse("3124121"));
}
