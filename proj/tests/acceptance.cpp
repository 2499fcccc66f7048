// One line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tdcount/beta.hpp"
#include "tdcount/extensions.hpp"
#include "tdcount/simulator.hpp"
#include "tdcount/word.hpp"

using namespace tdc;

namespace {

constexpr double kRecursionSeconds = 1.0;
constexpr double kEnumerationSeconds = 30.0;
constexpr double kSimulatorN4Seconds = 120.0;
constexpr double kWorkedExampleSeconds = 1.0;
constexpr double kSumFormulaSeconds = 300.0;
constexpr std::uint64_t kRandomSeed = 20240601;
constexpr int kRandomTrees = 200;
constexpr std::size_t kRandomMaxNodes = 12;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (!passed) detail << "; ";
    else detail.str("");
    passed = false;
    detail << why;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void criterion_words(Outcome& o) {
  const std::vector<std::uint64_t> expected{1, 3, 22, 377, 15315, 1539281};
  auto t0 = Clock::now();
  for (int n = 1; n <= 6; ++n)
    if (word_count_total(n) != Count(expected[n - 1])) o.fail("recursion n=" + std::to_string(n));
  double rec = seconds_since(t0);
  if (rec >= kRecursionSeconds) o.fail("recursion took " + std::to_string(rec) + " s");

  t0 = Clock::now();
  for (int n = 1; n <= 5; ++n) {
    DistinctWords dw = distinct_words(n, 5);
    if (dw.distinct != expected[n - 1]) o.fail("enumeration n=" + std::to_string(n) + " gave " + std::to_string(dw.distinct));
  }
  for (int n = 1; n <= 4; ++n)
    if (oracle::words_brute(n).distinct.size() != expected[n - 1]) o.fail("string oracle n=" + std::to_string(n));
  double en = seconds_since(t0);
  if (en >= kEnumerationSeconds) o.fail("enumeration took " + std::to_string(en) + " s");
  if (o.passed) o.detail << "1,3,22,377,15315,1539281 (recursion " << rec << " s, enumeration to n=5 " << en << " s)";
}

void criterion_table(Outcome& o) {
  const std::vector<TableRow> expected{{1, 1, 1, 1, 1, 0, 0},
                                       {2, 3, 7, 8, 11, 0, 0},
                                       {3, 22, 225, 288, 627, 0, 0},
                                       {4, 377, 27839, 37572, 154869, 0, 0}};
  double n4 = 0;
  for (const TableRow& want : expected) {
    auto t0 = Clock::now();
    TableRow got = tabulate(want.n);
    if (want.n == 4) n4 = seconds_since(t0);
    if (got.csv() != want.csv()) o.fail("n=" + std::to_string(want.n) + " gave " + got.csv());
  }
  if (n4 >= kSimulatorN4Seconds) o.fail("n=4 took " + std::to_string(n4) + " s");
  if (o.passed) o.detail << "rows n=1..4 exact; n=4 in " << n4 << " s";
}

void criterion_worked_example(Outcome& o) {
  auto t0 = Clock::now();
  TdTree t = build_2d_tree(WordEvolution({{1, 1}, {1, 0}, {2, 3}}));
  ExtensionCount c = count_extensions_formula(major_graph(t));
  std::vector<std::string> factors;
  for (const auto& [site, f] : c.factor_trace) factors.push_back(f.to_string());
  if (c.value != Count(540)) o.fail("count " + c.value.to_string());
  if (factors != std::vector<std::string>{"27", "2", "10"}) o.fail("trace " + c.product_line());
  HasseDiagram h = hasse_diagram(t);
  if (count_extensions_bruteforce(h) != Count(540)) o.fail("library oracle disagrees");
  if (oracle::linear_extensions(h) != 540) o.fail("test oracle disagrees");
  double s = seconds_since(t0);
  if (s >= kWorkedExampleSeconds) o.fail("took " + std::to_string(s) + " s");
  if (o.passed) o.detail << c.product_line() << ", both oracles agree";
}

void criterion_oracle_equivalence(Outcome& o) {
  std::size_t checked = 0, mismatches = 0;
  for (int n = 1; n <= 4; ++n) {
    for_each_word_evolution(n, [&](const std::vector<DupChoice>& steps, const Word&) {
      TdTree t = build_2d_tree(WordEvolution(steps));
      HasseDiagram h = hasse_diagram(t);
      Count f = count_extensions_formula(major_graph(t)).value;
      ++checked;
      if (f != count_extensions_bruteforce(h) || f.raw() != oracle::linear_extensions(h)) ++mismatches;
    });
  }
  if (mismatches) o.fail(std::to_string(mismatches) + " mismatches");
  o.detail << (o.passed ? "" : "; ") << checked << " evolutions, " << mismatches << " mismatches";
}

void criterion_closed_form(Outcome& o) {
  auto t0 = Clock::now();
  for (int n = 1; n <= 5; ++n) {
    Count via_words = total_evolutions_via_words(n, 5);
    if (via_words != closed_form(n) || closed_form(n).raw() != oracle::closed_form(n))
      o.fail("n=" + std::to_string(n) + ": " + via_words.to_string() + " vs " + closed_form(n).to_string());
  }
  double s = seconds_since(t0);
  if (closed_form(5) != Count(156882297)) o.fail("closed_form(5) " + closed_form(5).to_string());
  if (closed_form(6) != Count::parse("640550418651")) o.fail("closed_form(6) " + closed_form(6).to_string());
  if (s >= kSumFormulaSeconds) o.fail("sum over words took " + std::to_string(s) + " s");
  if (o.passed) o.detail << "n=1..5 equal (n=5: 156882297, " << s << " s); closed_form(6) = 640550418651";
}

void criterion_fibers(Outcome& o) {
  std::size_t fibers = 0, violations = 0;
  for (int n = 2; n <= 4; ++n) {
    for_each_word_evolution(n - 1, [&](const std::vector<DupChoice>& steps, const Word&) {
      WordEvolution e(steps);
      Count sum;
      for (const auto& ep : induced_evolutions(e)) {
        TdTree t = build_2d_tree(ep);
        sum += Count(static_cast<std::uint64_t>(oracle::linear_extensions(hasse_diagram(t))));
      }
      unsigned __int128 pow4 = 1;
      for (int i = 0; i < n; ++i) pow4 *= 4;
      unsigned __int128 want = oracle::linear_extensions(hasse_diagram(build_2d_tree(e))) * (pow4 - (2 * n + 1));
      ++fibers;
      if (sum.raw() != want) ++violations;
    });
  }
  if (violations) o.fail(std::to_string(violations) + " violations");
  o.detail << (o.passed ? "" : "; ") << fibers << " fibers, " << violations << " violations";
}

void criterion_kernel(Outcome& o) {
  KernelCheck ex = kernel_check(fenced_example_tree(), 5);
  if (!(ex.lhs == Count(18) && ex.rhs == Count(18))) o.fail("example r=5: " + ex.lhs.to_string() + " vs " + ex.rhs.to_string());

  std::size_t tree_checks = 0, tree_bad = 0;
  for (int n = 1; n <= 4; ++n) {
    for_each_word_evolution(n, [&](const std::vector<DupChoice>& steps, const Word&) {
      for (const KernelCheck& c : kernel_check_all(to_beta_tree(build_2d_tree(WordEvolution(steps))))) {
        ++tree_checks;
        if (!c.equal()) ++tree_bad;
      }
    });
  }
  if (tree_bad) o.fail(std::to_string(tree_bad) + " failures on converted trees");

  std::size_t rand_checks = 0, rand_bad = 0, enum_bad = 0;
  for (int i = 0; i < kRandomTrees; ++i) {
    std::size_t size = 2 + static_cast<std::size_t>(i) % (kRandomMaxNodes - 1);
    BetaTree t = random_beta_tree(kRandomSeed + static_cast<std::uint64_t>(i), size);
    if (!validate_beta_tree(t).passed()) ++rand_bad;
    if (enumerate_beta_subtrees(t).size() != oracle::beta_subtrees_brute(t).size()) ++enum_bad;
    for (const KernelCheck& c : kernel_check_all(t)) {
      ++rand_checks;
      if (!c.equal()) ++rand_bad;
    }
  }
  if (rand_bad) o.fail(std::to_string(rand_bad) + " failures on random trees");
  if (enum_bad) o.fail(std::to_string(enum_bad) + " subtree enumeration mismatches");
  if (o.passed)
    o.detail << "example 18=18; " << tree_checks << " (tree, r) checks on converted trees; " << rand_checks
             << " on " << kRandomTrees << " random trees (seed " << kRandomSeed << ")";
}

void criterion_structure(Outcome& o) {
  std::size_t trees = 0, violations = 0;
  for (int n = 1; n <= 4; ++n) {
    for_each_word_evolution(n, [&](const std::vector<DupChoice>& steps, const Word&) {
      ++trees;
      if (!validate_structure(build_2d_tree(WordEvolution(steps))).passed()) ++violations;
    });
  }
  if (violations) o.fail(std::to_string(violations) + " trees with violations");

  const BreakpointId a1{1, Side::a}, a2{2, Side::a}, b2{2, Side::b}, b3{3, Side::b}, b4{4, Side::b};
  std::vector<std::function<void(TdTree&)>> corruptions{
      [&](TdTree& t) { t.parents.at(a2).major = opposite(t.parents.at(a2).major); },
      [&](TdTree& t) { t.parents.at(b4).a_parent = b3; },
      [&](TdTree& t) { t.parents.at(a1).b_parent = b2; },
      [&](TdTree& t) { t.fences.push_back({a2, b2}); },
  };
  std::size_t caught = 0;
  for (auto& corrupt : corruptions) {
    TdTree t = build_2d_tree(WordEvolution({{1, 1}, {1, 0}, {2, 3}}));
    corrupt(t);
    if (!validate_structure(t).passed()) ++caught;
  }
  if (caught != corruptions.size()) o.fail(std::to_string(corruptions.size() - caught) + " corruptions missed");
  if (o.passed) o.detail << trees << " trees clean; " << caught << "/" << corruptions.size() << " corruptions flagged";
}

void criterion_two_route(Outcome& o) {
  std::size_t pairs = 0, mismatches = 0;
  for (int n = 1; n <= 3; ++n) {
    for_each_word_evolution(n, [&](const std::vector<DupChoice>& steps, const Word&) {
      WordEvolution e(steps);
      TdTree t = build_2d_tree(e);
      for (const auto& ep : induced_evolutions(e)) {
        ++pairs;
        if (!(induced_major_graph(t, one_nodeset_of(e, ep)) == major_graph(build_2d_tree(ep)))) ++mismatches;
      }
    });
  }
  if (mismatches) o.fail(std::to_string(mismatches) + " mismatches");
  o.detail << (o.passed ? "" : "; ") << pairs << " induced pairs, " << mismatches << " mismatches";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, void (*)(Outcome&)>> criteria{
      {"word counts", criterion_words},
      {"simulator rows n<=4", criterion_table},
      {"worked example 540", criterion_worked_example},
      {"formula vs oracle n<=4", criterion_oracle_equivalence},
      {"closed form", criterion_closed_form},
      {"fiber sums n<=4", criterion_fibers},
      {"kernel identity", criterion_kernel},
      {"structural suite", criterion_structure},
      {"two-route major graphs", criterion_two_route},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    auto t0 = Clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    if (!o.passed) ++failed;
    std::cout << (o.passed ? "[PASS] " : "[FAIL] ") << i + 1 << " " << criteria[i].first << ": " << o.detail.str()
              << " (" << seconds_since(t0) << " s)" << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
  return failed ? 1 : 0;
}
