// tdcount: word counts, extension counts, Table-style rows, verification
// sweeps and graph export for tandem duplication processes.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tdcount/beta.hpp"
#include "tdcount/export.hpp"
#include "tdcount/extensions.hpp"
#include "tdcount/simulator.hpp"
#include "tdcount/word.hpp"

namespace {

using nlohmann::ordered_json;
using namespace tdc;

constexpr int kExitError = 1;
constexpr int kExitBudget = 2;
constexpr int kExitMismatch = 3;

struct EvolutionArg {
  std::string source;  // file path or inline JSON
  std::string words;   // "1 121 3121"
};

WordEvolution load_evolution(const EvolutionArg& arg) {
  if (!arg.words.empty()) {
    std::vector<Word> words;
    std::string text = arg.words;
    for (char& c : text)
      if (c == '>' || c == '-') c = ' ';
    std::istringstream in(text);
    for (std::string tok; in >> tok;) words.push_back(Word::parse(tok));
    return WordEvolution::from_words(words);
  }
  if (arg.source.empty()) throw ValidationError("give an evolution file, inline JSON, or --words");
  if (arg.source.front() == '{') return parse_evolution(arg.source);
  std::ifstream in(arg.source);
  if (!in) throw ValidationError("cannot read " + arg.source);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_evolution(buf.str());
}

void add_evolution_options(CLI::App* cmd, EvolutionArg& arg) {
  cmd->add_option("evolution", arg.source, "Evolution JSON file or inline {\"steps\":[[a,b],...]}");
  cmd->add_option("--words", arg.words, "Word sequence, e.g. \"1 121 3121\"");
}

// Collects named pass/fail lines for the verify and beta commands.
struct CheckLog {
  ordered_json checks = ordered_json::array();
  bool ok = true;

  void add(const std::string& name, bool passed, const std::string& detail) {
    ok = ok && passed;
    checks.push_back({{"name", name}, {"passed", passed}, {"detail", detail}});
  }
  int emit(const std::string& format, const std::string& title) const {
    if (format == "json") {
      std::cout << ordered_json{{"suite", title}, {"passed", ok}, {"checks", checks}}.dump(2) << '\n';
    } else {
      for (const auto& c : checks)
        std::cout << (c["passed"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << ": "
                  << c["detail"].get<std::string>() << '\n';
      std::cout << title << ": " << (ok ? "all checks passed" : "FAILURES") << '\n';
    }
    return ok ? 0 : kExitMismatch;
  }
};

int cmd_words(int n, bool recursion, bool enumerate, bool deep, const std::string& format) {
  if (!recursion && !enumerate) recursion = true;
  ordered_json out{{"n", n}};
  Count rec_total;
  if (recursion) {
    WordCountTable table;
    ordered_json rows = ordered_json::array();
    const std::size_t max_len = (std::size_t{1} << n) - 1;
    for (std::size_t m = static_cast<std::size_t>(n); m <= max_len; ++m) {
      Count w = table(m, n);
      if (w == Count(0)) continue;
      rows.push_back({{"m", m}, {"w", w.to_string()}});
      if (format == "text") std::cout << "w(" << m << "," << n << ") = " << w << '\n';
    }
    rec_total = table.total(n);
    out["by_length"] = rows;
    out["recursion_total"] = rec_total.to_string();
    if (format == "text") std::cout << "total " << rec_total << " (recursion)\n";
  }
  int code = 0;
  if (enumerate) {
    DistinctWords dw = distinct_words(n, deep ? 6 : 5);
    out["enumerated_total"] = dw.distinct;
    out["evolutions"] = dw.evolutions;
    out["collisions"] = dw.collisions;
    if (format == "text")
      std::cout << "total " << dw.distinct << " (enumeration, " << dw.evolutions << " derivations, "
                << dw.collisions << " collisions)\n";
    if (recursion && Count(dw.distinct) != rec_total) {
      std::cerr << "mismatch: recursion " << rec_total << " vs enumeration " << dw.distinct << '\n';
      code = kExitMismatch;
    }
  }
  if (format == "json") std::cout << out.dump(2) << '\n';
  return code;
}

int cmd_count(const EvolutionArg& arg, bool oracle, const std::string& format) {
  WordEvolution e = load_evolution(arg);
  TdTree tree = build_2d_tree(e);
  ExtensionCount count = count_extensions_formula(major_graph(tree));
  ordered_json out{{"evolution", e.to_string()}, {"count", count.value.to_string()}};
  ordered_json trace = ordered_json::array();
  for (const auto& [site, factor] : count.factor_trace) trace.push_back({{"site", site.label()}, {"factor", factor.to_string()}});
  out["factor_trace"] = trace;
  out["product"] = count.product_line();
  int code = 0;
  if (oracle) {
    Count brute = count_extensions_bruteforce(hasse_diagram(tree));
    out["oracle"] = brute.to_string();
    out["agree"] = brute == count.value;
    if (brute != count.value) code = kExitMismatch;
  }
  if (format == "json") {
    std::cout << out.dump(2) << '\n';
  } else {
    std::cout << e.to_string() << '\n' << count.trace_lines() << count.product_line() << '\n';
    if (oracle) std::cout << "oracle " << out["oracle"].get<std::string>() << (code ? " MISMATCH" : " agrees") << '\n';
  }
  if (code) std::cerr << "formula and oracle disagree\n";
  return code;
}

struct TableArgs {
  int n = 4;
  int workers = 1;
  bool full_compare = false;
  bool deep = false;
  std::string spill_dir;
  std::string records;
  std::string format = "csv";
};

int cmd_table(const TableArgs& a) {
  ProcessOptions opt;
  opt.workers = a.workers;
  opt.full_compare = a.full_compare;
  if (a.n > opt.max_n) {
    if (!a.deep) throw BudgetExceeded("n=" + std::to_string(a.n) + " needs --deep (disk-backed dedup)");
    opt.spill_dir = a.spill_dir.empty() ? (std::filesystem::temp_directory_path() / "tdcount-spill").string()
                                        : a.spill_dir;
    opt.progress = [](std::size_t done, std::size_t total) {
      std::cerr << "\rprefix " << done << "/" << total << std::flush;
      if (done == total) std::cerr << '\n';
    };
  }
  if (!a.records.empty()) {
    std::ofstream out(a.records);
    if (!out) throw ValidationError("cannot write " + a.records);
    enumerate_process(a.n, [&](const TdEvolutionRecord& r) { out << r.to_json() << '\n'; }, opt);
  }
  TableRow row = tabulate(a.n, opt);
  if (a.format == "json") {
    ordered_json j{{"n", row.n},
                   {"words", row.words},
                   {"cnvs", row.cnvs},
                   {"td_graphs", row.td_graphs},
                   {"evolutions", row.evolutions},
                   {"choice_paths", row.choice_paths},
                   {"graph_sequences", nullptr}};
    if (opt.spill_dir.empty()) j["graph_sequences"] = row.graph_sequences;
    std::cout << j.dump(2) << '\n';
  } else if (a.format == "text") {
    std::cout << "TDs " << row.n << "\nwords " << row.words << "\nCNVs " << row.cnvs << "\nTD-Graphs " << row.td_graphs
              << "\nTD-Evolutions " << row.evolutions << "\nchoice paths " << row.choice_paths
              << "\nTD-Graph sequences ";
    if (opt.spill_dir.empty()) std::cout << row.graph_sequences << '\n';
    else std::cout << "not tracked in spill mode\n";
  } else {
    std::cout << "n,words,cnvs,td_graphs,evolutions\n" << row.csv() << '\n';
  }
  return 0;
}

void verify_structure(int n, CheckLog& log) {
  for (int k = 1; k <= n; ++k) {
    std::size_t trees = 0, violations = 0, mismatches = 0;
    for_each_word_evolution(k, [&](const std::vector<DupChoice>& steps, const Word&) {
      TdTree t = build_2d_tree(WordEvolution(steps));
      ++trees;
      if (!validate_structure(t).passed()) ++violations;
      if (count_extensions_formula(major_graph(t)).value != count_extensions_bruteforce(hasse_diagram(t)))
        ++mismatches;
    });
    log.add("structure n=" + std::to_string(k), violations == 0,
            std::to_string(trees) + " trees, " + std::to_string(violations) + " with violations");
    log.add("formula-vs-oracle n=" + std::to_string(k), mismatches == 0,
            std::to_string(mismatches) + " mismatches over " + std::to_string(trees) + " evolutions");
  }
  TdTree bad = build_2d_tree(WordEvolution({{1, 1}, {1, 0}}));
  auto& p = bad.parents.at({2, Side::a});
  p.major = opposite(p.major);
  log.add("negative-control", !validate_structure(bad).passed(), "swapped major flag on 2a is flagged");
}

void verify_kernel(int n, const std::optional<std::uint64_t>& seed, int trees, CheckLog& log) {
  BetaTree example = fenced_example_tree();
  KernelCheck k5 = kernel_check(example, 5);
  log.add("kernel example r=5", k5.equal() && k5.rhs == Count(18),
          k5.lhs.to_string() + " = " + k5.rhs.to_string() + " over " + std::to_string(k5.subtrees) + " subtrees");
  for (int k = 1; k <= n; ++k) {
    std::size_t checks = 0, bad = 0;
    for_each_word_evolution(k, [&](const std::vector<DupChoice>& steps, const Word&) {
      for (const KernelCheck& c : kernel_check_all(to_beta_tree(build_2d_tree(WordEvolution(steps))))) {
        ++checks;
        if (!c.equal()) ++bad;
      }
    });
    log.add("kernel 2d-trees n=" + std::to_string(k), bad == 0,
            std::to_string(bad) + " failures over " + std::to_string(checks) + " (tree, r) pairs");
  }
  if (seed) {
    std::size_t checks = 0, bad = 0;
    for (int i = 0; i < trees; ++i) {
      BetaTree t = random_beta_tree(*seed + static_cast<std::uint64_t>(i), 2 + static_cast<std::size_t>(i % 11));
      for (const KernelCheck& c : kernel_check_all(t)) {
        ++checks;
        if (!c.equal()) ++bad;
      }
    }
    log.add("kernel random trees", bad == 0,
            std::to_string(trees) + " trees, " + std::to_string(bad) + " failures over " + std::to_string(checks) +
                " (tree, r) pairs");
  }
}

void verify_induction(int n, CheckLog& log) {
  for (int k = 2; k <= n; ++k) {
    std::size_t fibers = 0, bad = 0, graph_bad = 0, covered = 0;
    for_each_word_evolution(k - 1, [&](const std::vector<DupChoice>& steps, const Word&) {
      WordEvolution e(steps);
      TdTree t = build_2d_tree(e);
      std::vector<WordEvolution> fiber = induced_evolutions(e);
      covered += fiber.size();
      Count sum;
      for (const WordEvolution& ep : fiber) {
        sum += evolutions_for(ep);
        if (!(induced_major_graph(t, one_nodeset_of(e, ep)) == major_graph(build_2d_tree(ep)))) ++graph_bad;
      }
      ++fibers;
      if (sum != evolutions_for(e) * evolution_factor(static_cast<unsigned>(k))) ++bad;
    });
    std::size_t total = 0;
    for_each_word_evolution(k, [&](const std::vector<DupChoice>&, const Word&) { ++total; });
    log.add("fiber sums n=" + std::to_string(k), bad == 0,
            std::to_string(bad) + " violations over " + std::to_string(fibers) + " fibers");
    log.add("fiber partition n=" + std::to_string(k), covered == total,
            std::to_string(covered) + " induced vs " + std::to_string(total) + " evolutions");
    log.add("two-route major graphs n=" + std::to_string(k), graph_bad == 0,
            std::to_string(graph_bad) + " mismatches over " + std::to_string(covered) + " pairs");
  }
}

void verify_grand_total(int n, bool deep, int workers, CheckLog& log) {
  Count closed = closed_form(n);
  Count words = total_evolutions_via_words(n, deep ? 6 : 5, workers);
  log.add("sum-formula n=" + std::to_string(n), words == closed, words.to_string() + " vs closed form " + closed.to_string());
  if (n <= 4 || (deep && n == 5)) {
    ProcessOptions opt;
    opt.workers = workers;
    if (n > opt.max_n) opt.spill_dir = (std::filesystem::temp_directory_path() / "tdcount-spill").string();
    TableRow row = tabulate(n, opt);
    log.add("simulator n=" + std::to_string(n), Count(row.evolutions) == closed,
            std::to_string(row.evolutions) + " distinct records vs closed form " + closed.to_string());
  }
}

int cmd_induce(const EvolutionArg& arg, const std::string& format) {
  WordEvolution e = load_evolution(arg);
  TdTree t = build_2d_tree(e);
  const unsigned next = static_cast<unsigned>(e.td_count() + 1);
  ordered_json rows = ordered_json::array();
  Count sum;
  for (const WordEvolution& ep : induced_evolutions(e)) {
    OneNodeset nodeset = one_nodeset_of(e, ep);
    Count c = evolutions_for(ep);
    sum += c;
    rows.push_back({{"evolution", ep.to_string()}, {"nodeset", nodeset.to_string()}, {"count", c.to_string()}});
    if (format == "text") std::cout << ep.to_string() << "  N=" << nodeset.to_string() << "  count=" << c << '\n';
  }
  Count expected = evolutions_for(e) * evolution_factor(next);
  if (format == "json") {
    std::cout << ordered_json{{"evolution", e.to_string()},
                              {"induced", rows},
                              {"sum", sum.to_string()},
                              {"expected", expected.to_string()}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << "sum " << sum << " expected " << expected << (sum == expected ? " ok" : " MISMATCH") << '\n';
  }
  return sum == expected ? 0 : kExitMismatch;
}

int cmd_beta(const std::optional<std::uint64_t>& seed, int trees, std::size_t max_size, const std::string& tree_file,
             bool example, const std::string& format) {
  CheckLog log;
  auto sweep = [&](const BetaTree& t, const std::string& name, bool per_r) {
    StructureReport rep = validate_beta_tree(t);
    if (!rep.passed()) {
      log.add(name + " validity", false, rep.summary());
      return;
    }
    for (const KernelCheck& c : kernel_check_all(t)) {
      if (per_r || !c.equal())
        log.add(name + " r=" + std::to_string(c.r), c.equal(),
                c.lhs.to_string() + " vs " + c.rhs.to_string() + " (" + std::to_string(c.subtrees) + " subtrees)");
    }
  };
  if (example) sweep(fenced_example_tree(), "example", true);
  if (!tree_file.empty()) {
    std::ifstream in(tree_file);
    if (!in) throw ValidationError("cannot read " + tree_file);
    sweep(beta_tree_from_json(nlohmann::json::parse(in)), tree_file, true);
  }
  if (seed) {
    if (max_size < 2) throw ValidationError("--max-size must be at least 2");
    std::size_t before = log.checks.size();
    for (int i = 0; i < trees; ++i) {
      std::size_t size = 2 + static_cast<std::size_t>(i) % (max_size - 1);
      sweep(random_beta_tree(*seed + static_cast<std::uint64_t>(i), size), "seed " + std::to_string(*seed + i), false);
    }
    if (log.checks.size() == before)
      log.add("random sweep", true, std::to_string(trees) + " trees up to " + std::to_string(max_size) + " nodes");
  }
  if (log.checks.empty()) throw ValidationError("beta needs --seed, --tree or --example");
  return log.emit(format, "beta");
}

int cmd_export(const EvolutionArg& arg, const std::string& what, const std::string& format, const std::string& path) {
  TdTree t = build_2d_tree(load_evolution(arg));
  std::string text;
  if (what == "tree") {
    text = format == "dot" ? to_dot(t) : to_json(t).dump(2) + "\n";
  } else if (what == "hasse") {
    HasseDiagram h = hasse_diagram(t);
    text = format == "dot" ? to_dot(h) : to_json(h).dump(2) + "\n";
  } else {
    MajorGraph g = major_graph(t);
    text = format == "dot" ? to_dot(g) : to_json(g).dump(2) + "\n";
  }
  if (path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counting tandem duplication evolutions"};
  app.require_subcommand(1);

  int n = 4;
  int workers = 1;
  bool deep = false;
  std::string format = "text";
  std::optional<std::uint64_t> seed;
  EvolutionArg evo;

  auto* words = app.add_subcommand("words", "Count TD words via the recursion and/or enumeration");
  bool recursion = false, enumerate = false;
  words->add_option("-n", n, "Number of TDs")->required()->check(CLI::Range(1, 40));
  words->add_flag("--recursion", recursion, "Use the length recursion");
  words->add_flag("--enumerate", enumerate, "Enumerate word evolutions");
  words->add_flag("--deep", deep, "Allow enumeration at n=6");
  words->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  auto* count = app.add_subcommand("count", "Count TD-Evolutions for one word evolution");
  bool oracle = false;
  add_evolution_options(count, evo);
  count->add_flag("--oracle", oracle, "Cross-check against the order-ideal count");
  count->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  auto* table = app.add_subcommand("table", "Simulate the TD process and count distinct objects");
  TableArgs targs;
  table->add_option("-n", targs.n, "Number of TDs")->required()->check(CLI::Range(1, 6));
  table->add_option("--workers", targs.workers)->check(CLI::PositiveNumber);
  table->add_flag("--full-compare", targs.full_compare, "Dedup on full canonical bytes instead of 128-bit hashes");
  table->add_flag("--deep", targs.deep, "Allow n=5 with disk-backed dedup");
  table->add_option("--spill-dir", targs.spill_dir, "Directory for deep-mode spill files");
  table->add_option("--records", targs.records, "Write every record as JSON lines");
  table->add_option("--format", targs.format)->check(CLI::IsMember({"csv", "json", "text"}));

  auto* verify = app.add_subcommand("verify", "Run verification sweeps");
  std::string suite = "all";
  int trees = 200;
  verify->add_option("-n", n, "Largest TD count swept")->required()->check(CLI::Range(1, 6));
  verify->add_option("--suite", suite)->check(CLI::IsMember({"structure", "kernel", "induction", "grand-total", "all"}));
  verify->add_option("--seed", seed, "Seed for random beta-trees (kernel suite)");
  verify->add_option("--trees", trees, "Random beta-trees to sweep")->check(CLI::PositiveNumber);
  verify->add_option("--workers", workers)->check(CLI::PositiveNumber);
  verify->add_flag("--deep", deep, "Allow the long n=5/6 routes");
  verify->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  auto* exp = app.add_subcommand("export", "Export a 2d-tree, Hasse diagram or major graph");
  std::string what = "tree", out_path, exp_format = "dot";
  add_evolution_options(exp, evo);
  exp->add_option("--what", what)->check(CLI::IsMember({"tree", "hasse", "major"}));
  exp->add_option("--format", exp_format)->check(CLI::IsMember({"dot", "json"}));
  exp->add_option("-o,--output", out_path);

  auto* induce = app.add_subcommand("induce", "List the induced evolutions of one word evolution");
  add_evolution_options(induce, evo);
  induce->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  auto* beta = app.add_subcommand("beta", "Kernel identity sweeps over beta-trees");
  std::size_t max_size = 12;
  std::string tree_file;
  bool example = false;
  beta->add_option("--seed", seed, "Seed for random beta-trees");
  beta->add_option("--trees", trees, "Number of random trees")->check(CLI::PositiveNumber);
  beta->add_option("--max-size", max_size, "Largest random tree");
  beta->add_option("--tree", tree_file, "Beta-tree JSON file");
  beta->add_flag("--example", example, "Include the seven-node fenced example");
  beta->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*words) return cmd_words(n, recursion, enumerate, deep, format);
    if (*count) return cmd_count(evo, oracle, format);
    if (*table) return cmd_table(targs);
    if (*exp) return cmd_export(evo, what, exp_format, out_path);
    if (*induce) return cmd_induce(evo, format);
    if (*beta) return cmd_beta(seed, trees, max_size, tree_file, example, format);
    if (*verify) {
      CheckLog log;
      const bool all = suite == "all";
      if (all || suite == "structure") verify_structure(n, log);
      if (all || suite == "kernel") verify_kernel(n, seed, trees, log);
      if (all || suite == "induction") verify_induction(n, log);
      if (all || suite == "grand-total") verify_grand_total(n, deep, workers, log);
      return log.emit(format, "verify " + suite);
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
