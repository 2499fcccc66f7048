#pragma once

// TD word automaton: words of somatic-connection labels, duplication steps,
// exhaustive enumeration of word evolutions, and the length-count recursion.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "tdcount/count.hpp"

namespace tdc {

using Symbol = std::uint32_t;

class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}

  const std::vector<Symbol>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  // 1-based, matching W(i).
  Symbol at(std::size_t i) const { return symbols_.at(i - 1); }
  Symbol max_symbol() const;
  std::size_t occurrences(Symbol s) const;

  /// Digits when every symbol is <= 9, otherwise comma separated.
  std::string to_string() const;
  static Word parse(std::string_view text);

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  std::vector<Symbol> symbols_;
};

/// Duplicate W(a:b), 1-based inclusive; b == a - 1 is the empty duplication.
struct DupChoice {
  int a = 1;
  int b = 0;

  bool empty_duplication() const { return b == a - 1; }
  bool valid_for(std::size_t word_length) const;

  friend bool operator==(const DupChoice&, const DupChoice&) = default;
  friend auto operator<=>(const DupChoice&, const DupChoice&) = default;
};

/// W(1:a-1) . W(a:b) . s . W(a:b) . W(b+1:N)
Word td_step(const Word& word, DupChoice choice, Symbol new_symbol);

/// Inverse of td_step for a known pair of consecutive words.
DupChoice recover_choice(const Word& before, const Word& after);

/// All legal choices on a word of the given length, in lexicographic (a, b) order.
std::vector<DupChoice> choices_for(std::size_t word_length);

class WordEvolution {
 public:
  /// The single-TD evolution [1].
  WordEvolution();
  /// Throws ValidationError if a step is out of range for its word.
  explicit WordEvolution(std::vector<DupChoice> steps);
  /// Rebuilds the steps from an explicit word sequence W1..Wn.
  static WordEvolution from_words(const std::vector<Word>& words);

  const std::vector<DupChoice>& steps() const { return steps_; }
  const std::vector<Word>& words() const { return words_; }
  const Word& final_word() const { return words_.back(); }
  int td_count() const { return static_cast<int>(words_.size()); }

  std::string to_string() const;  // "[1 -> 121 -> ...]"

  friend bool operator==(const WordEvolution& x, const WordEvolution& y) { return x.steps_ == y.steps_; }
  friend auto operator<=>(const WordEvolution& x, const WordEvolution& y) { return x.steps_ <=> y.steps_; }

 private:
  std::vector<DupChoice> steps_;
  std::vector<Word> words_;
};

WordEvolution parse_evolution(std::string_view json_text);
std::string format_evolution(const WordEvolution& evolution);

/// Called once per evolution on n TDs with the step sequence and terminal word.
using EvolutionVisitor = std::function<void(const std::vector<DupChoice>& steps, const Word& final_word)>;

/// Depth-first in lexicographic order of step sequences. n = 0 visits nothing.
void for_each_word_evolution(int n, const EvolutionVisitor& visit);
/// Restricts the search to evolutions starting with `prefix`.
void for_each_word_evolution_from(const std::vector<DupChoice>& prefix, int n, const EvolutionVisitor& visit);
/// All step prefixes of the given length, for partitioning work.
std::vector<std::vector<DupChoice>> evolution_prefixes(int depth);

std::vector<WordEvolution> enumerate_word_evolutions(int n, std::size_t max_results = 1'000'000);

struct DistinctWords {
  std::size_t evolutions = 0;
  std::size_t distinct = 0;
  std::size_t collisions = 0;  // derivations whose word was already seen
  std::map<std::size_t, std::size_t> by_length;
  std::unordered_set<std::string> words;  // canonical text; filled only when requested
};

/// Distinct terminal words at n. Throws BudgetExceeded when n > max_n.
/// Collisions between derivations are counted, never merged silently.
DistinctWords distinct_words(int n, int max_n = 6, bool keep_words = false);

/// Memoized w_{m,n} table.
class WordCountTable {
 public:
  Count operator()(std::size_t m, int n);
  Count total(int n);

 private:
  std::map<std::pair<std::size_t, int>, Count> memo_;
};

Count word_count_recursion(std::size_t m, int n);
Count word_count_total(int n);

}  // namespace tdc
