#include "tdcount/word.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace tdc {

Symbol Word::max_symbol() const {
  return symbols_.empty() ? 0 : *std::max_element(symbols_.begin(), symbols_.end());
}

std::size_t Word::occurrences(Symbol s) const {
  return static_cast<std::size_t>(std::count(symbols_.begin(), symbols_.end(), s));
}

std::string Word::to_string() const {
  std::string out;
  bool digits = max_symbol() <= 9;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    if (!digits && i > 0) out.push_back(',');
    out += std::to_string(symbols_[i]);
  }
  return out;
}

Word Word::parse(std::string_view text) {
  std::vector<Symbol> out;
  if (text.find(',') == std::string_view::npos) {
    for (std::size_t i = 0; i < text.size(); ++i) {
      char ch = text[i];
      if (ch < '1' || ch > '9') throw ParseError("word symbol must be a digit 1-9", i);
      out.push_back(static_cast<Symbol>(ch - '0'));
    }
    return Word(std::move(out));
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view tok = text.substr(start, end - start);
    if (tok.empty()) throw ParseError("empty word symbol", start);
    Symbol v = 0;
    for (std::size_t i = 0; i < tok.size(); ++i) {
      if (tok[i] < '0' || tok[i] > '9') throw ParseError("bad word symbol", start + i);
      v = v * 10 + static_cast<Symbol>(tok[i] - '0');
    }
    if (v == 0) throw ParseError("word symbols are positive", start);
    out.push_back(v);
    start = end + 1;
  }
  return Word(std::move(out));
}

bool DupChoice::valid_for(std::size_t word_length) const {
  auto len = static_cast<long>(word_length);
  return a >= 1 && a <= len + 1 && b >= a - 1 && b <= len;
}

Word td_step(const Word& word, DupChoice choice, Symbol new_symbol) {
  if (!choice.valid_for(word.size())) {
    throw IndexOutOfRange("duplication (" + std::to_string(choice.a) + "," + std::to_string(choice.b) +
                          ") out of range for word of length " + std::to_string(word.size()));
  }
  const auto& w = word.symbols();
  auto first = w.begin() + (choice.a - 1);
  auto last = w.begin() + choice.b;  // one past W(b)
  std::vector<Symbol> out;
  out.reserve(w.size() + static_cast<std::size_t>(choice.b - choice.a + 2));
  out.insert(out.end(), w.begin(), last);
  out.push_back(new_symbol);
  out.insert(out.end(), first, w.end());
  return Word(std::move(out));
}

DupChoice recover_choice(const Word& before, const Word& after) {
  const auto& w = after.symbols();
  if (w.size() < before.size() + 1) {
    throw ValidationError("word " + after.to_string() + " is not one step from " + before.to_string());
  }
  Symbol fresh = static_cast<Symbol>(before.max_symbol() + 1);
  auto it = std::find(w.begin(), w.end(), fresh);
  if (it == w.end() || after.occurrences(fresh) != 1) {
    throw ValidationError("word " + after.to_string() + " lacks a unique new symbol " + std::to_string(fresh));
  }
  int r = static_cast<int>(w.size() - before.size() - 1);
  int pos = static_cast<int>(it - w.begin()) + 1;
  DupChoice choice{pos - r, pos - 1};
  if (!choice.valid_for(before.size()) || td_step(before, choice, fresh) != after) {
    throw ValidationError("word " + after.to_string() + " is not one step from " + before.to_string());
  }
  return choice;
}

std::vector<DupChoice> choices_for(std::size_t word_length) {
  std::vector<DupChoice> out;
  int len = static_cast<int>(word_length);
  for (int a = 1; a <= len + 1; ++a)
    for (int b = a - 1; b <= len; ++b) out.push_back({a, b});
  return out;
}

WordEvolution::WordEvolution() : words_{Word({1})} {}

WordEvolution::WordEvolution(std::vector<DupChoice> steps) : steps_(std::move(steps)), words_{Word({1})} {
  words_.reserve(steps_.size() + 1);
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    if (!steps_[i].valid_for(words_.back().size())) {
      throw ValidationError("step " + std::to_string(i + 1) + " (" + std::to_string(steps_[i].a) + "," +
                            std::to_string(steps_[i].b) + ") out of range for word " + words_.back().to_string());
    }
    words_.push_back(td_step(words_.back(), steps_[i], static_cast<Symbol>(i + 2)));
  }
}

WordEvolution WordEvolution::from_words(const std::vector<Word>& words) {
  if (words.empty() || words.front() != Word({1})) throw ValidationError("word evolution must start at 1");
  std::vector<DupChoice> steps;
  for (std::size_t i = 1; i < words.size(); ++i) steps.push_back(recover_choice(words[i - 1], words[i]));
  return WordEvolution(std::move(steps));
}

std::string WordEvolution::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (i > 0) out += " -> ";
    out += words_[i].to_string();
  }
  return out + "]";
}

WordEvolution parse_evolution(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed evolution JSON: ") + e.what(), e.byte);
  }
  if (!doc.is_object() || !doc.contains("steps") || !doc["steps"].is_array()) {
    throw ParseError("evolution JSON needs a \"steps\" array", 0);
  }
  std::vector<DupChoice> steps;
  for (const auto& item : doc["steps"]) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number_integer() || !item[1].is_number_integer()) {
      throw ParseError("each step must be a pair [a,b] of integers", 0);
    }
    steps.push_back({item[0].get<int>(), item[1].get<int>()});
  }
  return WordEvolution(std::move(steps));
}

std::string format_evolution(const WordEvolution& evolution) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : evolution.steps()) steps.push_back({s.a, s.b});
  nlohmann::json doc;
  doc["steps"] = steps;
  return doc.dump();
}

namespace {

void descend(std::vector<DupChoice>& steps, std::vector<Word>& stack, int n, const EvolutionVisitor& visit) {
  const Word& current = stack.back();
  if (static_cast<int>(stack.size()) == n) {
    visit(steps, current);
    return;
  }
  auto next_symbol = static_cast<Symbol>(stack.size() + 1);
  for (const DupChoice& c : choices_for(current.size())) {
    steps.push_back(c);
    stack.push_back(td_step(stack.back(), c, next_symbol));
    descend(steps, stack, n, visit);
    stack.pop_back();
    steps.pop_back();
  }
}

}  // namespace

void for_each_word_evolution_from(const std::vector<DupChoice>& prefix, int n, const EvolutionVisitor& visit) {
  if (n <= 0 || static_cast<int>(prefix.size()) > n - 1) return;
  WordEvolution start(prefix);
  std::vector<DupChoice> steps = prefix;
  std::vector<Word> stack = start.words();
  descend(steps, stack, n, visit);
}

void for_each_word_evolution(int n, const EvolutionVisitor& visit) { for_each_word_evolution_from({}, n, visit); }

std::vector<std::vector<DupChoice>> evolution_prefixes(int depth) {
  std::vector<std::vector<DupChoice>> out;
  if (depth < 0) return out;
  for_each_word_evolution(depth + 1, [&](const std::vector<DupChoice>& steps, const Word&) { out.push_back(steps); });
  return out;
}

std::vector<WordEvolution> enumerate_word_evolutions(int n, std::size_t max_results) {
  std::vector<WordEvolution> out;
  for_each_word_evolution(n, [&](const std::vector<DupChoice>& steps, const Word&) {
    if (out.size() >= max_results) throw BudgetExceeded("more than " + std::to_string(max_results) + " evolutions");
    out.emplace_back(steps);
  });
  return out;
}

DistinctWords distinct_words(int n, int max_n, bool keep_words) {
  if (n > max_n) throw BudgetExceeded("distinct word enumeration guarded at n <= " + std::to_string(max_n));
  DistinctWords out;
  std::unordered_set<std::string> seen;
  for_each_word_evolution(n, [&](const std::vector<DupChoice>&, const Word& w) {
    ++out.evolutions;
    std::string key;
    key.reserve(w.size() * sizeof(Symbol));
    for (Symbol s : w.symbols()) key.append(reinterpret_cast<const char*>(&s), sizeof(Symbol));
    if (seen.insert(std::move(key)).second) {
      ++out.by_length[w.size()];
      if (keep_words) out.words.insert(w.to_string());
    } else {
      ++out.collisions;
    }
  });
  out.distinct = seen.size();
  return out;
}

Count WordCountTable::operator()(std::size_t m, int n) {
  if (n <= 0) return Count(n == 0 && m == 0 ? 1 : 0);
  if (m == 0 || m < static_cast<std::size_t>(n)) return Count(0);
  auto key = std::make_pair(m, n);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  Count sum;
  for (std::size_t k = (m - 1) / 2; k <= m - 1; ++k) {
    auto weight = static_cast<std::uint64_t>(2 * k + 2 - m);
    if (weight == 0) continue;
    sum += Count(weight) * (*this)(k, n - 1);
  }
  memo_.emplace(key, sum);
  return sum;
}

Count WordCountTable::total(int n) {
  if (n <= 0) return Count(n == 0 ? 1 : 0);
  if (n >= 64) throw OverflowError("word lengths beyond 2^64");
  Count sum;
  std::size_t max_len = (std::size_t{1} << n) - 1;
  for (std::size_t m = static_cast<std::size_t>(n); m <= max_len; ++m) sum += (*this)(m, n);
  return sum;
}

Count word_count_recursion(std::size_t m, int n) {
  WordCountTable table;
  return table(m, n);
}

Count word_count_total(int n) {
  WordCountTable table;
  return table.total(n);
}

}  // namespace tdc
