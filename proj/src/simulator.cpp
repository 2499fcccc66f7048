#include "tdcount/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>
#include <unordered_set>

#include <json.hpp>

namespace tdc {

namespace {

std::size_t code_of(BreakpointId id) { return 2 * static_cast<std::size_t>(id.td) + (id.side == Side::b ? 1 : 0); }

}  // namespace

std::size_t GenomeState::position_of(BreakpointId id) const {
  if (id == kRootA) return 0;
  if (id == kRootB) return ref_breakpoints.size() + 1;
  auto it = std::find(ref_breakpoints.begin(), ref_breakpoints.end(), id);
  if (it == ref_breakpoints.end()) throw IndexOutOfRange("breakpoint " + id.label() + " not in reference");
  return static_cast<std::size_t>(it - ref_breakpoints.begin()) + 1;
}

BreakpointId GenomeState::right_end(BreakpointId interval) const {
  std::size_t p = position_of(interval);
  if (p >= ref_breakpoints.size() + 1) throw IndexOutOfRange("no interval starts at " + interval.label());
  return p == ref_breakpoints.size() ? kRootB : ref_breakpoints[p];
}

bool GenomeState::junction_after(std::size_t g) const {
  if (g + 1 >= genome.size()) throw IndexOutOfRange("junction index " + std::to_string(g));
  return right_end(genome[g]) != genome[g + 1];
}

std::vector<TdChoice> enumerate_choices(const GenomeState& state) {
  std::vector<TdChoice> out;
  const int len = static_cast<int>(state.genome.size());
  for (int g1 = 0; g1 < len; ++g1) {
    for (int g2 = g1; g2 < len; ++g2) {
      if (g1 != g2 && state.genome[g1] == state.genome[g2]) {
        out.push_back({g1, g2, false});
        out.push_back({g1, g2, true});
      } else {
        out.push_back({g1, g2, std::nullopt});
      }
    }
  }
  return out;
}

GenomeState apply_td(const GenomeState& state, const TdChoice& choice) {
  const int len = static_cast<int>(state.genome.size());
  if (choice.g1 < 0 || choice.g2 < choice.g1 || choice.g2 >= len)
    throw InvalidChoice("segments (" + std::to_string(choice.g1) + ", " + std::to_string(choice.g2) + ") out of range");
  const BreakpointId x1 = state.genome[choice.g1];
  const BreakpointId x2 = state.genome[choice.g2];
  const bool shared = choice.g1 != choice.g2 && x1 == x2;
  if (shared != choice.a_first.has_value()) throw InvalidChoice("order flag present iff both cuts share an interval");

  const int td = state.td_count() + 1;
  const BreakpointId na{td, Side::a}, nb{td, Side::b};

  // Sub-intervals replacing each host interval, left to right.
  std::vector<BreakpointId> split1{x1}, split2{x2};
  if (x1 == x2) {
    bool a_first = choice.a_first.value_or(true);
    split1 = a_first ? std::vector<BreakpointId>{x1, na, nb} : std::vector<BreakpointId>{x1, nb, na};
    split2 = split1;
  } else {
    split1.push_back(na);
    split2.push_back(nb);
  }

  GenomeState next;
  next.history = state.history;
  next.history.emplace_back(nb, na);
  next.ref_breakpoints.reserve(state.ref_breakpoints.size() + 2);
  auto insert_after = [&](BreakpointId host, const std::vector<BreakpointId>& split) {
    for (std::size_t i = 1; i < split.size(); ++i) next.ref_breakpoints.push_back(split[i]);
    (void)host;
  };
  if (x1 == kRootA) insert_after(x1, split1);
  if (x2 == kRootA && x1 != x2) insert_after(x2, split2);
  for (BreakpointId bp : state.ref_breakpoints) {
    next.ref_breakpoints.push_back(bp);
    if (bp == x1) insert_after(x1, split1);
    if (bp == x2 && x1 != x2) insert_after(x2, split2);
  }

  next.genome.clear();
  next.genome.reserve(state.genome.size() * 2);
  std::size_t start = 0, stop = 0;
  for (int g = 0; g < len; ++g) {
    const BreakpointId x = state.genome[g];
    const std::vector<BreakpointId>* split = x == x1 ? &split1 : x == x2 ? &split2 : nullptr;
    if (!split) {
      next.genome.push_back(x);
      continue;
    }
    for (BreakpointId piece : *split) {
      if (g == choice.g1 && piece == na) start = next.genome.size();
      if (g == choice.g2 && piece == nb) stop = next.genome.size();
      next.genome.push_back(piece);
    }
  }
  if (stop <= start) throw InvalidChoice("empty duplication region");
  std::vector<BreakpointId> copy(next.genome.begin() + static_cast<std::ptrdiff_t>(start),
                                 next.genome.begin() + static_cast<std::ptrdiff_t>(stop));
  next.genome.insert(next.genome.begin() + static_cast<std::ptrdiff_t>(stop), copy.begin(), copy.end());
  return next;
}

Word word_of(const GenomeState& state) {
  std::vector<Symbol> symbols;
  for (std::size_t g = 0; g + 1 < state.genome.size(); ++g)
    if (state.junction_after(g)) symbols.push_back(static_cast<Symbol>(state.genome[g + 1].td));
  return Word(std::move(symbols));
}

std::vector<std::uint32_t> copy_numbers(const GenomeState& state) {
  std::vector<std::uint32_t> cnv(state.ref_breakpoints.size() + 1, 0);
  for (BreakpointId x : state.genome) ++cnv[state.position_of(x)];
  return cnv;
}

namespace {

std::vector<TdGraph> final_resolution_graphs(const std::vector<GenomeState>& path) {
  const GenomeState& last = path.back();
  const std::size_t n = path.size() - 1;
  const std::vector<BreakpointId>& order = last.ref_breakpoints;
  std::vector<std::uint32_t> pos(2 * n + 2, 0);
  for (std::size_t i = 0; i < order.size(); ++i) pos[code_of(order[i])] = static_cast<std::uint32_t>(i + 1);

  std::vector<TdGraph> graphs;
  graphs.reserve(n);
  std::vector<std::uint32_t> copies(2 * n + 2);
  for (std::size_t k = 1; k <= n; ++k) {
    const GenomeState& s = path[k];
    std::fill(copies.begin(), copies.end(), 0);
    for (BreakpointId x : s.genome) ++copies[code_of(x)];
    TdGraph g;
    g.cnv.reserve(order.size() + 1);
    BreakpointId host = kRootA;
    g.cnv.push_back(copies[code_of(host)]);
    for (BreakpointId bp : order) {
      if (static_cast<std::size_t>(bp.td) <= k) host = bp;
      g.cnv.push_back(copies[code_of(host)]);
    }
    for (const auto& [from, to] : s.history) {
      std::uint32_t f = pos[code_of(from)], t = pos[code_of(to)];
      g.connections.push_back({f, t, f > t});
    }
    std::sort(g.connections.begin(), g.connections.end());
    graphs.push_back(std::move(g));
  }
  return graphs;
}

void put_u16(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void serialize_graph(std::string& out, const TdGraph& g) {
  put_u16(out, static_cast<std::uint32_t>(g.cnv.size()));
  for (std::uint32_t c : g.cnv) put_u16(out, c);
  put_u16(out, static_cast<std::uint32_t>(g.connections.size()));
  for (const Connection& c : g.connections) {
    put_u16(out, c.from);
    put_u16(out, c.to);
    out.push_back(c.reversed ? 1 : 0);
  }
}

std::string serialize_graphs(const std::vector<TdGraph>& graphs) {
  std::string out;
  out.reserve(graphs.size() * 64);
  put_u16(out, static_cast<std::uint32_t>(graphs.size()));
  for (const TdGraph& g : graphs) serialize_graph(out, g);
  return out;
}

std::size_t junctions_before(const GenomeState& s, std::size_t g) {
  std::size_t count = 0;
  for (std::size_t j = 0; j < g; ++j)
    if (s.junction_after(j)) ++count;
  return count;
}

std::vector<DupChoice> word_steps(const std::vector<GenomeState>& path, const std::vector<TdChoice>& choices) {
  std::vector<DupChoice> steps;
  steps.reserve(choices.size());
  for (std::size_t k = 1; k < choices.size(); ++k) {
    const GenomeState& s = path[k];
    const TdChoice& c = choices[k];
    steps.push_back({static_cast<int>(junctions_before(s, c.g1)) + 1, static_cast<int>(junctions_before(s, c.g2))});
  }
  return steps;
}

void serialize_steps(std::string& out, const std::vector<DupChoice>& steps) {
  put_u16(out, static_cast<std::uint32_t>(steps.size()));
  for (const DupChoice& c : steps) {
    put_u16(out, static_cast<std::uint32_t>(c.a));
    put_u16(out, static_cast<std::uint32_t>(c.b));
  }
}

}  // namespace

std::string TdEvolutionRecord::canonical_bytes() const {
  std::string out = serialize_graphs(graphs);
  serialize_steps(out, word_evolution.steps());
  return out;
}

std::string TdEvolutionRecord::to_json() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json gs = nlohmann::ordered_json::array();
  for (const TdGraph& g : graphs) {
    nlohmann::ordered_json conns = nlohmann::ordered_json::array();
    for (const Connection& c : g.connections) conns.push_back({c.from, c.to, c.reversed ? "reversed" : "forward"});
    gs.push_back({{"cnv", g.cnv}, {"connections", conns}});
  }
  j["graphs"] = gs;
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const DupChoice& c : word_evolution.steps()) steps.push_back({c.a, c.b});
  j["steps"] = steps;
  j["word"] = word_evolution.final_word().to_string();
  std::vector<std::string> labels;
  for (BreakpointId id : final_order) labels.push_back(id.label());
  j["final_order"] = labels;
  return j.dump();
}

TdEvolutionRecord make_record(const std::vector<GenomeState>& path, const std::vector<TdChoice>& choices) {
  if (path.size() < 2 || choices.size() + 1 != path.size())
    throw ValidationError("record needs states 0..n and n choices");
  TdEvolutionRecord rec;
  rec.graphs = final_resolution_graphs(path);
  rec.word_evolution = WordEvolution(word_steps(path, choices));
  rec.final_order = path.back().ref_breakpoints;
  return rec;
}

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

std::uint64_t rotl(std::uint64_t x, int r) { return (x << r) | (x >> (64 - r)); }

}  // namespace

Hash128 hash128(std::string_view bytes) {
  std::uint64_t lo = 0x9e3779b97f4a7c15ULL ^ bytes.size();
  std::uint64_t hi = 0xc2b2ae3d27d4eb4fULL + bytes.size();
  for (std::size_t i = 0; i < bytes.size(); i += 8) {
    std::uint64_t w = 0;
    std::memcpy(&w, bytes.data() + i, std::min<std::size_t>(8, bytes.size() - i));
    lo = mix64(lo ^ w);
    hi = rotl(hi ^ (w * 0x9fb21c651e98df25ULL), 29) * 0xff51afd7ed558ccdULL;
  }
  Hash128 h;
  h.lo = mix64(lo ^ rotl(hi, 17));
  h.hi = mix64(hi + h.lo);
  return h;
}

std::size_t memory_limit_from_env() {
  const char* raw = std::getenv("TD_MAX_MEM");
  if (!raw || !*raw) return 0;
  std::string text(raw);
  std::size_t mult = 1;
  switch (std::toupper(static_cast<unsigned char>(text.back()))) {
    case 'K': mult = std::size_t{1} << 10; break;
    case 'M': mult = std::size_t{1} << 20; break;
    case 'G': mult = std::size_t{1} << 30; break;
    default: break;
  }
  if (mult != 1) text.pop_back();
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw ParseError("TD_MAX_MEM: trailing characters", used);
    return static_cast<std::size_t>(v) * mult;
  } catch (const std::logic_error&) {
    throw ParseError("TD_MAX_MEM: not a size: " + std::string(raw), 0);
  }
}

namespace {

using LeafFn = std::function<void(const std::vector<GenomeState>&, const std::vector<TdChoice>&)>;

void descend(std::vector<GenomeState>& path, std::vector<TdChoice>& choices, int n, const LeafFn& leaf) {
  if (path.back().td_count() == n) {
    leaf(path, choices);
    return;
  }
  for (const TdChoice& c : enumerate_choices(path.back())) {
    GenomeState next = apply_td(path.back(), c);
    path.push_back(std::move(next));
    choices.push_back(c);
    descend(path, choices, n, leaf);
    choices.pop_back();
    path.pop_back();
  }
}

struct Prefix {
  std::vector<GenomeState> path;
  std::vector<TdChoice> choices;
};

std::vector<Prefix> prefixes(int depth) {
  std::vector<Prefix> out;
  std::vector<GenomeState> path{GenomeState{}};
  std::vector<TdChoice> choices;
  descend(path, choices, depth, [&](const std::vector<GenomeState>& p, const std::vector<TdChoice>& c) {
    out.push_back({p, c});
  });
  return out;
}

void require_n(int n) {
  if (n < 1) throw ValidationError("TD count must be at least 1, got " + std::to_string(n));
}

}  // namespace

void enumerate_process(int n, const RecordVisitor& visit, const ProcessOptions& options) {
  require_n(n);
  if (n > options.max_n && options.spill_dir.empty())
    throw BudgetExceeded("process enumeration at n=" + std::to_string(n) + " exceeds budget " +
                         std::to_string(options.max_n));
  std::vector<GenomeState> path{GenomeState{}};
  path.reserve(static_cast<std::size_t>(n) + 1);
  std::vector<TdChoice> choices;
  descend(path, choices, n, [&](const std::vector<GenomeState>& p, const std::vector<TdChoice>& c) {
    visit(make_record(p, c));
  });
}

std::string TableRow::csv() const {
  return std::to_string(n) + "," + std::to_string(words) + "," + std::to_string(cnvs) + "," +
         std::to_string(td_graphs) + "," + std::to_string(evolutions);
}

namespace {

struct HashOf {
  std::size_t operator()(const Hash128& h) const { return static_cast<std::size_t>(h.lo); }
};

constexpr std::size_t kNodeOverhead = 48;

class Dedup {
 public:
  explicit Dedup(bool full) : full_(full) {}

  void add(std::string bytes) {
    if (full_) {
      std::size_t extra = bytes.capacity() + kNodeOverhead;
      if (bytes_.insert(std::move(bytes)).second) used_ += extra;
    } else if (hashes_.insert(hash128(bytes)).second) {
      used_ += sizeof(Hash128) + kNodeOverhead;
    }
  }
  void merge(Dedup&& other) {
    for (auto& b : other.bytes_) add(b);
    for (const Hash128& h : other.hashes_)
      if (hashes_.insert(h).second) used_ += sizeof(Hash128) + kNodeOverhead;
  }
  std::size_t size() const { return full_ ? bytes_.size() : hashes_.size(); }
  std::size_t memory() const { return used_; }

 private:
  bool full_;
  std::size_t used_ = 0;
  std::unordered_set<std::string> bytes_;
  std::unordered_set<Hash128, HashOf> hashes_;
};

constexpr std::size_t kSpillBuckets = 64;

class Spill {
 public:
  Spill(const std::filesystem::path& dir, int worker) {
    std::filesystem::create_directories(dir);
    for (std::size_t b = 0; b < kSpillBuckets; ++b) {
      files_.emplace_back(dir / file_name(worker, b), std::ios::binary | std::ios::trunc);
      if (!files_.back()) throw Error("cannot open spill file in " + dir.string());
    }
  }
  void add(const Hash128& h) {
    files_[h.hi % kSpillBuckets].write(reinterpret_cast<const char*>(&h), sizeof h);
    ++written_;
  }
  std::uint64_t written() const { return written_; }
  static std::string file_name(int worker, std::size_t bucket) {
    return "w" + std::to_string(worker) + "_b" + std::to_string(bucket) + ".bin";
  }

 private:
  std::vector<std::ofstream> files_;
  std::uint64_t written_ = 0;
};

std::uint64_t count_spilled(const std::filesystem::path& dir, int workers) {
  std::uint64_t distinct = 0;
  for (std::size_t b = 0; b < kSpillBuckets; ++b) {
    std::vector<Hash128> all;
    for (int w = 0; w < workers; ++w) {
      std::filesystem::path file = dir / Spill::file_name(w, b);
      std::ifstream in(file, std::ios::binary);
      Hash128 h;
      while (in.read(reinterpret_cast<char*>(&h), sizeof h)) all.push_back(h);
      in.close();
      std::filesystem::remove(file);
    }
    std::sort(all.begin(), all.end());
    distinct += static_cast<std::uint64_t>(std::unique(all.begin(), all.end()) - all.begin());
  }
  return distinct;
}

struct Partial {
  explicit Partial(bool full) : words(full), cnvs(full), graphs(full), sequences(full), evolutions(full) {}
  Dedup words, cnvs, graphs, sequences, evolutions;
  std::uint64_t leaves = 0;

  std::size_t memory() const {
    return words.memory() + cnvs.memory() + graphs.memory() + sequences.memory() + evolutions.memory();
  }
};

}  // namespace

TableRow tabulate(int n, const ProcessOptions& options) {
  require_n(n);
  const bool spill = !options.spill_dir.empty();
  if (n > options.max_n && !spill)
    throw BudgetExceeded("tabulate at n=" + std::to_string(n) + " exceeds in-memory budget " +
                         std::to_string(options.max_n) + "; set a spill directory for deep runs");
  const std::size_t limit = options.max_memory_bytes ? options.max_memory_bytes : memory_limit_from_env();
  const int workers = std::max(1, options.workers);

  std::vector<Prefix> tasks = prefixes(std::min(n, 2));
  std::vector<Partial> partials;
  partials.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) partials.emplace_back(options.full_compare);

  std::atomic<std::size_t> next_task{0}, done{0};
  std::atomic<std::size_t> total_memory{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex, progress_mutex;
  std::exception_ptr error;

  auto run = [&](int w) {
    try {
      Partial& part = partials[static_cast<std::size_t>(w)];
      std::unique_ptr<Spill> spiller;
      if (spill) spiller = std::make_unique<Spill>(options.spill_dir, w);
      std::size_t reported = 0;
      auto leaf = [&](const std::vector<GenomeState>& path, const std::vector<TdChoice>& choices) {
        std::vector<TdGraph> graphs = final_resolution_graphs(path);
        const TdGraph& last = graphs.back();
        part.words.add(word_of(path.back()).to_string());
        std::string cnv;
        for (std::uint32_t c : last.cnv) put_u16(cnv, c);
        part.cnvs.add(std::move(cnv));
        std::string graph;
        serialize_graph(graph, last);
        part.graphs.add(std::move(graph));
        std::string record = serialize_graphs(graphs);
        if (!spiller) part.sequences.add(record);
        serialize_steps(record, word_steps(path, choices));
        if (spiller) {
          spiller->add(hash128(record));
        } else {
          part.evolutions.add(std::move(record));
        }
        if ((++part.leaves & 0xfff) == 0 && limit) {
          std::size_t now = part.memory();
          std::size_t sum = total_memory.fetch_add(now - reported) + now - reported;
          reported = now;
          if (sum > limit)
            throw BudgetExceeded("dedup memory " + std::to_string(sum) + " bytes exceeds TD_MAX_MEM " +
                                 std::to_string(limit));
        }
        if (failed.load(std::memory_order_relaxed)) throw BudgetExceeded("aborted");
      };
      for (std::size_t t = next_task++; t < tasks.size(); t = next_task++) {
        std::vector<GenomeState> path = tasks[t].path;
        path.reserve(static_cast<std::size_t>(n) + 1);
        std::vector<TdChoice> choices = tasks[t].choices;
        descend(path, choices, n, leaf);
        std::size_t d = ++done;
        if (options.progress) {
          std::lock_guard lock(progress_mutex);
          options.progress(d, tasks.size());
        }
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!failed.exchange(true)) error = std::current_exception();
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  if (error) {
    if (spill) {
      for (int w = 0; w < workers; ++w)
        for (std::size_t b = 0; b < kSpillBuckets; ++b)
          std::filesystem::remove(std::filesystem::path(options.spill_dir) / Spill::file_name(w, b));
    }
    std::rethrow_exception(error);
  }

  Partial total = std::move(partials[0]);
  for (std::size_t w = 1; w < partials.size(); ++w) {
    total.words.merge(std::move(partials[w].words));
    total.cnvs.merge(std::move(partials[w].cnvs));
    total.graphs.merge(std::move(partials[w].graphs));
    total.sequences.merge(std::move(partials[w].sequences));
    total.evolutions.merge(std::move(partials[w].evolutions));
    total.leaves += partials[w].leaves;
  }
  partials.clear();

  TableRow row;
  row.n = n;
  row.words = total.words.size();
  row.cnvs = total.cnvs.size();
  row.td_graphs = total.graphs.size();
  row.choice_paths = total.leaves;
  row.graph_sequences = spill ? 0 : total.sequences.size();
  row.evolutions = spill ? count_spilled(options.spill_dir, workers) : total.evolutions.size();
  return row;
}

}  // namespace tdc
