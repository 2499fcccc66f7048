#pragma once

// Direct simulation of the TD process on a genome of reference intervals.
// Independent of the word automaton and the poset machinery: breakpoints are
// ordered by position only, and everything else is read off the genome.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tdcount/td_tree.hpp"

namespace tdc {

/// Reference intervals are named by their left breakpoint (0a for the left flank).
struct GenomeState {
  std::vector<BreakpointId> ref_breakpoints;  // by reference position, flanks excluded
  std::vector<BreakpointId> genome;           // interval copies in genome order
  std::vector<std::pair<BreakpointId, BreakpointId>> history;  // per TD: n_b -> n_a

  GenomeState() : genome{kRootA} {}

  int td_count() const { return static_cast<int>(history.size()); }
  std::size_t position_of(BreakpointId id) const;  // 0a -> 0, 0b -> size + 1
  BreakpointId right_end(BreakpointId interval) const;
  bool junction_after(std::size_t g) const;  // somatic connection between genome[g] and genome[g+1]
};

/// g1 hosts n_a, g2 >= g1 hosts n_b. `a_first` is set only when the two cuts
/// fall in distinct copies of one reference interval.
struct TdChoice {
  int g1 = 0;
  int g2 = 0;
  std::optional<bool> a_first;

  friend bool operator==(const TdChoice&, const TdChoice&) = default;
};

std::vector<TdChoice> enumerate_choices(const GenomeState& state);
GenomeState apply_td(const GenomeState& state, const TdChoice& choice);
Word word_of(const GenomeState& state);
/// Copy numbers of the current reference intervals.
std::vector<std::uint32_t> copy_numbers(const GenomeState& state);

struct Connection {
  std::uint32_t from = 0;  // final reference position of n_b (1-based)
  std::uint32_t to = 0;    // final reference position of n_a
  bool reversed = false;   // from lies to the right of to

  friend bool operator==(const Connection&, const Connection&) = default;
  friend auto operator<=>(const Connection&, const Connection&) = default;
};

struct TdGraph {
  std::vector<std::uint32_t> cnv;       // 2n+1 final regions
  std::vector<Connection> connections;  // sorted

  friend bool operator==(const TdGraph&, const TdGraph&) = default;
};

struct TdEvolutionRecord {
  std::vector<TdGraph> graphs;  // after TD 1..n, all at final resolution
  WordEvolution word_evolution;  // part of the identity: graph sequences alone can coincide
  std::vector<BreakpointId> final_order;  // reference order of all 2n breakpoints

  std::string canonical_bytes() const;
  std::string to_json() const;  // one JSON-lines record
};

/// Builds the record for a path of states 0..n.
TdEvolutionRecord make_record(const std::vector<GenomeState>& path, const std::vector<TdChoice>& choices);

struct Hash128 {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;
  friend bool operator==(const Hash128&, const Hash128&) = default;
  friend auto operator<=>(const Hash128&, const Hash128&) = default;
};
Hash128 hash128(std::string_view bytes);

struct ProcessOptions {
  int max_n = 4;          // guard for in-memory dedup
  int workers = 1;
  bool full_compare = false;  // keep canonical bytes, not just hashes
  std::size_t max_memory_bytes = 0;  // 0: read TD_MAX_MEM, else unlimited
  std::string spill_dir;  // disk-backed dedup of evolutions when set
  std::function<void(std::size_t done, std::size_t total)> progress;
};

using RecordVisitor = std::function<void(const TdEvolutionRecord&)>;

/// Depth-first over TdChoices; every choice path once.
void enumerate_process(int n, const RecordVisitor& visit, const ProcessOptions& options = {});

struct TableRow {
  int n = 0;
  std::uint64_t words = 0;
  std::uint64_t cnvs = 0;
  std::uint64_t td_graphs = 0;
  std::uint64_t evolutions = 0;       // distinct records (graphs + word evolution)
  std::uint64_t choice_paths = 0;     // leaves of the search
  std::uint64_t graph_sequences = 0;  // distinct TD-Graph sequences alone; 0 in spill mode

  std::string csv() const;  // n,words,cnvs,td_graphs,evolutions
  friend bool operator==(const TableRow&, const TableRow&) = default;
};

TableRow tabulate(int n, const ProcessOptions& options = {});

/// Parses TD_MAX_MEM ("512M", "4G", plain bytes); 0 when unset.
std::size_t memory_limit_from_env();

}  // namespace tdc
