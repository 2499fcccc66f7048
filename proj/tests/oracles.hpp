#pragma once

// Independent reference computations used by the tests. None of these call
// into the counting code under test.

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tdcount/beta.hpp"
#include "tdcount/td_tree.hpp"

namespace oracle {

// Words as strings of chars '1', '2', ...; plain string splicing.
inline void grow_words(const std::string& w, int k, int n, const std::function<void(const std::string&)>& leaf) {
  if (k == n) {
    leaf(w);
    return;
  }
  const char sym = static_cast<char>('1' + k);
  const int len = static_cast<int>(w.size());
  for (int a = 1; a <= len + 1; ++a) {
    for (int b = a - 1; b <= len; ++b) {
      std::string mid = w.substr(a - 1, b - a + 1);
      std::string next = w.substr(0, b) + sym + mid + w.substr(b);
      grow_words(next, k + 1, n, leaf);
    }
  }
}

struct WordCensus {
  std::uint64_t derivations = 0;
  std::set<std::string> distinct;
};

inline WordCensus words_brute(int n) {
  WordCensus c;
  grow_words("1", 1, n, [&](const std::string& w) {
    ++c.derivations;
    c.distinct.insert(w);
  });
  return c;
}

// Linear extensions by DP over down-sets; nodes are 0..k-1, edges lower -> upper.
inline unsigned __int128 linear_extensions(std::size_t k, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::uint32_t> below(k, 0);
  for (auto [lo, hi] : edges) below[hi] |= 1u << lo;
  std::vector<unsigned __int128> ways(std::size_t{1} << k, 0);
  ways[0] = 1;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    if (ways[mask] == 0) continue;
    for (std::size_t v = 0; v < k; ++v) {
      if ((mask >> v) & 1u) continue;
      if ((below[v] & mask) != below[v]) continue;
      ways[mask | (1u << v)] += ways[mask];
    }
  }
  return ways[(std::size_t{1} << k) - 1];
}

inline unsigned __int128 linear_extensions(const tdc::HasseDiagram& h) {
  std::map<tdc::BreakpointId, std::size_t> index;
  for (std::size_t i = 0; i < h.nodes.size(); ++i) index[h.nodes[i]] = i;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& [lo, hi] : h.edges) edges.emplace_back(index.at(lo), index.at(hi));
  return linear_extensions(h.nodes.size(), edges);
}

// Every subset holding both roots that is parent-closed and respects fences.
inline std::vector<std::set<tdc::BreakpointId>> beta_subtrees_brute(const tdc::BetaTree& t) {
  std::vector<tdc::BreakpointId> others;
  for (const auto& [id, _] : t.parents) others.push_back(id);
  std::vector<std::set<tdc::BreakpointId>> out;
  for (std::uint32_t mask = 0; mask < (1u << others.size()); ++mask) {
    std::set<tdc::BreakpointId> s{tdc::kRootA, tdc::kRootB};
    for (std::size_t i = 0; i < others.size(); ++i)
      if ((mask >> i) & 1u) s.insert(others[i]);
    bool ok = true;
    for (const auto& id : s) {
      if (id.is_root()) continue;
      const auto& p = t.parents.at(id);
      ok = ok && s.count(p.a_parent) && s.count(p.b_parent);
    }
    for (const auto& f : t.fences) {
      if (f.a_node.is_root()) continue;
      const auto& p = t.parents.at(f.a_node);
      if (s.count(p.a_parent) && s.count(p.b_parent) && !s.count(f.a_node) && !s.count(f.b_node)) ok = false;
    }
    if (ok) out.push_back(s);
  }
  return out;
}

inline unsigned __int128 closed_form(int n) {
  unsigned __int128 total = 1;
  for (int k = 1; k <= n; ++k) {
    unsigned __int128 p = 1;
    for (int i = 0; i < k; ++i) p *= 4;
    total *= p - static_cast<unsigned __int128>(2 * k + 1);
  }
  return total;
}

inline std::string to_string(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

}  // namespace oracle
