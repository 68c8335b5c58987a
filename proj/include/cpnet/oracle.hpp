#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "cpnet/io.hpp"
#include "cpnet/model.hpp"

namespace cpnet {

// Explicit preference graph over the full outcome space. Nodes are
// mixed-radix outcome indices (first variable most significant). A strict
// edge runs from the worse outcome to the better one per a single
// improving flip; locally indifferent flips contribute edges both ways.
struct InducedGraph {
  const CPNet* net = nullptr;
  std::uint64_t node_count = 0;
  std::vector<std::vector<std::uint32_t>> strict_out;
  std::vector<std::vector<std::uint32_t>> indiff_out;

  std::uint64_t index_of(const Outcome& o) const {
    std::uint64_t idx = 0;
    for (size_t v = 0; v < net->size(); ++v)
      idx = idx * net->variables[v].values.size() + o.values[v];
    return idx;
  }

  Outcome outcome_of(std::uint64_t idx) const {
    Outcome o;
    o.values.assign(net->size(), 0);
    for (size_t v = net->size(); v-- > 0;) {
      std::uint64_t d = net->variables[v].values.size();
      o.values[v] = static_cast<ValueId>(idx % d);
      idx /= d;
    }
    return o;
  }

  std::uint64_t strict_edge_count() const {
    std::uint64_t n = 0;
    for (const auto& adj : strict_out) n += adj.size();
    return n;
  }
  std::uint64_t indiff_edge_count() const {
    std::uint64_t n = 0;
    for (const auto& adj : indiff_out) n += adj.size();
    return n;
  }
};

inline constexpr std::uint64_t kDefaultNodeCap = std::uint64_t{1} << 20;

// Enumerates every improving flip of every outcome.
inline InducedGraph build_induced_graph(const CPNet& net,
                                        std::uint64_t node_cap = kDefaultNodeCap) {
  auto count = net.outcome_count();
  if (!count || *count > node_cap)
    throw ScaleError("oracle scale exceeded: outcome space larger than cap " +
                     std::to_string(node_cap));
  InducedGraph g;
  g.net = &net;
  g.node_count = *count;
  g.strict_out.assign(*count, {});
  g.indiff_out.assign(*count, {});

  size_t n = net.size();
  std::vector<std::uint64_t> stride(n, 1);
  for (size_t v = n; v-- > 1;)
    stride[v - 1] = stride[v] * net.variables[v].values.size();

  Outcome o;
  o.values.assign(n, 0);
  for (std::uint64_t idx = 0; idx < *count; ++idx) {
    for (size_t v = 0, rest = idx; v < n; ++v) {
      o.values[v] = static_cast<ValueId>(rest / stride[v]);
      rest %= stride[v];
    }
    for (size_t x = 0; x < n; ++x) {
      const CPT& cpt = net.cpts[x];
      std::vector<ValueId> ctx;
      ctx.reserve(cpt.parents.size());
      for (VarId p : cpt.parents) ctx.push_back(o.values[p]);
      const LocalRelation* rel = cpt.row(ctx);
      if (!rel) continue;
      ValueId cur = o.values[x];
      int d = static_cast<int>(net.variables[x].values.size());
      for (ValueId v = 0; v < d; ++v) {
        if (v == cur) continue;
        Cmp c = rel->compare(v, cur);
        std::uint64_t to = idx + (static_cast<std::int64_t>(v) - cur) *
                                     static_cast<std::int64_t>(stride[x]);
        if (c == Cmp::Better)
          g.strict_out[idx].push_back(static_cast<std::uint32_t>(to));
        else if (c == Cmp::Equal)
          g.indiff_out[idx].push_back(static_cast<std::uint32_t>(to));
      }
    }
  }
  return g;
}

namespace oracle_detail {

// Strongly connected components over strict+indiff edges (iterative Tarjan).
inline std::vector<std::uint32_t> scc_ids(const InducedGraph& g) {
  std::uint64_t n = g.node_count;
  std::vector<std::uint32_t> comp(n, UINT32_MAX);
  std::vector<std::uint32_t> low(n, 0), disc(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  std::uint32_t timer = 1, comp_count = 0;

  struct Frame {
    std::uint32_t v;
    std::uint32_t edge;  // 0..strict+indiff
  };
  auto neighbor = [&](std::uint32_t v, std::uint32_t e) -> std::int64_t {
    size_t ns = g.strict_out[v].size();
    if (e < ns) return g.strict_out[v][e];
    size_t ni = g.indiff_out[v].size();
    if (e < ns + ni) return g.indiff_out[v][e - ns];
    return -1;
  };

  std::vector<Frame> frames;
  for (std::uint64_t root = 0; root < n; ++root) {
    if (disc[root]) continue;
    frames.push_back({static_cast<std::uint32_t>(root), 0});
    disc[root] = low[root] = timer++;
    stack.push_back(static_cast<std::uint32_t>(root));
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      std::int64_t w = neighbor(f.v, f.edge);
      if (w >= 0) {
        ++f.edge;
        if (!disc[w]) {
          disc[w] = low[w] = timer++;
          stack.push_back(static_cast<std::uint32_t>(w));
          on_stack[w] = true;
          frames.push_back({static_cast<std::uint32_t>(w), 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], disc[w]);
        }
        continue;
      }
      std::uint32_t v = f.v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] == disc[v]) {
        while (true) {
          std::uint32_t w2 = stack.back();
          stack.pop_back();
          on_stack[w2] = false;
          comp[w2] = comp_count;
          if (w2 == v) break;
        }
        ++comp_count;
      }
    }
  }
  return comp;
}

inline std::vector<std::int64_t> bfs_distances(const InducedGraph& g,
                                               std::uint64_t from) {
  std::vector<std::int64_t> dist(g.node_count, -1);
  std::deque<std::uint32_t> queue;
  dist[from] = 0;
  queue.push_back(static_cast<std::uint32_t>(from));
  while (!queue.empty()) {
    std::uint32_t v = queue.front();
    queue.pop_front();
    auto visit = [&](std::uint32_t w) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    };
    for (std::uint32_t w : g.strict_out[v]) visit(w);
    for (std::uint32_t w : g.indiff_out[v]) visit(w);
  }
  return dist;
}

}  // namespace oracle_detail

// A net is satisfiable exactly when no mutually-reachable set of outcomes
// contains a strict edge; a total preorder extension exists precisely then.
// This is the one operation that accepts cyclic nets.
inline bool oracle_satisfiable(const CPNet& net,
                               std::uint64_t node_cap = kDefaultNodeCap) {
  InducedGraph g = build_induced_graph(net, node_cap);
  auto comp = oracle_detail::scc_ids(g);
  for (std::uint64_t v = 0; v < g.node_count; ++v)
    for (std::uint32_t w : g.strict_out[v])
      if (comp[v] == comp[w]) return false;
  return true;
}

inline bool graph_satisfiable(const InducedGraph& g) {
  auto comp = oracle_detail::scc_ids(g);
  for (std::uint64_t v = 0; v < g.node_count; ++v)
    for (std::uint32_t w : g.strict_out[v])
      if (comp[v] == comp[w]) return false;
  return true;
}

// Strict entailment better > worse: worse reaches better and the two sit
// in different mutually-reachable components.
inline bool oracle_dominates(const CPNet& net, const Outcome& better,
                             const Outcome& worse,
                             std::uint64_t node_cap = kDefaultNodeCap) {
  InducedGraph g = build_induced_graph(net, node_cap);
  if (!graph_satisfiable(g))
    throw InputError("entailment undefined: net is unsatisfiable");
  std::uint64_t b = g.index_of(better), w = g.index_of(worse);
  if (b == w) return false;
  auto dist = oracle_detail::bfs_distances(g, w);
  if (dist[b] < 0) return false;
  auto comp = oracle_detail::scc_ids(g);
  return comp[b] != comp[w];
}

struct MinDistance {
  bool reachable = false;
  std::uint64_t flips = 0;
};

// Shortest flipping-sequence length from worse to better over all flips
// (strict and indifferent).
inline MinDistance oracle_min_distance(const CPNet& net, const Outcome& better,
                                       const Outcome& worse,
                                       std::uint64_t node_cap = kDefaultNodeCap) {
  InducedGraph g = build_induced_graph(net, node_cap);
  if (!graph_satisfiable(g))
    throw InputError("entailment undefined: net is unsatisfiable");
  std::uint64_t b = g.index_of(better), w = g.index_of(worse);
  auto dist = oracle_detail::bfs_distances(g, w);
  if (dist[b] < 0) return {false, 0};
  return {true, static_cast<std::uint64_t>(dist[b])};
}

// Number of distinct directed paths between two outcomes in the strict
// graph (which is a DAG for satisfiable strict nets).
inline BigInt count_induced_paths(const InducedGraph& g, const Outcome& from,
                                  const Outcome& to) {
  std::uint64_t s = g.index_of(from), t = g.index_of(to);
  std::vector<BigInt> memo(g.node_count, -1);
  std::function<BigInt(std::uint64_t)> walk = [&](std::uint64_t v) -> BigInt {
    if (v == t) return 1;
    if (memo[v] >= 0) return memo[v];
    BigInt total = 0;
    for (std::uint32_t w : g.strict_out[v]) total += walk(w);
    memo[v] = total;
    return total;
  };
  return walk(s);
}

inline constexpr std::uint64_t kDefaultRankingCap = 12;

// Exact number of total orders satisfying the net: linear extensions of
// the induced strict DAG, counted by memoized recursion over downsets.
inline BigInt count_satisfying_rankings(
    const CPNet& net, std::uint64_t outcome_cap = kDefaultRankingCap,
    std::uint64_t node_cap = kDefaultNodeCap) {
  ValidationReport rep = validate(net);
  if (!rep.acyclic) throw InputError("ranking count requires an acyclic net");
  if (!rep.strict)
    throw InputError("ranking count supports total-order rows only");
  auto count = net.outcome_count();
  if (!count || *count > outcome_cap)
    throw ScaleError("ranking count cap exceeded (" +
                     std::to_string(outcome_cap) + " outcomes)");
  InducedGraph g = build_induced_graph(net, node_cap);
  std::uint32_t n = static_cast<std::uint32_t>(g.node_count);

  // better_mask[v]: outcomes strictly better than v by a single flip; all
  // of them must already be placed before v in a best-first listing.
  std::vector<std::uint32_t> better_mask(n, 0);
  for (std::uint32_t v = 0; v < n; ++v)
    for (std::uint32_t w : g.strict_out[v]) better_mask[v] |= 1u << w;

  std::uint32_t full = (n >= 32) ? 0xFFFFFFFFu : (1u << n) - 1;
  std::vector<BigInt> memo(std::uint64_t{1} << n, -1);
  std::function<BigInt(std::uint32_t)> rec = [&](std::uint32_t placed) -> BigInt {
    if (placed == full) return 1;
    BigInt& m = memo[placed];
    if (m >= 0) return m;
    BigInt total = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (placed & (1u << v)) continue;
      if ((better_mask[v] & placed) == better_mask[v])
        total += rec(placed | (1u << v));
    }
    m = total;
    return m;
  };
  return rec(0);
}

// Satisfying total order, built by the recursive root-partition
// construction: pick the first parentless variable, order its values by
// its (unconditional) row, and recurse on the restricted subnets.
inline std::vector<Outcome> construct_satisfying_ranking(const CPNet& net) {
  ValidationReport rep = validate(net);
  if (!rep.acyclic || !rep.strict || !rep.complete_tables)
    throw InputError(
        "ranking construction requires an acyclic net with complete "
        "total-order tables");
  size_t n = net.size();
  std::vector<Outcome> out;

  std::vector<ValueId> fixed(n, -1);
  std::function<void(std::vector<VarId>)> rec = [&](std::vector<VarId> remaining) {
    if (remaining.empty()) {
      out.push_back(Outcome{fixed});
      return;
    }
    // first remaining variable whose parents are all fixed
    VarId x = -1;
    size_t slot = 0;
    for (size_t i = 0; i < remaining.size(); ++i) {
      bool ready = true;
      for (VarId p : net.cpts[remaining[i]].parents)
        if (fixed[p] < 0) ready = false;
      if (ready) {
        x = remaining[i];
        slot = i;
        break;
      }
    }
    if (x < 0) throw InputError("net is not acyclic");
    std::vector<ValueId> ctx;
    for (VarId p : net.cpts[x].parents) ctx.push_back(fixed[p]);
    const LocalRelation* rel = net.cpts[x].row(ctx);
    std::vector<VarId> rest = remaining;
    rest.erase(rest.begin() + slot);
    for (ValueId v : rel->ranked_values()) {
      fixed[x] = v;
      rec(rest);
    }
    fixed[x] = -1;
  };

  std::vector<VarId> all(n);
  for (size_t i = 0; i < n; ++i) all[i] = static_cast<VarId>(i);
  rec(all);
  return out;
}

// One edge per line, `worse -> better [strict|indiff]`, nodes in index
// order, strict before indiff.
inline std::string dump_induced_graph(const InducedGraph& g) {
  std::string out;
  for (std::uint64_t v = 0; v < g.node_count; ++v) {
    Outcome from = g.outcome_of(v);
    std::vector<std::uint32_t> strict = g.strict_out[v];
    std::sort(strict.begin(), strict.end());
    for (std::uint32_t w : strict)
      out += format_assignment(*g.net, from) + " -> " +
             format_assignment(*g.net, g.outcome_of(w)) + " [strict]\n";
    std::vector<std::uint32_t> ind = g.indiff_out[v];
    std::sort(ind.begin(), ind.end());
    for (std::uint32_t w : ind)
      out += format_assignment(*g.net, from) + " -> " +
             format_assignment(*g.net, g.outcome_of(w)) + " [indiff]\n";
  }
  return out;
}

}  // namespace cpnet
