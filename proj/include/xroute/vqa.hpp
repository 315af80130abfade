// Copyright 2026 The xroute Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Synthesis of Pauli-string rotations as CX trees. For each string the
// non-identity qubits are first brought into one connected region by a
// SWAP pattern chosen with a structural cost model, then a CX tree is
// grown on the fly: qubit graph, spanning tree, executable leaf edges and
// SWAPs, colored and committed one layer at a time, each control qubit
// retiring once its CX has run. The rotation sits on the last qubit and
// the ladder is mirrored back.

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "xroute/circuit.hpp"
#include "xroute/coloring.hpp"
#include "xroute/csg.hpp"
#include "xroute/error.hpp"
#include "xroute/hardware.hpp"
#include "xroute/log.hpp"
#include "xroute/pauli.hpp"
#include "xroute/scheduler.hpp"

namespace xroute {

struct WeightedEdge {
  int u = 0;  // u < v
  int v = 0;
  int w = 0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

/// Clique over a string's non-identity qubits, weighted by the hop
/// distance between their physical positions.
struct QubitGraph {
  std::vector<int> nodes;           // logical qubits, ascending
  std::map<int, int> physical;      // logical -> physical
  std::vector<WeightedEdge> edges;  // every unordered pair

  int weight(int a, int b) const {
    auto [u, v] = std::minmax(a, b);
    for (const auto& e : edges)
      if (e.u == u && e.v == v) return e.w;
    throw InvariantError("qubit graph has no edge " + std::to_string(u) + "-" + std::to_string(v));
  }
};

inline QubitGraph build_qubit_graph(const std::vector<int>& logical, const Mapping& mapping, const CouplingGraph& graph) {
  QubitGraph qg;
  qg.nodes = logical;
  std::sort(qg.nodes.begin(), qg.nodes.end());
  qg.nodes.erase(std::unique(qg.nodes.begin(), qg.nodes.end()), qg.nodes.end());
  for (int q : qg.nodes) qg.physical[q] = mapping.physical(q);
  for (std::size_t i = 0; i < qg.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < qg.nodes.size(); ++j) {
      int a = qg.nodes[i], b = qg.nodes[j];
      qg.edges.push_back({a, b, graph.distance(qg.physical[a], qg.physical[b])});
    }
  return qg;
}

inline QubitGraph build_qubit_graph(const PauliString& p, const Mapping& mapping, const CouplingGraph& graph) {
  auto sup = p.support();
  if (sup.size() < 2) throw InputError("qubit graph needs at least two non-identity qubits in " + p.str());
  return build_qubit_graph(sup, mapping, graph);
}

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

/// Kruskal over arbitrary node labels; edges sorted by (w, u, v).
inline std::vector<WeightedEdge> kruskal(const std::vector<int>& nodes, std::vector<WeightedEdge> edges) {
  std::map<int, std::size_t> index;
  for (int q : nodes) index.emplace(q, index.size());
  std::sort(edges.begin(), edges.end(),
            [](const WeightedEdge& a, const WeightedEdge& b) { return std::tie(a.w, a.u, a.v) < std::tie(b.w, b.u, b.v); });
  DisjointSets dsu(index.size());
  std::vector<WeightedEdge> tree;
  for (const auto& e : edges)
    if (dsu.unite(index.at(e.u), index.at(e.v))) tree.push_back(e);
  return tree;
}

inline std::map<int, std::vector<int>> adjacency(const std::vector<int>& nodes, const std::vector<std::pair<int, int>>& edges) {
  std::map<int, std::vector<int>> adj;
  for (int q : nodes) adj[q];
  for (auto [a, b] : edges) {
    adj.at(a).push_back(b);
    adj.at(b).push_back(a);
  }
  for (auto& [q, nb] : adj) std::sort(nb.begin(), nb.end());
  return adj;
}

inline std::map<int, int> bfs_distances(const std::map<int, std::vector<int>>& adj, int source) {
  std::map<int, int> dist{{source, 0}};
  std::deque<int> queue{source};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : adj.at(u))
      if (!dist.count(v)) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
  }
  return dist;
}

inline std::vector<std::pair<int, int>> pairs_of(const std::vector<WeightedEdge>& edges) {
  std::vector<std::pair<int, int>> out;
  for (const auto& e : edges) out.emplace_back(e.u, e.v);
  return out;
}

}  // namespace detail

/// Minimum spanning tree, deterministic under equal weights.
inline std::vector<WeightedEdge> mst(const QubitGraph& qg) {
  if (qg.nodes.empty()) throw InputError("minimum spanning tree of an empty qubit graph");
  return detail::kruskal(qg.nodes, qg.edges);
}

/// Node of minimum eccentricity, lowest label on ties. Throws on a
/// disconnected graph.
inline int graph_center(const std::vector<int>& nodes, const std::vector<std::pair<int, int>>& edges) {
  if (nodes.empty()) throw InputError("graph center of an empty graph");
  auto adj = detail::adjacency(nodes, edges);
  int best = -1, best_ecc = 0;
  for (const auto& [q, nb] : adj) {
    auto dist = detail::bfs_distances(adj, q);
    if (dist.size() != adj.size()) throw InputError("graph center of a disconnected graph");
    int ecc = 0;
    for (const auto& [v, d] : dist) ecc = std::max(ecc, d);
    if (best < 0 || ecc < best_ecc) {
      best = q;
      best_ecc = ecc;
    }
  }
  return best;
}

struct GateSets {
  std::vector<WeightedEdge> cgates;          // weight-1 tree edges
  std::vector<WeightedEdge> non_executable;  // heavier edges with a leaf endpoint
  std::vector<CsgVertex> swaps;              // SWAPs shortening a non-executable edge
};

/// `helps` of a SWAP encodes each shortened tree edge (u,v) as
/// u * stride + v, where stride exceeds every logical qubit index.
inline GateSets derive_gate_sets(const std::vector<WeightedEdge>& tree, const QubitGraph& qg, const CouplingGraph& graph,
                                 int stride = 1 << 16) {
  GateSets out;
  std::map<int, int> degree;
  for (const auto& e : tree) {
    ++degree[e.u];
    ++degree[e.v];
  }
  std::map<Edge, std::set<int>> helps;
  for (const auto& e : tree) {
    if (e.w == 1) {
      out.cgates.push_back(e);
      continue;
    }
    if (degree[e.u] != 1 && degree[e.v] != 1) continue;
    out.non_executable.push_back(e);
    const int pu = qg.physical.at(e.u), pv = qg.physical.at(e.v);
    const int d = graph.distance(pu, pv);
    for (auto [from, other] : {std::pair{pu, pv}, std::pair{pv, pu}})
      for (int nb : graph.neighbors(from))
        if (graph.distance(nb, other) == d - 1) helps[Edge(from, nb)].insert(e.u * stride + e.v);
  }
  for (auto& [edge, h] : helps) out.swaps.push_back(make_swap_vertex(edge, std::move(h)));
  return out;
}

/// (control, target) for a tree edge: the endpoint nearer the tree's
/// center is the target.
inline std::pair<int, int> assign_direction(int a, int b, const std::vector<int>& nodes,
                                            const std::vector<WeightedEdge>& tree) {
  auto pairs = detail::pairs_of(tree);
  const int center = graph_center(nodes, pairs);
  auto dist = detail::bfs_distances(detail::adjacency(nodes, pairs), center);
  const int da = dist.at(a), db = dist.at(b);
  if (da < db || (da == db && a < b)) return {b, a};
  return {a, b};
}

/// Directed CX tree grown while synthesizing one string.
struct SynthesisTree {
  std::vector<std::pair<int, int>> edges;  // (child, parent) == (control, target)
  std::set<int> remaining;
  int root = -1;
};

inline SynthesisTree delete_qubit(SynthesisTree tree, int control, int target) {
  if (!tree.remaining.count(control))
    throw InputError("qubit " + std::to_string(control) + " is not in the remaining set");
  if (!tree.remaining.count(target) || target == control)
    throw InputError("target " + std::to_string(target) + " is not a remaining qubit");
  tree.remaining.erase(control);
  tree.edges.emplace_back(control, target);
  if (tree.remaining.size() == 1) tree.root = *tree.remaining.begin();
  return tree;
}

struct DepthCost {
  int depth = 0;
  int crosstalk = 0;

  friend bool operator==(const DepthCost&, const DepthCost&) = default;
};

/// Structural depth/crosstalk estimate of a CX tree on a connected
/// physical subgraph. The graph is rooted at its center and spanned by
/// BFS; a chain costs its length. Otherwise each root branch is estimated
/// recursively (re-rooted at its own center), equal branch depths are
/// staggered upward so they never finish together, and every pair of
/// neighboring branch depths one apart counts as a crosstalk risk.
inline DepthCost calculate_depths(const std::vector<int>& nodes, const std::vector<std::pair<int, int>>& edges) {
  if (nodes.empty()) throw InputError("calculate_depths of an empty graph");
  if (nodes.size() == 1) return {};
  const int root = graph_center(nodes, edges);
  auto adj = detail::adjacency(nodes, edges);

  std::map<int, int> parent{{root, root}};
  std::map<int, std::vector<int>> children;
  std::deque<int> queue{root};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : adj.at(u))
      if (!parent.count(v)) {
        parent[v] = u;
        children[u].push_back(v);
        queue.push_back(v);
      }
  }
  bool chain = children[root].size() <= 2;
  for (const auto& [u, ch] : children)
    if (u != root && ch.size() > 1) chain = false;
  if (chain) return {static_cast<int>(nodes.size()) - 1, 0};

  std::vector<int> depths;
  for (int c : children[root]) {
    std::vector<int> sub_nodes;
    std::vector<std::pair<int, int>> sub_edges;
    std::deque<int> q{c};
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      sub_nodes.push_back(u);
      for (int v : children[u]) {
        sub_edges.emplace_back(u, v);
        q.push_back(v);
      }
    }
    std::sort(sub_nodes.begin(), sub_nodes.end());
    depths.push_back(calculate_depths(sub_nodes, sub_edges).depth);
  }
  std::sort(depths.begin(), depths.end());
  for (std::size_t i = 0; i + 1 < depths.size(); ++i)
    if (depths[i + 1] <= depths[i]) depths[i + 1] = depths[i] + 1;
  int pairs = 0;
  for (std::size_t i = 0; i + 1 < depths.size(); ++i)
    if (std::abs(depths[i + 1] - depths[i]) == 1) ++pairs;
  return {2 * depths.back() + 1, 2 * pairs};
}

/// A way to make one string's qubits physically connected.
struct CircuitPattern {
  std::vector<Edge> swaps;          // in plan order
  std::vector<int> nodes;           // support positions after the swaps
  std::vector<Edge> connected_edges;  // coupling edges among `nodes`
  Mapping mapping_after;
  DepthCost shape;
  double total = 0.0;

  int swap_count() const { return static_cast<int>(swaps.size()); }
};

inline double pattern_cost(const CircuitPattern& p, double w1, double w2) {
  if (!(w1 > 0.0 && w1 <= 1.0) || !(w2 > 0.0 && w2 <= 1.0)) throw InputError("cost weights must lie in (0,1]");
  return w1 * p.shape.crosstalk + p.shape.depth + 3.0 * w2 * p.swap_count();
}

namespace detail {

/// Connected components of the coupling graph induced on `nodes`, each
/// sorted, ordered by smallest member.
inline std::vector<std::vector<int>> induced_components(const std::set<int>& nodes, const CouplingGraph& graph) {
  std::vector<std::vector<int>> comps;
  std::set<int> seen;
  for (int s : nodes) {
    if (seen.count(s)) continue;
    std::vector<int> comp;
    std::deque<int> q{s};
    seen.insert(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      comp.push_back(u);
      for (int v : graph.neighbors(u))
        if (nodes.count(v) && seen.insert(v).second) q.push_back(v);
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

inline std::set<int> positions(const std::vector<int>& logical, const Mapping& m) {
  std::set<int> out;
  for (int q : logical) out.insert(m.physical(q));
  return out;
}

inline void shortest_paths(const CouplingGraph& graph, int from, int to, std::vector<int>& path,
                           std::vector<std::vector<int>>& out, std::size_t limit) {
  if (out.size() >= limit) return;
  if (from == to) {
    out.push_back(path);
    return;
  }
  const int d = graph.distance(from, to);
  for (int nb : graph.neighbors(from))
    if (graph.distance(nb, to) == d - 1) {
      path.push_back(nb);
      shortest_paths(graph, nb, to, path, out, limit);
      path.pop_back();
    }
}

inline CircuitPattern finish_pattern(const std::vector<int>& support, const Mapping& m, std::vector<Edge> swaps,
                                     const CouplingGraph& graph) {
  CircuitPattern p;
  p.swaps = std::move(swaps);
  p.mapping_after = m;
  auto pos = positions(support, m);
  p.nodes.assign(pos.begin(), pos.end());
  std::vector<std::pair<int, int>> pairs;
  for (const Edge& e : graph.edges())
    if (pos.count(e.a) && pos.count(e.b)) {
      p.connected_edges.push_back(e);
      pairs.emplace_back(e.a, e.b);
    }
  p.shape = calculate_depths(p.nodes, pairs);
  return p;
}

inline void grow_patterns(const std::vector<int>& support, const Mapping& m, const std::vector<Edge>& swaps,
                          const CouplingGraph& graph, std::vector<CircuitPattern>& out, std::size_t cap) {
  if (out.size() >= cap) return;
  auto comps = induced_components(positions(support, m), graph);
  if (comps.size() <= 1) {
    out.push_back(finish_pattern(support, m, swaps, graph));
    return;
  }
  std::size_t a_idx = 0;
  for (std::size_t i = 1; i < comps.size(); ++i)
    if (comps[i].size() > comps[a_idx].size()) a_idx = i;
  std::size_t b_idx = comps.size();
  int dmin = 0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (i == a_idx) continue;
    int d = std::numeric_limits<int>::max();
    for (int a : comps[a_idx])
      for (int b : comps[i]) d = std::min(d, graph.distance(a, b));
    if (b_idx == comps.size() || d < dmin) {
      b_idx = i;
      dmin = d;
    }
  }
  for (int a : comps[a_idx])
    for (int b : comps[b_idx]) {
      if (graph.distance(a, b) != dmin) continue;
      std::vector<std::vector<int>> paths;
      std::vector<int> path{a};
      shortest_paths(graph, a, b, path, paths, 16);
      for (const auto& pth : paths)
        for (int k = 0; k < dmin; ++k) {
          Mapping m2 = m;
          std::vector<Edge> sw = swaps;
          for (int i = 0; i < k; ++i) {
            Edge e(pth[static_cast<std::size_t>(i)], pth[static_cast<std::size_t>(i) + 1]);
            m2.apply_swap(e);
            sw.push_back(e);
          }
          for (int i = dmin; i > k + 1; --i) {
            Edge e(pth[static_cast<std::size_t>(i)], pth[static_cast<std::size_t>(i) - 1]);
            m2.apply_swap(e);
            sw.push_back(e);
          }
          if (induced_components(positions(support, m2), graph).size() >= comps.size()) continue;
          grow_patterns(support, m2, sw, graph, out, cap);
          if (out.size() >= cap) return;
        }
    }
}

}  // namespace detail

/// SWAP patterns that connect the string's qubits: repeatedly join the
/// largest component with its nearest neighbor component along a
/// shortest path, trying every split of the walk between the two ends.
/// A step must reduce the number of components. At most `cap` patterns.
inline std::vector<CircuitPattern> enumerate_patterns(const std::vector<int>& support, const Mapping& mapping,
                                                      const CouplingGraph& graph, std::size_t cap = 64) {
  std::vector<CircuitPattern> out;
  detail::grow_patterns(support, mapping, {}, graph, out, cap);
  return out;
}

/// SWAPs still needed to connect `next_support` under `mapping`: the
/// spanning tree's excess weight.
inline int extra_swaps(const std::vector<int>& next_support, const Mapping& mapping, const CouplingGraph& graph) {
  if (next_support.size() < 2) return 0;
  int extra = 0;
  for (const auto& e : mst(build_qubit_graph(next_support, mapping, graph))) extra += e.w - 1;
  return extra;
}

/// Index (into `tied`) of the pattern leaving the next string cheapest to
/// connect, lowest index on ties.
inline std::size_t lookahead_select(const std::vector<CircuitPattern>& tied, const std::vector<int>& next_support,
                                    const CouplingGraph& graph) {
  if (tied.empty()) throw InvariantError("lookahead over no patterns");
  std::size_t best = 0;
  int best_extra = extra_swaps(next_support, tied[0].mapping_after, graph);
  for (std::size_t i = 1; i < tied.size(); ++i) {
    int e = extra_swaps(next_support, tied[i].mapping_after, graph);
    if (e < best_extra) {
      best = i;
      best_extra = e;
    }
  }
  return best;
}

struct SynthOptions {
  double allowance = 0.0;
  AllowanceUnits units = AllowanceUnits::Excess;
  double w1 = 0.5;
  double w2 = 0.5;
  bool lookahead = true;
  RankingWeights ranking;
  std::optional<Mapping> initial_mapping;
  std::size_t pattern_cap = 64;
  CompileOptions::ObserverFn observer;
};

struct PatternChoice {
  std::size_t string_index = 0;
  std::size_t candidates = 0;
  std::size_t tied = 0;
  std::size_t chosen = 0;  // index among all candidates
  double cost = 0.0;
  std::vector<Edge> swaps;
};

struct SynthesisResult {
  ScheduledCircuit schedule;
  LogicalCircuit circuit;  // synthesized gates; op logical_ids refer here
  std::vector<SynthesisTree> trees;  // one per string of weight >= 2
  std::vector<PatternChoice> choices;
};

namespace detail {

class Synthesizer {
 public:
  Synthesizer(const PauliProgram& prog, const CouplingGraph& graph, const CrosstalkProfile& profile,
              const SynthOptions& opt, Mapping initial)
      : prog_(prog),
        graph_(graph),
        profile_(profile),
        opt_(opt),
        tl_(graph, profile, std::move(initial),
            std::isinf(opt.allowance) ? AllowanceBudget::unlimited(opt.units) : AllowanceBudget(opt.allowance, opt.units)) {}

  SynthesisResult run() {
    const int stride = std::max(prog_.num_qubits, 1);
    for (std::size_t i = 0; i < prog_.strings.size(); ++i) {
      const PauliString& s = prog_.strings[i];
      auto sup = s.support();
      if (sup.empty()) continue;
      basis_change(s, /*before=*/true);
      if (sup.size() == 1) {
        rotation(sup[0], s.coefficient);
      } else {
        auto pattern = choose_pattern(i, sup);
        auto tree = grow_tree(sup, pattern, stride);
        rotation(tree.root, s.coefficient);
        uncompute();
        result_.trees.push_back(std::move(tree));
      }
      basis_change(s, /*before=*/false);
      tl_.advance_to(tl_.horizon());
    }
    result_.schedule = tl_.finish();
    result_.circuit = LogicalCircuit(prog_.num_qubits, gates_);
    return std::move(result_);
  }

 private:
  int add_gate(GateKind kind, std::string label, std::vector<int> qubits, std::vector<double> params = {}) {
    Gate g;
    g.id = static_cast<int>(gates_.size());
    g.kind = kind;
    g.label = std::move(label);
    g.qubits = std::move(qubits);
    g.params = std::move(params);
    gates_.push_back(g);
    return g.id;
  }

  PhysicalOp op_at(int gate_id, const Mapping& m) {
    const Gate& g = gates_[static_cast<std::size_t>(gate_id)];
    std::vector<int> phys;
    for (int q : g.qubits) phys.push_back(m.physical(q));
    return op_for_gate(g, phys);
  }

  void basis_change(const PauliString& s, bool before) {
    const Mapping& m = tl_.mapping();
    for (int q : s.support()) {
      switch (s.ops[static_cast<std::size_t>(q)]) {
        case PauliOp::X: tl_.place_asap(op_at(add_gate(GateKind::Single, "h", {q}), m)); break;
        case PauliOp::Y: {
          const double angle = before ? std::numbers::pi / 2 : -std::numbers::pi / 2;
          tl_.place_asap(op_at(add_gate(GateKind::Single, "rx", {q}, {angle}), m));
          break;
        }
        default: break;
      }
    }
    if (before) tl_.advance_to(tl_.horizon());
  }

  void rotation(int root, double coefficient) {
    tl_.place_asap(op_at(add_gate(GateKind::Single, "rz", {root}, {2.0 * coefficient}), tl_.mapping()));
  }

  CircuitPattern choose_pattern(std::size_t index, const std::vector<int>& sup) {
    auto patterns = enumerate_patterns(sup, tl_.mapping(), graph_, opt_.pattern_cap);
    if (patterns.empty()) {
      // Every walk split a component; the tree loop routes on its own.
      log::info("string ", index, ": no component-joining pattern, routing inside the tree loop");
      result_.choices.push_back({index, 0, 0, 0, std::numeric_limits<double>::infinity(), {}});
      CircuitPattern none;
      none.mapping_after = tl_.mapping();
      return none;
    }
    std::vector<double> cost;
    for (auto& p : patterns) cost.push_back(p.total = pattern_cost(p, opt_.w1, opt_.w2));
    const double best = *std::min_element(cost.begin(), cost.end());
    std::vector<std::size_t> tied_idx;
    std::vector<CircuitPattern> tied;
    for (std::size_t i = 0; i < patterns.size(); ++i)
      if (cost[i] <= best + 1e-9) {
        tied_idx.push_back(i);
        tied.push_back(patterns[i]);
      }
    std::size_t pick = 0;
    if (opt_.lookahead && tied.size() > 1)
      for (std::size_t j = index + 1; j < prog_.strings.size(); ++j) {
        auto next = prog_.strings[j].support();
        if (next.size() < 2) continue;
        pick = lookahead_select(tied, next, graph_);
        break;
      }
    PatternChoice c{index, patterns.size(), tied.size(), tied_idx[pick], cost[tied_idx[pick]], tied[pick].swaps};
    log::info("string ", index, ": ", patterns.size(), " patterns, ", tied.size(), " tied, chose #", c.chosen);
    result_.choices.push_back(c);
    return tied[pick];
  }

  /// Closest pair of remaining qubits (distance, then labels); one CX if
  /// they touch, else one SWAP walking the first toward the second.
  std::optional<CsgVertex> closest_pair_step(const std::set<int>& remaining, std::vector<std::pair<int, int>>& dirs) {
    const Mapping& m = tl_.mapping();
    std::tuple<int, int, int> best{std::numeric_limits<int>::max(), -1, -1};
    for (int a : remaining)
      for (int b : remaining)
        if (a < b) best = std::min(best, std::make_tuple(graph_.distance(m.physical(a), m.physical(b)), a, b));
    auto [d, a, b] = best;
    if (a < 0) return std::nullopt;
    const int pa = m.physical(a), pb = m.physical(b);
    if (d == 1) {
      dirs.emplace_back(a, b);
      return make_cgate_vertex(static_cast<int>(dirs.size()) - 1, {pa, pb});
    }
    for (int nb : graph_.neighbors(pa))
      if (graph_.distance(nb, pb) == d - 1) return make_swap_vertex(Edge(pa, nb), {-1});
    throw InvariantError("no shortest-path step between physical qubits");
  }

  SynthesisTree grow_tree(const std::vector<int>& sup, const CircuitPattern& pattern, int stride) {
    const int n_phys = graph_.num_physical();
    SynthesisTree tree;
    tree.remaining.insert(sup.begin(), sup.end());
    std::vector<int> plan_start(pattern.swaps.size(), -1);
    RankingState state;
    int idle = 0, without_cx = 0;
    bool forced = false;
    const long cap = 64L * (static_cast<long>(sup.size()) + static_cast<long>(pattern.swaps.size()) + 1) * (n_phys + 1) + 1000;

    for (long iter = 0; tree.remaining.size() > 1 || tl_.has_active(); ++iter) {
      if (iter > cap) throw StallError("tree synthesis exceeded its iteration cap");
      const std::set<int> busy = tl_.busy();
      const Mapping& m = tl_.mapping();
      std::vector<std::pair<int, int>> dirs;
      std::vector<CsgVertex> cgates, swaps;
      std::map<std::size_t, std::size_t> plan_of;  // swap position -> plan index

      if (tree.remaining.size() > 1) {
        std::vector<int> nodes(tree.remaining.begin(), tree.remaining.end());
        QubitGraph qg = build_qubit_graph(nodes, m, graph_);
        auto tree_edges = mst(qg);
        GateSets sets = derive_gate_sets(tree_edges, qg, graph_, stride);
        std::map<int, int> degree;
        for (const auto& e : tree_edges) {
          ++degree[e.u];
          ++degree[e.v];
        }
        for (const auto& e : sets.cgates) {
          auto [c, t] = assign_direction(e.u, e.v, nodes, tree_edges);
          if (degree[c] != 1) continue;
          const int pc = m.physical(c), pt = m.physical(t);
          if (busy.count(pc) || busy.count(pt)) continue;
          dirs.emplace_back(c, t);
          cgates.push_back(make_cgate_vertex(static_cast<int>(dirs.size()) - 1, {pc, pt}));
        }
        if (!forced) {
          bool plan_left = false;
          for (std::size_t i = 0; i < pattern.swaps.size(); ++i) {
            if (plan_start[i] >= 0) continue;
            plan_left = true;
            const Edge& e = pattern.swaps[i];
            bool ready = !busy.count(e.a) && !busy.count(e.b);
            for (std::size_t j = 0; j < i && ready; ++j)
              if (pattern.swaps[j].shares_qubit(e) && (plan_start[j] < 0 || plan_start[j] + 3 > tl_.now())) ready = false;
            if (!ready) continue;
            plan_of[swaps.size()] = i;
            swaps.push_back(make_swap_vertex(e, {-1}));
          }
          bool plan_running = false;
          for (int st : plan_start)
            if (st >= 0 && st + 3 > tl_.now()) plan_running = true;
          if (!plan_left && !plan_running) {
            const Mapping projected = tl_.projected();
            QubitGraph pqg = build_qubit_graph(nodes, projected, graph_);
            for (auto& v : derive_gate_sets(mst(pqg), pqg, graph_, stride).swaps)
              if (!detail::touches_any(v, busy) && !tl_.last_completed().count(v.edge())) swaps.push_back(std::move(v));
          }
        }
        if (cgates.empty() && swaps.empty() && !tl_.has_active())
          if (auto step = closest_pair_step(tree.remaining, dirs))
            (step->kind == VertexKind::Cgate ? cgates : swaps).push_back(std::move(*step));
      }

      const auto in_progress = tl_.in_progress_vertices();
      Csg csg = build_csg(cgates, swaps, in_progress, profile_, tl_.budget());
      if (csg.size() == 0) {
        tl_.forget_last_completed();
        if (++idle > n_phys) throw StallError("tree synthesis found nothing to schedule");
        continue;
      }
      std::set<int> pins;
      for (std::size_t i = cgates.size() + swaps.size(); i < csg.size(); ++i) pins.insert(static_cast<int>(i));
      auto classes = welsh_powell(csg, pins);
      if (opt_.observer) opt_.observer(csg, classes);
      ColorClass chosen = pins.empty() ? rank_and_select(csg, classes, state, opt_.ranking) : classes.front();
      chosen = detail::drop_cancelling_swaps(csg, std::move(chosen), tl_.projected(), graph_,
                                             [&](int h) { return std::pair{h / stride, h % stride}; });

      std::vector<std::pair<int, int>> committed;
      auto make_op = [&](const CsgVertex& v) {
        auto [c, t] = dirs.at(static_cast<std::size_t>(v.gate_ref));
        committed.emplace_back(c, t);
        return op_at(add_gate(GateKind::Cx, "cx", {c, t}), tl_.mapping());
      };
      for (int mbr : chosen.members) {
        const auto pos = static_cast<std::size_t>(mbr);
        if (pos >= cgates.size() && pos < cgates.size() + swaps.size()) {
          auto it = plan_of.find(pos - cgates.size());
          if (it != plan_of.end()) plan_start[it->second] = tl_.now();
        }
      }
      auto stats = tl_.commit(csg, chosen, make_op);
      for (auto [c, t] : committed) {
        tree = delete_qubit(std::move(tree), c, t);
        ladder_.emplace_back(c, t);
      }
      if (stats.swaps_started > 0) state.helped_last = stats.helped;
      tl_.advance();

      idle = (stats.cgates > 0 || stats.swaps_started > 0) ? 0 : idle + 1;
      if (idle > n_phys) throw StallError("tree synthesis made no progress for " + std::to_string(idle) + " iterations");
      if (stats.cgates > 0) {
        without_cx = 0;
        forced = false;
      } else if (++without_cx >= 3 * n_phys && !forced) {
        log::info("tree synthesis: no CX for ", without_cx, " layers; joining the closest pair directly");
        forced = true;
      }
    }
    if (tree.root < 0) tree.root = *tree.remaining.begin();
    return tree;
  }

  /// Mirrored ladder, each CX routed on demand by walking its control.
  void uncompute() {
    Mapping m = tl_.mapping();
    for (auto it = ladder_.rbegin(); it != ladder_.rend(); ++it) {
      auto [c, t] = *it;
      for (;;) {
        const int pc = m.physical(c), pt = m.physical(t);
        const int d = graph_.distance(pc, pt);
        if (d <= 1) break;
        for (int nb : graph_.neighbors(pc))
          if (graph_.distance(nb, pt) == d - 1) {
            tl_.place_asap(make_swap_op(Edge(pc, nb)));
            m.apply_swap(pc, nb);
            break;
          }
      }
      tl_.place_asap(op_at(add_gate(GateKind::Cx, "cx", {c, t}), m));
    }
    ladder_.clear();
    tl_.advance_to(tl_.horizon());
    if (!(tl_.mapping() == m)) throw InvariantError("uncompute routing left an inconsistent mapping");
  }

  const PauliProgram& prog_;
  const CouplingGraph& graph_;
  const CrosstalkProfile& profile_;
  SynthOptions opt_;
  Timeline tl_;
  std::vector<Gate> gates_;
  std::vector<std::pair<int, int>> ladder_;
  SynthesisResult result_;
};

}  // namespace detail

/// Synthesizes every string in program order; strings are not reordered.
/// The result's schedule verifies against the result's circuit.
inline SynthesisResult synthesize_pauli_program(const PauliProgram& prog, const CouplingGraph& graph,
                                                const CrosstalkProfile& profile, const SynthOptions& opt = {}) {
  if (prog.num_qubits > graph.num_physical())
    throw InputError("program needs " + std::to_string(prog.num_qubits) + " qubits but the device has " +
                     std::to_string(graph.num_physical()));
  Mapping initial = opt.initial_mapping ? *opt.initial_mapping : Mapping::identity(prog.num_qubits, graph.num_physical());
  if (initial.num_logical() != prog.num_qubits || initial.num_physical() != graph.num_physical())
    throw InputError("initial mapping does not match program and device sizes");
  return detail::Synthesizer(prog, graph, profile, opt, std::move(initial)).run();
}

}  // namespace xroute
