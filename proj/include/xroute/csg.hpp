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

// Candidate set graph: one vertex per gate that could start in the next
// layer (ready circuit gates, useful SWAPs) plus the SWAPs still running,
// joined by edges that forbid concurrency.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "xroute/circuit.hpp"
#include "xroute/hardware.hpp"

namespace xroute {

enum class VertexKind { Cgate, CandidateSwap, InProgressSwap };

struct CsgVertex {
  int id = -1;
  VertexKind kind = VertexKind::Cgate;
  /// Logical gate id for Cgates (and for in-progress logical swaps), else -1.
  int gate_ref = -1;
  /// 1 or 2 physical qubits. For a CX Cgate the order is (control, target).
  std::vector<int> physical_qubits;
  /// Layers left, in {1,2}; InProgressSwap only.
  int remaining_time = 0;
  /// Gates whose endpoint distance this SWAP reduces by one.
  std::set<int> helps;

  bool is_two_qubit() const { return physical_qubits.size() == 2; }
  bool is_swap() const { return kind != VertexKind::Cgate; }
  Edge edge() const { return Edge(physical_qubits.at(0), physical_qubits.at(1)); }
  bool touches(int q) const {
    return std::find(physical_qubits.begin(), physical_qubits.end(), q) != physical_qubits.end();
  }

  std::string label() const {
    switch (kind) {
      case VertexKind::Cgate: return "C:" + std::to_string(gate_ref);
      case VertexKind::CandidateSwap: return "S:" + edge().str();
      case VertexKind::InProgressSwap: return "P:" + edge().str() + ":" + std::to_string(remaining_time);
    }
    return "?";
  }
};

inline CsgVertex make_cgate_vertex(int gate_id, std::vector<int> physical) {
  CsgVertex v;
  v.kind = VertexKind::Cgate;
  v.gate_ref = gate_id;
  v.physical_qubits = std::move(physical);
  return v;
}

inline CsgVertex make_swap_vertex(const Edge& e, std::set<int> helps) {
  CsgVertex v;
  v.kind = VertexKind::CandidateSwap;
  v.physical_qubits = {e.a, e.b};
  v.helps = std::move(helps);
  return v;
}

inline CsgVertex make_in_progress_vertex(const Edge& e, int remaining, int gate_ref = -1) {
  if (remaining < 1 || remaining > 2) throw InvariantError("in-progress SWAP must have 1 or 2 layers left");
  CsgVertex v;
  v.kind = VertexKind::InProgressSwap;
  v.gate_ref = gate_ref;
  v.physical_qubits = {e.a, e.b};
  v.remaining_time = remaining;
  return v;
}

/// A profiled pair between two vertices; `cost` is in allowance units.
struct CrosstalkPair {
  int u = 0;
  int v = 0;
  double excess = 0.0;
  double cost = 0.0;
};

class Csg {
 public:
  std::vector<CsgVertex> vertices;
  std::vector<std::pair<int, int>> conflict_edges;
  /// Crosstalk the remaining allowance cannot cover; these forbid concurrency.
  std::vector<CrosstalkPair> crosstalk_edges;
  /// Crosstalk that was removed from the graph, i.e. allowed to happen.
  std::vector<CrosstalkPair> permitted;

  std::size_t size() const { return vertices.size(); }

  void index() {
    adj_.assign(vertices.size(), {});
    for (auto [u, v] : conflict_edges) link(u, v);
    for (const auto& p : crosstalk_edges) link(p.u, p.v);
  }

  const std::set<int>& neighbors(int u) const { return adj_.at(static_cast<std::size_t>(u)); }
  bool adjacent(int u, int v) const { return neighbors(u).count(v) > 0; }
  int degree(int u) const { return static_cast<int>(neighbors(u).size()); }

  std::vector<std::pair<int, int>> all_edges() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t u = 0; u < adj_.size(); ++u)
      for (int v : adj_[u])
        if (static_cast<int>(u) < v) out.emplace_back(static_cast<int>(u), v);
    return out;
  }

  int count(VertexKind k) const {
    return static_cast<int>(std::count_if(vertices.begin(), vertices.end(), [k](const CsgVertex& v) { return v.kind == k; }));
  }

 private:
  void link(int u, int v) {
    adj_.at(static_cast<std::size_t>(u)).insert(v);
    adj_.at(static_cast<std::size_t>(v)).insert(u);
  }

  std::vector<std::set<int>> adj_;
};

/// Ready gates whose logical qubits sit on adjacent physical qubits.
/// Single-qubit gates are always executable. The allowance plays no part
/// here; it only filters crosstalk edges.
inline std::vector<CsgVertex> get_executable(const LogicalCircuit& circuit, const std::set<int>& executed,
                                             const Mapping& mapping, const CouplingGraph& graph) {
  std::vector<CsgVertex> out;
  for (int id : frontier(circuit, executed)) {
    const Gate& g = circuit.gate(id);
    std::vector<int> phys;
    for (int q : g.qubits) phys.push_back(mapping.physical(q));
    if (phys.size() == 2 && !graph.has_edge(phys[0], phys[1])) continue;
    out.push_back(make_cgate_vertex(id, std::move(phys)));
  }
  return out;
}

/// SWAPs on coupling edges that bring the endpoints of some ready,
/// non-adjacent two-qubit gate one hop closer. Edges in `exclude` are
/// skipped. Result is ordered by edge.
inline std::vector<CsgVertex> get_useful_swaps(const LogicalCircuit& circuit, const std::set<int>& executed,
                                               const Mapping& mapping, const CouplingGraph& graph,
                                               const std::set<Edge>& exclude = {}) {
  std::map<Edge, std::set<int>> helps;
  for (int id : frontier(circuit, executed)) {
    const Gate& g = circuit.gate(id);
    if (!g.is_two_qubit()) continue;
    const int pa = mapping.physical(g.qubits[0]);
    const int pb = mapping.physical(g.qubits[1]);
    const int d = graph.distance(pa, pb);
    if (d <= 1) continue;
    for (auto [from, other] : {std::pair{pa, pb}, std::pair{pb, pa}})
      for (int n : graph.neighbors(from))
        if (graph.distance(n, other) == d - 1) {
          Edge e(from, n);
          if (!exclude.count(e)) helps[e].insert(id);
        }
  }
  std::vector<CsgVertex> out;
  for (auto& [e, h] : helps) out.push_back(make_swap_vertex(e, std::move(h)));
  return out;
}

/// Assembles the graph. Vertex ids follow the order cgates, swaps,
/// in_progress. Crosstalk pairs are sorted by (cost, u, v) and permitted
/// while their running cost fits in the budget. Two in-progress SWAPs
/// never get a crosstalk edge: their pair was charged when the later one
/// started.
inline Csg build_csg(const std::vector<CsgVertex>& cgates, const std::vector<CsgVertex>& swaps,
                     const std::vector<CsgVertex>& in_progress, const CrosstalkProfile& profile,
                     const AllowanceBudget& budget) {
  Csg csg;
  for (const auto* group : {&cgates, &swaps, &in_progress})
    for (CsgVertex v : *group) {
      v.id = static_cast<int>(csg.vertices.size());
      csg.vertices.push_back(std::move(v));
    }
  const int n = static_cast<int>(csg.vertices.size());
  std::vector<CrosstalkPair> candidates;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      const CsgVertex& x = csg.vertices[static_cast<std::size_t>(u)];
      const CsgVertex& y = csg.vertices[static_cast<std::size_t>(v)];
      bool shared = std::any_of(x.physical_qubits.begin(), x.physical_qubits.end(), [&](int q) { return y.touches(q); });
      if (shared) {
        csg.conflict_edges.emplace_back(u, v);
        continue;
      }
      if (!x.is_two_qubit() || !y.is_two_qubit()) continue;
      if (x.kind == VertexKind::InProgressSwap && y.kind == VertexKind::InProgressSwap) continue;
      if (auto rec = profile.lookup(x.edge(), y.edge())) {
        double ex = profile.excess(x.edge(), y.edge());
        candidates.push_back({u, v, ex, budget.cost(ex)});
      }
    }
  std::sort(candidates.begin(), candidates.end(), [](const CrosstalkPair& a, const CrosstalkPair& b) {
    return std::tie(a.cost, a.u, a.v) < std::tie(b.cost, b.u, b.v);
  });
  double spent = 0.0;
  std::size_t i = 0;
  for (; i < candidates.size() && budget.affords(spent + candidates[i].cost); ++i) {
    spent += candidates[i].cost;
    csg.permitted.push_back(candidates[i]);
  }
  csg.crosstalk_edges.assign(candidates.begin() + static_cast<std::ptrdiff_t>(i), candidates.end());
  csg.index();
  return csg;
}

inline std::string to_dot(const Csg& csg) {
  std::ostringstream os;
  os << "graph csg {\n";
  for (const auto& v : csg.vertices) os << "  " << v.id << " [label=\"" << v.label() << "\"];\n";
  for (auto [u, v] : csg.conflict_edges) os << "  " << u << " -- " << v << " [kind=conflict];\n";
  for (const auto& p : csg.crosstalk_edges)
    os << "  " << p.u << " -- " << p.v << " [kind=xtalk, excess=" << detail::format_real(p.excess) << "];\n";
  os << "}\n";
  return os.str();
}

}  // namespace xroute
