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

// Fixture access and hand-rolled random generators shared by the tests.

#pragma once

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "xroute/xroute.hpp"

namespace xroute::testing {

inline std::string fixture_path(const std::string& name) { return std::string(XROUTE_FIXTURES) + "/" + name; }
inline std::string fixture(const std::string& name) { return read_file(fixture_path(name)); }
inline Device device(const std::string& name) { return load_hardware(fixture_path(name)); }

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

/// Random spanning tree (each node attaches to an earlier one) plus extra
/// edges with probability `extra`.
inline std::vector<Edge> random_connected_edges(Rng& rng, int n, double extra) {
  std::set<Edge> edges;
  for (int v = 1; v < n; ++v) edges.insert(Edge(v, uniform_int(rng, 0, v - 1)));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (coin(rng, extra)) edges.insert(Edge(a, b));
  return {edges.begin(), edges.end()};
}

inline CouplingGraph random_graph(Rng& rng, int n, double extra = 0.2) {
  CouplingGraphParams p;
  p.num_physical = n;
  p.edges = random_connected_edges(rng, n, extra);
  for (const Edge& e : p.edges) p.edge_error[e] = uniform_real(rng, 0.005, 0.05);
  for (int q = 0; q < n; ++q) {
    p.t1[q] = uniform_real(rng, 50.0, 300.0);
    p.t2[q] = uniform_real(rng, 50.0, 300.0);
    p.single_qubit_error[q] = uniform_real(rng, 0.0, 0.002);
  }
  return CouplingGraph(std::move(p));
}

/// Profiles each pair of disjoint edges with probability `density`.
inline CrosstalkProfile random_profile(Rng& rng, const CouplingGraph& g, double density) {
  std::vector<CrosstalkRecord> recs;
  const auto& edges = g.edges();
  for (std::size_t i = 0; i < edges.size(); ++i)
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      if (edges[i].shares_qubit(edges[j]) || !coin(rng, density)) continue;
      const double b1 = *g.edge_error(edges[i]);
      const double b2 = *g.edge_error(edges[j]);
      recs.push_back({edges[i], edges[j], b1 * uniform_real(rng, 1.0, 8.0), b2 * uniform_real(rng, 1.0, 8.0)});
    }
  return CrosstalkProfile(g, recs);
}

/// Mix of CX, rzz, logical swap and single-qubit gates.
inline LogicalCircuit random_circuit(Rng& rng, int nq, int ngates) {
  std::vector<Gate> gates;
  for (int i = 0; i < ngates; ++i) {
    Gate g;
    g.id = i;
    const int roll = uniform_int(rng, 0, 9);
    if (nq < 2 || roll == 0) {
      g.kind = GateKind::Single;
      g.label = "h";
      g.qubits = {uniform_int(rng, 0, nq - 1)};
    } else {
      int a = uniform_int(rng, 0, nq - 1);
      int b = uniform_int(rng, 0, nq - 2);
      if (b >= a) ++b;
      g.qubits = {a, b};
      if (roll == 1) {
        g.kind = GateKind::Swap;
        g.label = "swap";
      } else if (roll == 2) {
        g.kind = GateKind::TwoQubit;
        g.label = "rzz";
        g.params = {uniform_real(rng, -1.0, 1.0)};
      } else {
        g.kind = GateKind::Cx;
        g.label = "cx";
      }
    }
    gates.push_back(std::move(g));
  }
  return LogicalCircuit(nq, std::move(gates));
}

inline Mapping random_mapping(Rng& rng, int nl, int np) {
  std::vector<int> phys(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) phys[static_cast<std::size_t>(i)] = i;
  std::shuffle(phys.begin(), phys.end(), rng);
  phys.resize(static_cast<std::size_t>(nl));
  return Mapping(std::move(phys), np);
}

inline PauliString random_pauli(Rng& rng, int n, int min_weight) {
  for (;;) {
    std::string s;
    for (int i = 0; i < n; ++i) s.push_back("IXYZ"[uniform_int(rng, 0, 3)]);
    auto p = PauliString::parse(s, uniform_real(rng, -1.0, 1.0));
    if (static_cast<int>(p.weight()) >= min_weight) return p;
  }
}

}  // namespace xroute::testing
