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

// Independent replay of a schedule against its logical circuit.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xroute/circuit.hpp"
#include "xroute/hardware.hpp"
#include "xroute/scheduler.hpp"

namespace xroute {

enum class Violation {
  None,
  Placement,   ///< gate missing, repeated, on the wrong or non-adjacent qubits
  Dependence,  ///< gate started before a predecessor finished
  DoubleBook,  ///< physical qubit used twice in one layer
  Other,       ///< malformed SWAP slices, mapping mismatch
};

struct Verdict {
  Violation kind = Violation::None;
  int layer = -1;
  std::string message;

  bool ok() const { return kind == Violation::None; }
  char code() const {
    switch (kind) {
      case Violation::None: return '-';
      case Violation::Placement: return 'a';
      case Violation::Dependence: return 'b';
      case Violation::DoubleBook: return 'c';
      case Violation::Other: return 'x';
    }
    return '?';
  }
};

inline Verdict verify_routing(const ScheduledCircuit& sched, const LogicalCircuit& circuit, const CouplingGraph& graph) {
  auto fail = [](Violation k, int layer, std::string msg) { return Verdict{k, layer, "layer " + std::to_string(layer) + ": " + std::move(msg)}; };
  const int n = graph.num_physical();
  if (sched.initial_mapping.num_logical() != circuit.num_qubits() || sched.initial_mapping.num_physical() != n)
    return fail(Violation::Other, -1, "initial mapping does not match program and device");

  Mapping mapping = sched.initial_mapping;
  std::vector<int> start(circuit.size(), -1);
  std::vector<int> finish(circuit.size(), -1);
  struct Open {
    Edge edge;
    std::optional<int> logical_id;
    int next_slice;
  };
  std::map<Edge, Open> open;  // SWAPs with slices still to come

  for (int t = 0; t < sched.depth_cx(); ++t) {
    const Layer& layer = sched.layers[static_cast<std::size_t>(t)];
    std::set<int> used;
    std::set<Edge> continued;
    for (const PhysicalOp& op : layer) {
      for (int q : op.qubits) {
        if (q < 0 || q >= n) return fail(Violation::Other, t, "qubit " + std::to_string(q) + " out of range");
        if (!used.insert(q).second) return fail(Violation::DoubleBook, t, "physical qubit " + std::to_string(q) + " double-booked");
      }
      if (op.kind == OpKind::SwapSlice) {
        if (op.qubits.size() != 2 || !graph.has_edge(op.qubits[0], op.qubits[1]))
          return fail(Violation::Placement, t, "swap slice off the coupling graph");
        const Edge e = op.edge();
        auto it = open.find(e);
        if (op.slice == 0) {
          if (it != open.end()) return fail(Violation::Other, t, "swap " + e.str() + " restarted before finishing");
          open[e] = Open{e, op.logical_id, 1};
        } else {
          if (it == open.end() || it->second.next_slice != op.slice || it->second.logical_id != op.logical_id)
            return fail(Violation::Other, t, "swap " + e.str() + " slice " + std::to_string(op.slice) + " out of sequence");
          ++it->second.next_slice;
        }
        continued.insert(e);
        if (op.slice != 0) continue;
      }
      if (!op.logical_id) {
        if (op.kind != OpKind::SwapSlice) return fail(Violation::Other, t, "operation without logical gate");
        continue;
      }
      const int id = *op.logical_id;
      if (id < 0 || static_cast<std::size_t>(id) >= circuit.size())
        return fail(Violation::Placement, t, "unknown logical gate " + std::to_string(id));
      const Gate& g = circuit.gate(id);
      if (start[static_cast<std::size_t>(id)] >= 0)
        return fail(Violation::Placement, t, "gate " + std::to_string(id) + " executed twice");
      if (g.qubits.size() != op.qubits.size())
        return fail(Violation::Placement, t, "gate " + std::to_string(id) + " has the wrong arity");
      for (std::size_t i = 0; i < g.qubits.size(); ++i)
        if (mapping.physical(g.qubits[i]) != op.qubits[i])
          return fail(Violation::Placement, t, "gate " + std::to_string(id) + " not on the images of its logical qubits");
      if (g.is_two_qubit() && !graph.has_edge(op.qubits[0], op.qubits[1]))
        return fail(Violation::Placement, t, "gate " + std::to_string(id) + " on non-adjacent qubits");
      if ((g.kind == GateKind::Swap) != (op.kind == OpKind::SwapSlice))
        return fail(Violation::Placement, t, "gate " + std::to_string(id) + " emitted as the wrong kind");
      for (int p : circuit.predecessors(id)) {
        int f = finish[static_cast<std::size_t>(p)];
        if (f < 0 || f >= t)
          return fail(Violation::Dependence, t, "gate " + std::to_string(id) + " runs before predecessor " + std::to_string(p));
      }
      start[static_cast<std::size_t>(id)] = t;
      finish[static_cast<std::size_t>(id)] = t + gate_duration(g.kind) - 1;
    }
    for (auto it = open.begin(); it != open.end();) {
      if (!continued.count(it->first))
        return fail(Violation::Other, t, "swap " + it->first.str() + " interrupted");
      if (it->second.next_slice == 3) {
        if (!it->second.logical_id) mapping.apply_swap(it->first);
        it = open.erase(it);
      } else {
        ++it;
      }
    }
    if (static_cast<std::size_t>(t) < sched.mapping_history.size() && !(sched.mapping_history[static_cast<std::size_t>(t)] == mapping))
      return fail(Violation::Other, t, "mapping history disagrees with replay");
  }
  const int end = sched.depth_cx();
  if (!open.empty()) return fail(Violation::Other, end, "swap " + open.begin()->first.str() + " never finished");
  for (std::size_t g = 0; g < circuit.size(); ++g)
    if (start[g] < 0) return fail(Violation::Placement, end, "gate " + std::to_string(g) + " never executed");
  if (!sched.mapping_history.empty() && !(sched.final_mapping == mapping))
    return fail(Violation::Other, end, "final mapping disagrees with replay");
  return {};
}

/// Summed ledger usage must stay inside the allowance the compile ran with.
inline bool ledger_within(const ScheduledCircuit& sched, double allowance, AllowanceUnits units) {
  return sched.allowance_used(units) <= allowance + 1e-9;
}

}  // namespace xroute
