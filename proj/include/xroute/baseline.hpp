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

// Crosstalk-oblivious reference compiler: gates in program order, each
// routed by walking its first qubit along a shortest path, then list
// scheduled either with unlimited overlap or with every interfering pair
// delayed apart.

#include <vector>

#include "xroute/circuit.hpp"
#include "xroute/hardware.hpp"
#include "xroute/scheduler.hpp"

namespace xroute {

/// Ops in emission order. Next hops are the lowest-index neighbor that
/// shortens the distance.
inline std::vector<PhysicalOp> route_oblivious(const LogicalCircuit& circuit, const CouplingGraph& graph, Mapping mapping) {
  std::vector<PhysicalOp> ops;
  for (const Gate& g : circuit.gates()) {
    if (g.is_two_qubit()) {
      for (;;) {
        const int pa = mapping.physical(g.qubits[0]);
        const int pb = mapping.physical(g.qubits[1]);
        const int d = graph.distance(pa, pb);
        if (d <= 1) break;
        for (int nb : graph.neighbors(pa))
          if (graph.distance(nb, pb) == d - 1) {
            ops.push_back(make_swap_op(Edge(pa, nb)));
            mapping.apply_swap(pa, nb);
            break;
          }
      }
    }
    std::vector<int> phys;
    for (int q : g.qubits) phys.push_back(mapping.physical(q));
    ops.push_back(op_for_gate(g, phys));
  }
  return ops;
}

/// ASAP list schedule of an op sequence under the given budget.
inline ScheduledCircuit list_schedule(const std::vector<PhysicalOp>& ops, const CouplingGraph& graph,
                                      const CrosstalkProfile& profile, const Mapping& initial, AllowanceBudget budget) {
  Timeline tl(graph, profile, initial, budget);
  for (const auto& op : ops) tl.place_asap(op);
  return tl.finish();
}

/// Maximal parallelism, crosstalk ignored.
inline ScheduledCircuit baseline_max_parallel(const LogicalCircuit& circuit, const CouplingGraph& graph,
                                              const CrosstalkProfile& profile, const Mapping& initial) {
  return list_schedule(route_oblivious(circuit, graph, initial), graph, profile, initial, AllowanceBudget::unlimited());
}

/// Same routing, with any op that would overlap an interfering op pushed
/// later until no crosstalk pair remains.
inline ScheduledCircuit baseline_delayed(const LogicalCircuit& circuit, const CouplingGraph& graph,
                                         const CrosstalkProfile& profile, const Mapping& initial) {
  return list_schedule(route_oblivious(circuit, graph, initial), graph, profile, initial,
                       AllowanceBudget(0.0, AllowanceUnits::Pairs));
}

}  // namespace xroute
