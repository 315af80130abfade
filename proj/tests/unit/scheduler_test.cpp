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

#include <gtest/gtest.h>

#include "support.hpp"

namespace xroute {
namespace {

using testing::Rng;

ScheduledCircuit hand_built(int n_phys, int n_logical, std::vector<Layer> layers) {
  ScheduledCircuit s;
  s.num_physical = n_phys;
  s.initial_mapping = Mapping::identity(n_logical, n_phys);
  s.layers = std::move(layers);
  replay_mappings(s);
  return s;
}

PhysicalOp cx(const LogicalCircuit& c, int id, int a, int b) { return op_for_gate(c.gate(id), {a, b}); }

TEST(Compile, Ladder6AtZeroAllowance) {
  auto dev = testing::device("ladder6.json");
  auto c = parse_circuit(testing::fixture("ladder6.qc"));
  CompileOptions opt;
  auto s = compile_circuit(c, dev.graph, dev.profile, opt);
  EXPECT_EQ(s.depth_cx(), 4);
  EXPECT_TRUE(s.ledger.empty());
  EXPECT_TRUE(verify_routing(s, c, dev.graph).ok());
  EXPECT_EQ(s.layers[0].size(), 2u);
  EXPECT_EQ(s.layers[0][0].edge(), Edge(0, 1));
  EXPECT_EQ(s.layers[0][1].edge(), Edge(3, 4));
}

TEST(Compile, SingleExecutableCx) {
  auto dev = testing::device("ladder6.json");
  auto c = parse_circuit("qubits 2\ncx 0 1\n");
  auto s = compile_circuit(c, dev.graph, dev.profile);
  EXPECT_EQ(s.depth_cx(), 1);
  EXPECT_TRUE(verify_routing(s, c, dev.graph).ok());
}

TEST(Compile, InterferingPairSharesLayerOnlyWhenAllowed) {
  auto dev = testing::device("ladder6.json");
  auto c = parse_circuit("qubits 6\ncx 0 1\ncx 4 5\n");
  CompileOptions opt;
  opt.allowance = 0.18;
  auto together = compile_circuit(c, dev.graph, dev.profile, opt);
  EXPECT_EQ(together.depth_cx(), 1);
  ASSERT_EQ(together.ledger.size(), 1u);
  EXPECT_NEAR(together.ledger[0].excess, 0.18, 1e-12);
  EXPECT_TRUE(ledger_within(together, opt.allowance, opt.units));

  opt.allowance = 0.1;
  auto apart = compile_circuit(c, dev.graph, dev.profile, opt);
  EXPECT_EQ(apart.depth_cx(), 2);
  EXPECT_TRUE(apart.ledger.empty());

  opt.allowance = 1.0;
  opt.units = AllowanceUnits::Pairs;
  EXPECT_EQ(compile_circuit(c, dev.graph, dev.profile, opt).ledger.size(), 1u);
}

TEST(Compile, LogicalSwapAndSingleQubitGates) {
  auto dev = testing::device("ladder6.json");
  auto c = parse_circuit("qubits 3\nu h 0\nswap 0 1\ncx 1 2\nu x 2\n");
  auto s = compile_circuit(c, dev.graph, dev.profile);
  EXPECT_TRUE(verify_routing(s, c, dev.graph).ok()) << verify_routing(s, c, dev.graph).message;
  EXPECT_EQ(s.depth_cx(), 6);
  EXPECT_EQ(s.final_mapping, s.initial_mapping);
}

TEST(Compile, GreedyLayoutPlacesPartnersClose) {
  auto dev = testing::device("tree7.json");
  auto c = parse_circuit("qubits 3\ncx 0 2\ncx 2 1\n");
  auto m = greedy_layout(c, dev.graph);
  EXPECT_EQ(dev.graph.distance(m.physical(0), m.physical(2)), 1);
  CompileOptions opt;
  opt.layout = Layout::Greedy;
  auto s = compile_circuit(c, dev.graph, dev.profile, opt);
  EXPECT_EQ(s.initial_mapping, m);
  EXPECT_TRUE(verify_routing(s, c, dev.graph).ok());
}

TEST(Compile, RejectsOversizedPrograms) {
  auto dev = testing::device("ladder6.json");
  auto c = parse_circuit("qubits 7\ncx 0 6\n");
  EXPECT_THROW(compile_circuit(c, dev.graph, dev.profile), InputError);
  CompileOptions bad;
  bad.ranking.top_k = 0;
  EXPECT_THROW(compile_circuit(parse_circuit("qubits 2\ncx 0 1\n"), dev.graph, dev.profile, bad), InputError);
}

TEST(Compile, EmptyCircuit) {
  auto dev = testing::device("ladder6.json");
  auto c = parse_circuit(testing::fixture("empty.qc"));
  auto s = compile_circuit(c, dev.graph, dev.profile);
  EXPECT_EQ(s.depth_cx(), 0);
  EXPECT_TRUE(verify_routing(s, c, dev.graph).ok());
}

TEST(Verify, FlagsEachViolationKind) {
  CouplingGraphParams p;
  p.num_physical = 3;
  p.edges = {Edge(0, 1), Edge(1, 2)};
  CouplingGraph g(p);

  auto far = parse_circuit("qubits 3\ncx 0 2\n");
  auto v = verify_routing(hand_built(3, 3, {{cx(far, 0, 0, 2)}}), far, g);
  EXPECT_EQ(v.code(), 'a');

  auto chain = parse_circuit("qubits 3\ncx 0 1\ncx 1 2\n");
  v = verify_routing(hand_built(3, 3, {{cx(chain, 1, 1, 2)}, {cx(chain, 0, 0, 1)}}), chain, g);
  EXPECT_EQ(v.code(), 'b');
  EXPECT_EQ(v.layer, 0);

  auto pair = parse_circuit("qubits 3\ncx 0 1\ncx 2 1\n");
  auto both = Layer{cx(pair, 0, 0, 1), cx(pair, 1, 2, 1)};
  EXPECT_EQ(verify_routing(hand_built(3, 3, {both}), pair, g).code(), 'c');

  v = verify_routing(hand_built(3, 3, {{cx(chain, 0, 0, 1)}}), chain, g);
  EXPECT_EQ(v.code(), 'a');
  v = verify_routing(hand_built(3, 3, {{cx(chain, 0, 0, 1)}, {cx(chain, 0, 0, 1)}, {cx(chain, 1, 1, 2)}}), chain, g);
  EXPECT_EQ(v.code(), 'a');

  // Gate on the wrong physical pair after a routing SWAP moved its qubits.
  auto after_swap = parse_circuit("qubits 3\ncx 0 2\n");
  PhysicalOp s0 = make_swap_op(Edge(0, 1)), s1 = s0, s2 = s0;
  s0.slice = 0;
  s1.slice = 1;
  s2.slice = 2;
  EXPECT_TRUE(verify_routing(hand_built(3, 3, {{s0}, {s1}, {s2}, {cx(after_swap, 0, 1, 2)}}), after_swap, g).ok());
  EXPECT_EQ(verify_routing(hand_built(3, 3, {{s0}, {s1}, {s2}, {cx(after_swap, 0, 0, 1)}}), after_swap, g).code(), 'a');
  EXPECT_EQ(verify_routing(hand_built(3, 3, {{s0}, {s2}, {cx(after_swap, 0, 1, 2)}}), after_swap, g).code(), 'x');
}

TEST(TimelineAsap, DelaysInterferingOpsUnderZeroAllowance) {
  auto dev = testing::device("ladder6.json");
  auto c = parse_circuit("qubits 6\ncx 0 1\ncx 5 4\n");
  std::vector<PhysicalOp> ops{cx(c, 0, 0, 1), cx(c, 1, 5, 4)};
  auto delayed = list_schedule(ops, dev.graph, dev.profile, Mapping::identity(6, 6), AllowanceBudget(0.0));
  EXPECT_EQ(delayed.depth_cx(), 2);
  EXPECT_TRUE(delayed.ledger.empty());
  auto packed = list_schedule(ops, dev.graph, dev.profile, Mapping::identity(6, 6), AllowanceBudget::unlimited());
  EXPECT_EQ(packed.depth_cx(), 1);
  ASSERT_EQ(packed.ledger.size(), 1u);
  EXPECT_EQ(packed.ledger[0].layer, 0);
  // A SWAP overlapping a later CX is charged at the CX's start layer.
  std::vector<PhysicalOp> staggered{make_swap_op(Edge(0, 1)), cx(c, 1, 5, 4)};
  Timeline tl(dev.graph, dev.profile, Mapping::identity(6, 6), AllowanceBudget::unlimited());
  tl.place_asap(staggered[0]);
  tl.advance();
  tl.place_asap(staggered[1]);
  auto s = tl.finish();
  ASSERT_EQ(s.ledger.size(), 1u);
  EXPECT_EQ(s.ledger[0].layer, 1);
}

TEST(Baseline, Ladder6DelayedDepthIsSeven) {
  auto dev = testing::device("ladder6.json");
  auto c = parse_circuit(testing::fixture("ladder6.qc"));
  auto id = Mapping::identity(6, 6);
  auto packed = baseline_max_parallel(c, dev.graph, dev.profile, id);
  EXPECT_EQ(packed.depth_cx(), 4);
  EXPECT_FALSE(packed.ledger.empty());
  auto delayed = baseline_delayed(c, dev.graph, dev.profile, id);
  EXPECT_EQ(delayed.depth_cx(), 7);
  EXPECT_TRUE(delayed.ledger.empty());
  EXPECT_TRUE(verify_routing(delayed, c, dev.graph).ok());
}

TEST(CancellingSwaps, SecondSwapUndoingTheFirstIsDropped) {
  auto dev = testing::device("lookahead.json");
  // Logical 0 on Q1, logical 1 on Q2: two shortest routes, via Q3 or Q4.
  auto c = parse_circuit("qubits 2\ncx 0 1\n");
  Mapping m({1, 2}, 5);
  auto swaps = get_useful_swaps(c, {}, m, dev.graph);
  ASSERT_EQ(swaps.size(), 4u);
  Csg csg = build_csg({}, swaps, {}, dev.profile, AllowanceBudget(0.0));
  auto pair_of = [&](int id) { return std::pair{c.gate(id).qubits[0], c.gate(id).qubits[1]}; };
  // Vertices: 1-3, 1-4, 2-3, 2-4. Moving both ends toward different
  // midpoints leaves them two apart again.
  auto kept = detail::drop_cancelling_swaps(csg, {0, {0, 3}}, m, dev.graph, pair_of);
  EXPECT_EQ(kept.members, (std::vector<int>{0}));
  kept = detail::drop_cancelling_swaps(csg, {0, {1, 2}}, m, dev.graph, pair_of);
  EXPECT_EQ(kept.members, (std::vector<int>{1}));
}

TEST(CompileProperty, RandomCompilesVerify) {
  Rng rng(1234);
  for (int trial = 0; trial < 60; ++trial) {
    const int np = testing::uniform_int(rng, 2, 8);
    const int nl = testing::uniform_int(rng, 2, np);
    auto g = testing::random_graph(rng, np, 0.2);
    auto prof = testing::random_profile(rng, g, 0.4);
    auto c = testing::random_circuit(rng, nl, testing::uniform_int(rng, 1, 15));
    CompileOptions opt;
    opt.allowance = testing::coin(rng, 0.3) ? std::numeric_limits<double>::infinity() : testing::uniform_real(rng, 0.0, 0.3);
    opt.initial_mapping = testing::random_mapping(rng, nl, np);
    auto s = compile_circuit(c, g, prof, opt);
    auto v = verify_routing(s, c, g);
    ASSERT_TRUE(v.ok()) << v.message;
    ASSERT_TRUE(ledger_within(s, opt.allowance, opt.units));
  }
}

}  // namespace
}  // namespace xroute
