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

// Acceptance suite: one [PASS]/[FAIL] line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "support.hpp"

namespace xroute {
namespace {

using testing::Rng;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (cond) return;
    if (!ok) detail << "; ";
    ok = false;
    detail << what;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string edges_of(const Csg& csg, const ColorClass& cls) {
  std::string s;
  for (int m : cls.members) {
    const auto e = csg.vertices[static_cast<std::size_t>(m)].edge();
    s += (s.empty() ? "" : " ") + std::to_string(e.a) + "-" + std::to_string(e.b);
  }
  return s;
}

// Two-gate ladder program at zero allowance, against the delayed baseline.
void c1(Outcome& o) {
  auto dev = testing::device("ladder6.json");
  auto c = parse_circuit(testing::fixture("ladder6.qc"));
  auto t0 = Clock::now();
  auto s = compile_circuit(c, dev.graph, dev.profile, CompileOptions{0.0});
  const double secs = seconds_since(t0);
  auto delayed = baseline_delayed(c, dev.graph, dev.profile, Mapping::identity(6, 6));
  o.expect(s.depth_cx() == 4, "depth " + std::to_string(s.depth_cx()) + " != 4");
  o.expect(s.ledger.empty(), "ledger not empty");
  o.expect(verify_routing(s, c, dev.graph).ok(), "routing invalid");
  o.expect(delayed.depth_cx() >= 7, "baseline depth " + std::to_string(delayed.depth_cx()) + " < 7");
  o.expect(secs < 1.0, "runtime " + std::to_string(secs) + " s");
  if (o.ok) o.detail << "depth 4, no crosstalk; delayed baseline depth " << delayed.depth_cx() << "; " << secs << " s";
}

// Starting state of the ladder program: CSG sets, coloring and selection.
void c2(Outcome& o) {
  auto dev = testing::device("ladder6.json");
  auto c = parse_circuit(testing::fixture("ladder6.qc"));
  auto m = Mapping::identity(6, 6);
  auto cg = get_executable(c, {}, m, dev.graph);
  auto swaps = get_useful_swaps(c, {}, m, dev.graph);
  Csg csg = build_csg(cg, swaps, {}, dev.profile, AllowanceBudget(0.0));
  auto classes = welsh_powell(csg);
  auto chosen = rank_and_select(csg, classes, {});
  o.expect(cg.empty(), std::to_string(cg.size()) + " executable gates");
  o.expect(swaps.size() == 4, std::to_string(swaps.size()) + " useful swaps");
  o.expect(classes.size() == 2, std::to_string(classes.size()) + " colors");
  o.expect(is_proper_coloring(csg, classes), "improper coloring");
  o.expect(edges_of(csg, chosen) == "0-1 3-4", "selected {" + edges_of(csg, chosen) + "}");
  auto s = compile_circuit(c, dev.graph, dev.profile, CompileOptions{0.0});
  o.expect(s.total_excess() == 0.0, "compiled schedule has crosstalk");
  if (o.ok) o.detail << "0 gates, 4 swaps, 2 colors, selected {SWAP 0-1, SWAP 3-4}";
}

// Seven-qubit string on the tree device.
void c3(Outcome& o) {
  auto dev = testing::device("tree7.json");
  auto prog = parse_pauli_program(testing::fixture("zzizzii.pauli"));
  auto qg = build_qubit_graph(prog.strings.at(0), Mapping::identity(7, 7), dev.graph);
  int weight = 0;
  for (const auto& e : mst(qg)) weight += e.w;
  auto r = synthesize_pauli_program(prog, dev.graph, dev.profile);
  o.expect(weight == 4, "MST weight " + std::to_string(weight));
  o.expect(!r.schedule.layers.empty(), "empty schedule");
  if (!r.schedule.layers.empty()) {
    const auto& first = r.schedule.layers[0];
    std::set<std::string> got;
    for (const auto& op : first)
      got.insert(op.name + " " + std::to_string(op.qubits.at(0)) + "," + std::to_string(op.qubits.at(1)));
    const std::set<std::string> want{"cx 0,1", "swap 4,6"};
    o.expect(got == want, "first layer differs");
  }
  auto v = verify_routing(r.schedule, r.circuit, dev.graph);
  o.expect(v.ok(), "routing invalid: " + v.message);
  o.expect(r.schedule.ledger.empty(), "crosstalk in schedule");
  if (o.ok) o.detail << "first layer {cx 0,1; swap 4,6}, MST weight 4, depth " << r.schedule.depth_cx();
}

// Fermion-to-qubit encoding.
void c4(Outcome& o) {
  auto t0 = Clock::now();
  auto terms = parse_fermion_terms(testing::fixture("h2.ferm"));
  auto out = jw_encode(terms, 4);
  std::set<std::string> got;
  for (const auto& p : out) got.insert(p.str());
  const std::set<std::string> want{"IIII", "ZIII", "IZII", "IIZI", "IIIZ", "ZZII", "ZIZI", "IZZI",
                                   "ZIIZ", "IZIZ", "IIZZ", "YYXX", "XYYX", "YXXY", "XXYY"};
  o.expect(got == want && out.size() == 15, "H2 strings differ (" + std::to_string(out.size()) + ")");
  Rng rng(9001);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = testing::uniform_int(rng, 2, 3);
    std::vector<FermionTerm> ts;
    for (int k = testing::uniform_int(rng, 1, 4); k > 0; --k) {
      FermionTerm t;
      t.coefficient = testing::uniform_real(rng, -1.0, 1.0);
      for (int j = testing::uniform_int(rng, 1, 4); j > 0; --j)
        t.ops.push_back({testing::uniform_int(rng, 0, n - 1), testing::coin(rng, 0.5)});
      FermionTerm adj{t.coefficient, {}};
      for (auto it = t.ops.rbegin(); it != t.ops.rend(); ++it) adj.ops.push_back({it->mode, !it->create});
      ts.push_back(t);
      ts.push_back(adj);
    }
    worst = std::max(worst, testing::max_abs_diff(testing::fermion_matrix(ts, n), testing::pauli_matrix(jw_encode(ts, n), n)));
  }
  const double secs = seconds_since(t0);
  o.expect(worst <= 1e-9, "dense mismatch " + std::to_string(worst));
  o.expect(secs < 10.0, "runtime " + std::to_string(secs) + " s");
  if (o.ok) o.detail << "15 H2 strings; 100 random operators, max deviation " << worst << "; " << secs << " s";
}

// Fuzzed compiles: routing validity, ledger bound, proper colorings.
void c5(Outcome& o) {
  Rng rng(55);
  auto t0 = Clock::now();
  long csgs = 0;
  bool colorings_ok = true;
  int failures = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int np = testing::uniform_int(rng, 2, 10);
    const int nl = testing::uniform_int(rng, 2, std::min(np, 8));
    auto g = testing::random_graph(rng, np, 0.2);
    auto prof = testing::random_profile(rng, g, 0.4);
    auto c = testing::random_circuit(rng, nl, testing::uniform_int(rng, 1, 20));
    CompileOptions opt;
    if (testing::coin(rng, 0.3)) {
      opt.units = AllowanceUnits::Pairs;
      opt.allowance = testing::uniform_int(rng, 0, 3);
    } else {
      opt.allowance = testing::coin(rng, 0.2) ? std::numeric_limits<double>::infinity() : testing::uniform_real(rng, 0.0, 0.3);
    }
    opt.initial_mapping = testing::random_mapping(rng, nl, np);
    opt.observer = [&](const Csg& csg, const std::vector<ColorClass>& classes) {
      ++csgs;
      if (!is_proper_coloring(csg, classes)) colorings_ok = false;
    };
    try {
      auto s = compile_circuit(c, g, prof, opt);
      if (!verify_routing(s, c, g).ok() || !ledger_within(s, opt.allowance, opt.units)) ++failures;
    } catch (const Error& e) {
      ++failures;
      if (failures == 1) o.detail << "trial " << trial << " threw: " << e.what() << "; ";
    }
  }
  const double secs = seconds_since(t0);
  o.expect(failures == 0, std::to_string(failures) + " of 500 compiles failed");
  o.expect(colorings_ok, "improper coloring observed");
  o.expect(secs < 60.0, "runtime " + std::to_string(secs) + " s");
  if (o.ok) o.detail << "500 compiles valid, " << csgs << " colorings proper; " << secs << " s";
}

// Spanning trees of random weighted cliques.
void c6(Outcome& o) {
  Rng rng(66);
  int bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = testing::uniform_int(rng, 1, 7);
    QubitGraph qg;
    for (int i = 0; i < n; ++i) qg.nodes.push_back(i);
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) qg.edges.push_back({a, b, testing::uniform_int(rng, 1, 6)});
    auto tree = mst(qg);
    int w = 0;
    for (const auto& e : tree) w += e.w;
    if (tree.size() != static_cast<std::size_t>(n - 1) || w != testing::brute_force_mst_weight(n, qg.edges)) ++bad;
  }
  o.expect(bad == 0, std::to_string(bad) + " of 200 trees not minimal");
  if (o.ok) o.detail << "200 cliques match exhaustive minimum";
}

// Depth and crosstalk of synthesis trees.
void c7(Outcome& o) {
  int bad = 0;
  for (const auto& c : testing::depth_library()) {
    std::vector<int> nodes;
    for (int i = 0; i < c.nodes; ++i) nodes.push_back(i);
    auto got = calculate_depths(nodes, c.edges);
    if (!(got == c.want)) {
      ++bad;
      o.detail << c.name << " got (" << got.depth << "," << got.crosstalk << "); ";
    }
    const std::string name = c.name;
    if (got.crosstalk % 2 != 0) o.expect(false, name + " crosstalk is odd");
    if (name.rfind("path", 0) == 0) o.expect(got.depth == c.nodes - 1, name + " depth is not n-1");
  }
  o.expect(bad == 0, std::to_string(bad) + " of " + std::to_string(testing::depth_library().size()) + " trees differ");
  if (o.ok) o.detail << testing::depth_library().size() << " trees match; paths give n-1; crosstalk counted per pair twice";
}

CrosstalkProfile uniform_inflation(const CouplingGraph& g, double factor) {
  std::vector<CrosstalkRecord> recs{{Edge(0, 1), Edge(4, 5), 0.01 * factor, 0.01 * factor},
                                    {Edge(1, 2), Edge(3, 4), 0.01 * factor, 0.01 * factor}};
  return CrosstalkProfile(g, recs);
}

// Allowance search at both ends of the interval and on the ladder program.
void c8(Outcome& o) {
  auto dev = testing::device("ladder6.json");
  auto pair = parse_circuit("qubits 6\ncx 0 1\ncx 4 5\n");

  auto harsh = uniform_inflation(dev.graph, 90.0);
  auto lo = search_allowance(pair, dev.graph, harsh, 16);
  o.expect(lo.x_max > 0.0, "harsh profile has no interval");
  o.expect(lo.best_allowance <= lo.delta + 1e-12, "harsh best " + std::to_string(lo.best_allowance));

  // Conditional equals base: sharing a layer is free, so the whole interval
  // is worth spending. Counted in pairs since the excess is zero.
  auto free_profile = uniform_inflation(dev.graph, 1.0);
  CompileOptions pairs;
  pairs.units = AllowanceUnits::Pairs;
  auto hi = search_allowance(pair, dev.graph, free_profile, 16, pairs);
  o.expect(hi.x_max > 0.0, "free profile has no interval");
  o.expect(std::abs(hi.best_allowance - hi.x_max) <= hi.delta + 1e-12, "free best " + std::to_string(hi.best_allowance));

  auto c = parse_circuit(testing::fixture("ladder6.qc"));
  auto r = search_allowance(c, dev.graph, dev.profile, 16);
  o.expect(r.best_schedule.depth_cx() == 4 && r.best_schedule.ledger.empty(), "ladder best is not depth 4 without crosstalk");
  if (o.ok)
    o.detail << "harsh best " << lo.best_allowance << " of " << lo.x_max << "; free best " << hi.best_allowance << " of "
             << hi.x_max << " pairs; ladder best depth 4, no crosstalk";
}

// Success-probability sanity in place of hardware distances, which need
// device runs: esp never drops when a gate is removed and q(t) never falls.
void c9(Outcome& o) {
  Rng rng(99);
  int drops = 0, checks = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int np = testing::uniform_int(rng, 2, 7);
    auto g = testing::random_graph(rng, np, 0.3);
    auto prof = testing::random_profile(rng, g, 0.5);
    auto c = testing::random_circuit(rng, np, testing::uniform_int(rng, 1, 10));
    CompileOptions opt;
    opt.allowance = testing::uniform_real(rng, 0.0, 0.5);
    auto s = compile_circuit(c, g, prof, opt);
    const double full = esp(s, g, prof).esp;
    for (std::size_t t = 0; t < s.layers.size(); ++t)
      for (std::size_t i = 0; i < s.layers[t].size(); ++i) {
        if (s.layers[t][i].kind == OpKind::SwapSlice) continue;
        ScheduledCircuit cut = s;
        cut.layers[t].erase(cut.layers[t].begin() + static_cast<std::ptrdiff_t>(i));
        if (cut.layers.back().empty()) cut.layers.pop_back();
        ++checks;
        if (esp(cut, g, prof).esp < full - 1e-15) ++drops;
      }
  }
  int rises = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const double t1 = testing::uniform_real(rng, 1.0, 500.0), t2 = testing::uniform_real(rng, 1.0, 500.0);
    const double a = testing::uniform_real(rng, 0.0, 1000.0), b = a + testing::uniform_real(rng, 0.0, 100.0);
    if (decoherence_error(a, t1, t2) > decoherence_error(b, t1, t2)) ++rises;
  }
  o.expect(drops == 0, std::to_string(drops) + " gate removals lowered esp");
  o.expect(rises == 0, std::to_string(rises) + " decoherence inversions");
  if (o.ok) o.detail << checks << " gate removals, 500 decoherence pairs monotone (hardware distances not reproduced)";
}

// Pattern lookahead on the tie fixture.
void c10(Outcome& o) {
  auto dev = testing::device("lookahead.json");
  auto prog = parse_pauli_program(testing::fixture("lookahead.pauli"));
  SynthOptions on;
  auto a = synthesize_pauli_program(prog, dev.graph, dev.profile, on);
  SynthOptions off;
  off.lookahead = false;
  auto b1 = synthesize_pauli_program(prog, dev.graph, dev.profile, off);
  auto b2 = synthesize_pauli_program(prog, dev.graph, dev.profile, off);
  o.expect(!a.choices.empty() && !b1.choices.empty(), "no pattern choices recorded");
  if (!o.ok) return;
  auto patterns = enumerate_patterns({0, 1, 2}, Mapping::identity(5, 5), dev.graph);
  o.expect(a.choices[0].tied == 2, "expected a two-way tie");
  o.expect(a.choices[0].chosen == 1, "lookahead chose " + std::to_string(a.choices[0].chosen));
  o.expect(patterns.size() == 2 && extra_swaps({2, 4}, patterns[1].mapping_after, dev.graph) == 0,
           "chosen pattern needs extra swaps");
  o.expect(b1.choices[0].chosen == 0, "no-lookahead chose " + std::to_string(b1.choices[0].chosen));
  o.expect(b1.schedule.layers.size() == b2.schedule.layers.size() && b1.choices[0].chosen == b2.choices[0].chosen,
           "no-lookahead is not deterministic");
  o.expect(verify_routing(a.schedule, a.circuit, dev.graph).ok(), "lookahead schedule invalid");
  if (o.ok)
    o.detail << "lookahead picks pattern 1 (0 extra swaps, depth " << a.schedule.depth_cx() << "); off picks 0 (depth "
             << b1.schedule.depth_cx() << ")";
}

}  // namespace
}  // namespace xroute

int main() {
  using namespace xroute;
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"C1", c1}, {"C2", c2}, {"C3", c3}, {"C4", c4}, {"C5", c5},
      {"C6", c6}, {"C7", c7}, {"C8", c8}, {"C9", c9}, {"C10", c10}};
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      run(o);
    } catch (const std::exception& e) {
      o.expect(false, std::string("threw: ") + e.what());
    }
    if (!o.ok) ++failed;
    std::printf("[%s] %s %s\n", o.ok ? "PASS" : "FAIL", name, o.detail.str().c_str());
  }
  return failed;
}
