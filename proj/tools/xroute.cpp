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

// Command-line driver: compile, vqe-synth, jw-encode, report, search.

#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "xroute/xroute.hpp"

namespace {

using namespace xroute;

struct AllowanceMode {
  enum Kind { Fixed, Unlimited, Search } kind = Search;
  double value = 0.0;
};

AllowanceMode parse_allowance(const std::string& text) {
  if (text == "search") return {AllowanceMode::Search, 0.0};
  if (text == "unlimited") return {AllowanceMode::Unlimited, std::numeric_limits<double>::infinity()};
  if (text.rfind("fixed:", 0) == 0) {
    double v = detail::parse_real(std::string_view(text).substr(6), 0);
    if (v < 0.0) throw InputError("fixed allowance must be non-negative");
    return {AllowanceMode::Fixed, v};
  }
  throw InputError("--allowance must be fixed:X, unlimited or search (got '" + text + "')");
}

AllowanceUnits parse_units(const std::string& text) {
  if (text == "excess") return AllowanceUnits::Excess;
  if (text == "pairs") return AllowanceUnits::Pairs;
  throw InputError("--allowance-units must be excess or pairs");
}

struct Outputs {
  std::string out;
  std::string report;
  std::string emit_csg;
  std::string emit_timeline;
};

/// A compiled program: the schedule plus the logical circuit it realizes.
struct Compiled {
  ScheduledCircuit schedule;
  LogicalCircuit circuit;
};

using CompileFn = std::function<Compiled(double allowance, const CompileOptions::ObserverFn* observer)>;

struct SearchSummary {
  double best = 0.0;
  SearchTrace trace;
};

/// Runs the compile at the requested allowance, searching it if asked.
/// Returns the result and the allowance it was compiled with.
std::pair<Compiled, double> run_with_allowance(const CompileFn& fn, const Device& dev, const AllowanceMode& mode,
                                               AllowanceUnits units, int budget,
                                               std::optional<SearchSummary>* summary = nullptr) {
  if (mode.kind != AllowanceMode::Search) return {fn(mode.value, nullptr), mode.value};
  const double x_max = fn(std::numeric_limits<double>::infinity(), nullptr).schedule.allowance_used(units);
  SearchOptions sopt;
  sopt.budget = budget;
  auto probe = [&](double x) { return esp(fn(x, nullptr).schedule, dev.graph, dev.profile).esp; };
  SearchTrace tr = search_allowance_with(probe, x_max, sopt);
  log::info("allowance search: X_max ", x_max, ", best ", tr.best_allowance, " after ", tr.probes.size(), " probes");
  if (summary) *summary = SearchSummary{tr.best_allowance, tr};
  return {fn(tr.best_allowance, nullptr), tr.best_allowance};
}

void emit(const Compiled& c, const Device& dev, const Outputs& o, const CompileFn& fn, double allowance) {
  Verdict v = verify_routing(c.schedule, c.circuit, dev.graph);
  if (!v.ok()) throw InvariantError(std::string("schedule failed verification (") + v.code() + "): " + v.message);
  if (!o.emit_csg.empty()) {
    std::string dot;
    int iteration = 0;
    CompileOptions::ObserverFn obs = [&](const Csg& csg, const std::vector<ColorClass>& classes) {
      dot += "// iteration " + std::to_string(iteration++) + ", " + std::to_string(classes.size()) + " colors\n";
      dot += to_dot(csg);
    };
    fn(allowance, &obs);
    write_file(o.emit_csg, dot);
  }
  if (!o.emit_timeline.empty()) write_file(o.emit_timeline, timeline_text(c.schedule));
  if (!o.report.empty()) write_file(o.report, dump(report_to_json(esp(c.schedule, dev.graph, dev.profile))));
  const std::string text = dump(schedule_to_json(c.schedule));
  if (o.out.empty())
    std::cout << text;
  else
    write_file(o.out, text);
}

CompileFn circuit_compiler(const LogicalCircuit& circuit, const Device& dev, CompileOptions base) {
  return [&circuit, &dev, base](double allowance, const CompileOptions::ObserverFn* obs) {
    CompileOptions o = base;
    o.allowance = allowance;
    if (obs) o.observer = *obs;
    return Compiled{compile_circuit(circuit, dev.graph, dev.profile, o), circuit};
  };
}

CompileFn synth_compiler(const PauliProgram& prog, const Device& dev, SynthOptions base) {
  return [&prog, &dev, base](double allowance, const CompileOptions::ObserverFn* obs) {
    SynthOptions o = base;
    o.allowance = allowance;
    if (obs) o.observer = *obs;
    auto r = synthesize_pauli_program(prog, dev.graph, dev.profile, o);
    return Compiled{std::move(r.schedule), std::move(r.circuit)};
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crosstalk-aware routing and scheduling for quantum circuits"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string circuit_path, pauli_path, hw_path, allowance = "search", units = "excess", layout = "identity";
  int top_k = 3, budget = 16;
  Outputs outs;
  double w1 = 0.5, w2 = 0.5;
  std::string lookahead = "on";

  auto add_allowance = [&](CLI::App* cmd) {
    cmd->add_option("--allowance", allowance, "fixed:X | unlimited | search")->capture_default_str();
    cmd->add_option("--allowance-units", units, "excess | pairs")->capture_default_str();
    cmd->add_option("--budget", budget, "probe budget for the allowance search")->capture_default_str();
    cmd->add_option("--top-k", top_k, "color classes kept by size before ranking")->capture_default_str();
  };
  auto add_outputs = [&](CLI::App* cmd) {
    cmd->add_option("--out", outs.out, "schedule JSON (default: stdout)");
    cmd->add_option("--report", outs.report, "fidelity report JSON");
    cmd->add_option("--emit-csg", outs.emit_csg, "DOT dump of every candidate set graph");
    cmd->add_option("--emit-timeline", outs.emit_timeline, "human-readable layer timeline");
  };
  auto add_synth = [&](CLI::App* cmd) {
    cmd->add_option("--w1", w1, "crosstalk weight of the pattern cost")->capture_default_str();
    cmd->add_option("--w2", w2, "SWAP weight of the pattern cost")->capture_default_str();
    cmd->add_option("--lookahead", lookahead, "on | off")->capture_default_str();
  };

  auto* compile = app.add_subcommand("compile", "route and schedule a circuit or a Pauli program");
  auto* src = compile->add_option_group("source");
  src->add_option("--circuit", circuit_path, "circuit file");
  src->add_option("--pauli", pauli_path, "Pauli program file");
  src->require_option(1);
  compile->add_option("--hw", hw_path, "hardware JSON")->required();
  compile->add_option("--layout", layout, "identity | greedy")->capture_default_str();
  add_allowance(compile);
  add_outputs(compile);
  add_synth(compile);

  auto* synth = app.add_subcommand("vqe-synth", "synthesize a Pauli program as CX trees");
  synth->add_option("--pauli", pauli_path, "Pauli program file")->required();
  synth->add_option("--hw", hw_path, "hardware JSON")->required();
  add_allowance(synth);
  add_outputs(synth);
  add_synth(synth);

  std::string fermion_path;
  int modes = 0;
  auto* jw = app.add_subcommand("jw-encode", "Jordan-Wigner encode fermionic terms");
  jw->add_option("--fermion", fermion_path, "fermionic term file")->required();
  jw->add_option("--modes", modes, "number of modes")->required();
  jw->add_option("--out", outs.out, "Pauli program output (default: stdout)");

  std::string sched_path, dist_a, dist_b;
  auto* report = app.add_subcommand("report", "fidelity report for a schedule");
  report->add_option("--sched", sched_path, "schedule JSON")->required();
  report->add_option("--hw", hw_path, "hardware JSON")->required();
  report->add_option("--circuit", circuit_path, "verify against this circuit");
  report->add_option("--dist-a", dist_a, "distribution JSON");
  report->add_option("--dist-b", dist_b, "distribution JSON");
  report->add_option("--out", outs.out, "report JSON (default: stdout)");

  auto* search = app.add_subcommand("search", "search the crosstalk allowance that maximizes esp");
  auto* ssrc = search->add_option_group("source");
  ssrc->add_option("--circuit", circuit_path, "circuit file");
  ssrc->add_option("--pauli", pauli_path, "Pauli program file");
  ssrc->require_option(1);
  search->add_option("--hw", hw_path, "hardware JSON")->required();
  search->add_option("--budget", budget, "maximum number of probe compiles")->capture_default_str();
  search->add_option("--allowance-units", units, "excess | pairs")->capture_default_str();
  search->add_option("--top-k", top_k, "color classes kept by size before ranking")->capture_default_str();
  search->add_option("--out", outs.out, "best schedule JSON");
  search->add_option("--report", outs.report, "search summary JSON (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*jw) {
      auto terms = parse_fermion_terms(read_file(fermion_path));
      PauliProgram prog{modes, jw_encode(terms, modes)};
      const std::string text = serialize_pauli_program(prog);
      if (outs.out.empty())
        std::cout << text;
      else
        write_file(outs.out, text);
      return 0;
    }

    const Device dev = load_hardware(hw_path);

    if (*report) {
      ScheduledCircuit s = schedule_from_json(read_file(sched_path));
      if (s.num_physical != dev.graph.num_physical()) throw InputError("schedule and hardware disagree on qubit count");
      json out = report_to_json(esp(s, dev.graph, dev.profile));
      if (!circuit_path.empty()) {
        Verdict v = verify_routing(s, parse_circuit(read_file(circuit_path)), dev.graph);
        out["verified"] = v.ok();
        if (!v.ok()) out["violation"] = v.message;
      }
      if (!dist_a.empty() || !dist_b.empty()) {
        if (dist_a.empty() || dist_b.empty()) throw InputError("--dist-a and --dist-b go together");
        out["tvd"] = tvd(parse_distribution(read_file(dist_a)), parse_distribution(read_file(dist_b)));
      }
      if (outs.out.empty())
        std::cout << dump(out);
      else
        write_file(outs.out, dump(out));
      return 0;
    }

    if (top_k < 1) throw InputError("--top-k must be at least 1");
    if (lookahead != "on" && lookahead != "off") throw InputError("--lookahead must be on or off");
    if (layout != "identity" && layout != "greedy") throw InputError("--layout must be identity or greedy");
    const AllowanceUnits u = parse_units(units);

    CompileOptions copt;
    copt.units = u;
    copt.ranking.top_k = top_k;
    copt.layout = layout == "greedy" ? Layout::Greedy : Layout::Identity;
    SynthOptions sopt;
    sopt.units = u;
    sopt.ranking.top_k = top_k;
    sopt.w1 = w1;
    sopt.w2 = w2;
    sopt.lookahead = lookahead == "on";

    std::optional<LogicalCircuit> circuit;
    std::optional<PauliProgram> prog;
    CompileFn fn;
    if (!circuit_path.empty()) {
      circuit = parse_circuit(read_file(circuit_path));
      fn = circuit_compiler(*circuit, dev, copt);
    } else {
      prog = parse_pauli_program(read_file(pauli_path));
      if (*compile && prog->is_two_local()) {
        circuit = two_local_circuit(*prog);
        fn = circuit_compiler(*circuit, dev, copt);
      } else {
        fn = synth_compiler(*prog, dev, sopt);
      }
    }

    if (*search) {
      std::optional<SearchSummary> summary;
      Compiled best = run_with_allowance(fn, dev, AllowanceMode{}, u, budget, &summary).first;
      Verdict v = verify_routing(best.schedule, best.circuit, dev.graph);
      if (!v.ok()) throw InvariantError(std::string("schedule failed verification (") + v.code() + "): " + v.message);
      json probes = json::array();
      for (const auto& p : summary->trace.probes) probes.push_back({{"allowance", p.allowance}, {"esp", p.esp}});
      json out{{"best_allowance", summary->best},
               {"x_min", 0.0},
               {"x_max", summary->trace.x_max},
               {"delta", summary->trace.delta},
               {"probes", std::move(probes)},
               {"best_report", report_to_json(esp(best.schedule, dev.graph, dev.profile))}};
      if (!outs.out.empty()) write_file(outs.out, dump(schedule_to_json(best.schedule)));
      if (outs.report.empty())
        std::cout << dump(out);
      else
        write_file(outs.report, dump(out));
      return 0;
    }

    const AllowanceMode mode = parse_allowance(allowance);
    auto [result, chosen] = run_with_allowance(fn, dev, mode, u, budget);
    emit(result, dev, outs, fn, chosen);
    log::info("depth_cx ", result.schedule.depth_cx(), ", crosstalk pairs ", result.schedule.ledger.size());
    return 0;
  } catch (const Error& e) {
    log::error(e.what());
    return e.exit_code();
  } catch (const std::exception& e) {
    log::error("internal error: ", e.what());
    return 4;
  }
}
