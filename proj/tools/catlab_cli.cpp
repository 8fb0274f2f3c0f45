// catlab: command-line front end for the CAT lab.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or validation error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "catlab/config.hpp"
#include "catlab/copycat.hpp"
#include "catlab/enumerate.hpp"
#include "catlab/errors.hpp"
#include "catlab/export.hpp"
#include "catlab/harness.hpp"
#include "catlab/kernel.hpp"
#include "catlab/observables.hpp"
#include "catlab/rng.hpp"
#include "catlab/stats.hpp"

using namespace catlab;

namespace {

// Flags that mirror the experiment config; unset flags keep the config value.
struct SpecFlags {
  std::string config;
  std::optional<int> d, m;
  std::optional<double> beta;
  std::optional<std::size_t> n;
  std::optional<std::string> initial;
  std::optional<Coord> diameter;
  std::optional<std::string> input;
  std::optional<std::uint64_t> steps;
  std::optional<std::size_t> ensemble;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::optional<std::string> out;
  std::optional<std::uint64_t> stride;
  std::optional<int> persist_radius;
  bool traces = false;
  bool no_events = false;
  bool dry_run = false;
};

void add_spec_flags(CLI::App* app, SpecFlags& f, bool with_ensemble = true) {
  app->add_option("--config", f.config, "experiment config file")->check(CLI::ExistingFile);
  app->add_option("--d", f.d, "lattice dimension");
  app->add_option("--m", f.m, "elements moved per step");
  app->add_option("--beta", f.beta, "distance exponent");
  app->add_option("--n", f.n, "initial set size");
  app->add_option("--initial", f.initial, "segment | spread | file");
  app->add_option("--diameter", f.diameter, "diameter of the spread start");
  app->add_option("--input", f.input, "initial configuration file");
  if (with_ensemble) {
    app->add_option("--steps", f.steps, "steps per trajectory");
    app->add_option("--ensemble", f.ensemble, "number of trajectories");
    app->add_option("--seed", f.seed, "master seed");
    app->add_option("--jobs", f.jobs, "worker threads");
    app->add_option("--stride", f.stride, "snapshot stride (0 = none)");
    app->add_option("--persist-radius", f.persist_radius, "record CanPersist_r");
    app->add_flag("--traces", f.traces, "record substep traces");
    app->add_flag("--no-events", f.no_events, "skip event flags");
  }
  app->add_option("--out", f.out, "output directory");
  app->add_flag("--dry-run", f.dry_run, "validate and print the resolved config");
}

ExperimentSpec resolve(const SpecFlags& f) {
  ExperimentSpec spec = f.config.empty() ? ExperimentSpec{} : load_spec(f.config);
  if (f.d) spec.params.d = *f.d;
  if (f.m) spec.params.m = *f.m;
  if (f.beta) spec.params.beta = *f.beta;
  if (f.n) spec.n = *f.n;
  if (f.initial) spec.initial.kind = parse_initial_kind(*f.initial);
  if (f.diameter) spec.initial.diameter = *f.diameter;
  if (f.input) {
    spec.initial.path = *f.input;
    if (!f.initial) spec.initial.kind = InitialKind::kFile;
  }
  if (f.steps) spec.steps = *f.steps;
  if (f.ensemble) spec.ensemble = *f.ensemble;
  if (f.seed) spec.master_seed = *f.seed;
  if (f.jobs) spec.jobs = *f.jobs;
  if (f.out) spec.out_dir = *f.out;
  if (f.stride) spec.record.snapshot_stride = *f.stride;
  if (f.persist_radius) spec.record.persist_radius = *f.persist_radius;
  if (f.traces) spec.record.traces = true;
  if (f.no_events) spec.record.events = false;
  apply_env_overrides(spec);
  // --seed on the command line beats the environment.
  if (f.seed) spec.master_seed = *f.seed;
  if (spec.initial.kind == InitialKind::kFile) spec.n = initial_configuration(spec).size();
  spec.validate();
  initial_configuration(spec);
  if (const auto warning = spec.params.regime_warning()) {
    std::cerr << "warning: " << *warning << '\n';
  }
  return spec;
}

std::string fmt(double x, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << x;
  return os.str();
}

std::string set_text(const Configuration& c) {
  std::string out = "{";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ' ';
    out += to_string(c[i]);
  }
  return out + "}";
}

// "a..b" or "a,b,c" or a single value.
std::vector<long> parse_list(const std::string& text) {
  std::vector<long> out;
  try {
    if (const auto dots = text.find(".."); dots != std::string::npos) {
      const long lo = std::stol(text.substr(0, dots));
      const long hi = std::stol(text.substr(dots + 2));
      if (hi < lo) throw ValidationError("empty range " + text);
      for (long v = lo; v <= hi; ++v) out.push_back(v);
      return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stol(item));
  } catch (const std::logic_error&) {
    throw ValidationError("bad list '" + text + "' (expected a..b or a,b,c)");
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

// --- simulate ---

struct SimulateFlags {
  SpecFlags spec;
  std::string model = "cat";
  std::optional<std::size_t> renewals;
};

int run_simulate(const SimulateFlags& f) {
  const ExperimentSpec spec = resolve(f.spec);
  if (f.model != "cat" && f.model != "copycat") throw ValidationError("unknown model " + f.model);
  if (f.spec.dry_run) {
    std::cout << format_spec(spec);
    return 0;
  }
  if (f.model == "copycat") {
    const auto d = static_cast<std::size_t>(spec.params.d);
    const int m = spec.params.m;
    TupleState initial(d);
    if (f.spec.input) {
      std::ifstream in(*f.spec.input);
      if (!in) throw ValidationError("cannot open " + *f.spec.input);
      initial = read_tuple(in);
    } else {
      const Coord gap = spec.initial.diameter;
      initial = TupleState(d, {e1_segment(d, 0, m), e1_segment(d, m + gap, 2 * m + gap)});
    }
    RngStream rng(spec.master_seed, 0);
    CopyRunOptions options;
    options.rows = true;
    options.target_renewals = f.renewals;
    const auto run = run_copycat(initial, spec.params, spec.steps, rng, options);
    write_file(spec.out_dir / "copycat.csv", [&](std::ostream& os) { write_copycat_csv(os, run); });
    if (run.renewals.size() > 0 && initial.size() >= 2) {
      const auto walk = derived_walk(run.renewals, 0, 1);
      write_file(spec.out_dir / "walk.csv",
                 [&](std::ostream& os) { write_walk_csv(os, run.renewals, walk, d); });
    }
    std::cout << "copycat steps=" << run.steps << " renewals=" << run.renewals.size()
              << " final_sep=" << fmt(sep(run.final_state)) << '\n';
    return 0;
  }
  const auto records = run_ensemble(spec);
  write_file(spec.out_dir / "trajectories.jsonl",
             [&](std::ostream& os) { write_trajectories_jsonl(os, records); });
  write_file(spec.out_dir / "diameter.csv",
             [&](std::ostream& os) { write_diameter_csv(os, records); });
  std::cout << "stream  initial_diam  min_diam  final_diam\n";
  for (const auto& r : records) {
    double lo = diameter(r.initial);
    for (const auto& row : r.rows) lo = std::min(lo, row.diameter());
    std::cout << std::setw(6) << r.stream_id << "  " << std::setw(12) << fmt(diameter(r.initial))
              << "  " << std::setw(8) << fmt(lo) << "  " << std::setw(10)
              << fmt(diameter(r.final_state)) << '\n';
  }
  std::cout << "wrote " << (spec.out_dir / "trajectories.jsonl").string() << '\n';
  return 0;
}

// --- enumerate ---

int run_enumerate(const SpecFlags& f) {
  ExperimentSpec spec = resolve(f);
  if (f.dry_run) {
    std::cout << format_spec(spec);
    return 0;
  }
  const Configuration c = initial_configuration(spec);
  std::cout << "one-step law from " << set_text(c) << "  (d=" << spec.params.d
            << " m=" << spec.params.m << " beta=" << spec.params.beta << ")\n";
  std::map<Configuration, std::string> exact_text;
  std::map<TranslationClass, std::string> class_text;
  bool exact = false;
  if (admits_exact_weights(spec.params.beta)) {
    try {
      const auto law = enumerate_step_distribution_exact(c, spec.params);
      for (const auto& [s, p] : law.by_state) exact_text[s] = p.get_str();
      for (const auto& [k, p] : law.by_class) class_text[k] = p.get_str();
      exact = true;
    } catch (const ValidationError&) {
      // irrational weights: decimal only
    }
  }
  const auto law = enumerate_step_distribution(c, spec.params);
  std::cout << (exact ? "exact rational law" : "decimal law (weights are irrational)") << '\n';
  std::cout << "next state | probability\n";
  for (const auto& [s, p] : law.by_state) {
    std::cout << set_text(s) << " | " << (exact ? exact_text[s] + " = " : "")
              << fmt(static_cast<double>(p), 12) << '\n';
  }
  std::cout << "translation class (canonical) | probability\n";
  for (const auto& [k, p] : law.by_class) {
    std::cout << set_text(k.canonical()) << " | " << (exact ? class_text[k] + " = " : "")
              << fmt(static_cast<double>(p), 12) << '\n';
  }
  std::cout << "traces=" << law.traces.size() << " total=" << fmt(static_cast<double>(law.total()), 15)
            << '\n';
  return 0;
}

// --- sweep ---

struct SweepFlags {
  SpecFlags spec;
  std::string m_list = "1..2";
  std::string n_list = "auto";
  double dominance = 0.9;
};

int run_sweep(const SweepFlags& f) {
  SpecFlags flags = f.spec;
  if (!flags.initial && flags.config.empty()) flags.initial = "spread";
  ExperimentSpec base = resolve(flags);
  std::vector<int> ms;
  for (long v : parse_list(f.m_list)) {
    if (v < 1) throw ValidationError("m values must be >= 1");
    ms.push_back(static_cast<int>(v));
  }
  std::optional<std::vector<long>> fixed_n;
  if (f.n_list != "auto") fixed_n = parse_list(f.n_list);
  const auto n_values = [&](int m) {
    std::vector<std::size_t> out;
    if (fixed_n) {
      for (long v : *fixed_n) out.push_back(static_cast<std::size_t>(std::max(1L, v)));
    } else {
      for (int n = m + 1; n <= 2 * m + 4; ++n) out.push_back(static_cast<std::size_t>(n));
    }
    return out;
  };
  if (f.spec.dry_run) {
    std::cout << format_spec(base);
    for (int m : ms) {
      std::cout << "m=" << m << " n:";
      for (auto n : n_values(m)) std::cout << ' ' << n;
      std::cout << '\n';
    }
    return 0;
  }
  const auto result = sweep(base, ms, n_values, f.dominance);
  write_file(base.out_dir / "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, result); });
  write_file(base.out_dir / "sweep_cells.csv",
             [&](std::ostream& os) { write_sweep_cells_csv(os, result); });
  std::cout << "cell verdicts: C collapse, G growth, B both, . neither, - undefined\n";
  for (int m : ms) {
    std::cout << "m=" << m << ":";
    for (const auto& cell : result.cells) {
      if (cell.m != m) continue;
      char mark = '-';
      if (cell.defined) {
        mark = cell.collapse_dominant ? (cell.growth_dominant ? 'B' : 'C')
                                      : (cell.growth_dominant ? 'G' : '.');
      }
      std::cout << "  n=" << cell.n << ":" << mark;
    }
    const auto b = result.boundary(m);
    std::cout << "   boundary=" << (b ? std::to_string(*b) : std::string("unclear"))
              << " (n_c = 2m+2 = " << 2 * m + 2 << ")\n";
  }
  return 0;
}

// --- stationarity ---

int run_stationarity(const SpecFlags& f, bool classes) {
  ExperimentSpec a = resolve(f);
  ExperimentSpec b = a;
  a.initial.kind = InitialKind::kSegment;
  b.initial.kind = InitialKind::kSpread;
  b.validate();
  initial_configuration(b);
  if (f.dry_run) {
    std::cout << format_spec(a) << '\n' << format_spec(b);
    return 0;
  }
  const auto rep = stationarity_check(a, b, {classes, std::nullopt});
  write_file(a.out_dir / "stationarity.csv",
             [&](std::ostream& os) { write_stationarity_csv(os, rep); });
  std::cout << "window [" << rep.window_begin << ", " << rep.window_end
            << "]  tv_diameter=" << fmt(rep.tv_diameter);
  if (rep.tv_class) std::cout << "  tv_class=" << fmt(*rep.tv_class);
  std::cout << '\n' << "checkpoint  median_segment  median_spread\n";
  for (std::size_t k = 0; k < rep.checkpoints.size(); ++k) {
    std::cout << std::setw(10) << rep.checkpoints[k] << "  " << std::setw(14) << fmt(rep.median_a[k])
              << "  " << std::setw(13) << fmt(rep.median_b[k]) << '\n';
  }
  return 0;
}

// --- reach ---

int run_reach(const SpecFlags& f, double cap, std::size_t class_cap) {
  const ExperimentSpec spec = resolve(f);
  if (f.dry_run) {
    std::cout << format_spec(spec) << "cap = " << cap << '\n';
    return 0;
  }
  ReachabilityOptions options;
  options.class_cap = class_cap;
  const auto rep = reachability_bfs(spec.params, spec.n, cap, options);
  write_file(spec.out_dir / "reach.jsonl", [&](std::ostream& os) {
    using nlohmann::json;
    const auto pts = [](const Configuration& c) {
      json a = json::array();
      for (const auto& p : c) a.push_back(std::vector<Coord>(p.coords().begin(), p.coords().end()));
      return a;
    };
    os << json{{"format", "catlab.reach"}, {"version", 1}, {"d", spec.params.d},
               {"m", spec.params.m}, {"beta", spec.params.beta}, {"n", spec.n}, {"cap", cap},
               {"visited", rep.visited.size()}, {"prog_classes", rep.prog_classes.size()},
               {"missing", rep.missing.size()}, {"partial", rep.partial}}
              .dump()
       << '\n';
    for (const auto& cls : rep.visited) {
      json line{{"class", pts(cls.canonical())}};
      if (const auto it = rep.evidence.find(cls); it != rep.evidence.end()) {
        line["parent"] = pts(it->second.parent.canonical());
        json tr = json::array();
        for (const auto& p : it->second.trace.sequence()) {
          tr.push_back(std::vector<Coord>(p.coords().begin(), p.coords().end()));
        }
        line["trace"] = tr;
        line["probability"] = static_cast<double>(it->second.probability);
      }
      os << line.dump() << '\n';
    }
  });
  std::cout << "visited classes: " << rep.visited.size() << '\n'
            << "Prog classes within cap: " << rep.prog_classes.size() << '\n'
            << "coverage: " << fmt(100 * rep.coverage()) << "%\n"
            << "non-Prog successors: " << rep.non_prog_successors.size() << '\n'
            << "self-loop probability at the segment: "
            << fmt(static_cast<double>(rep.self_loop_probability)) << '\n'
            << (rep.partial ? "PARTIAL: class cap reached\n" : "");
  return 0;
}

// --- check ---

struct CheckRow {
  std::string name;
  bool pass;
  std::string detail;
};

int run_check(const SpecFlags& f) {
  SpecFlags flags = f;
  if (!flags.steps) flags.steps = 10000;
  const ExperimentSpec spec = resolve(flags);
  if (f.dry_run) {
    std::cout << format_spec(spec);
    return 0;
  }
  std::vector<CheckRow> rows;
  const auto guard = [&](const std::string& name, auto&& body) {
    try {
      rows.push_back(body());
    } catch (const std::exception& e) {
      rows.push_back({name, false, e.what()});
    }
  };

  guard("philox known answer", [] {
    const auto out = philox4x64({1, 0, 0, 0}, {0, 0});
    return CheckRow{"philox known answer", out[0] == 0x02f4ba6408e4d89bULL, "ctr (1,0,0,0) key (0,0)"};
  });
  guard("mass and a.m.l.g.", [&] {
    RngStream rng(spec.master_seed, 0);
    Configuration c = initial_configuration(spec);
    std::uint64_t violations = 0;
    for (std::uint64_t t = 0; t < spec.steps; ++t) {
      auto step = cat_step(c, spec.params, rng, StepChecks::kFull);
      if (step.next.size() != c.size()) ++violations;
      if (!amlg_holds(diameter_sq(c), diameter_sq(step.next), spec.params.m)) ++violations;
      c = std::move(step.next);
    }
    return CheckRow{"mass and a.m.l.g.", violations == 0,
                    std::to_string(spec.steps) + " steps, " + std::to_string(violations) +
                        " violations"};
  });
  guard("two-point exact law", [] {
    const Configuration c{Point{0}, Point{1}};
    const auto law = enumerate_step_distribution_exact(c, {1, 1, 1});
    const bool ok = law.by_state.size() == 3 && law.by_state.at(c) == Rational(2, 3) &&
                    law.by_state.at(Configuration{Point{1}, Point{2}}) == Rational(1, 6) &&
                    law.by_state.at(Configuration{Point{-1}, Point{0}}) == Rational(1, 6);
    return CheckRow{"two-point exact law", ok, "{0,1}: 2/3, 1/6, 1/6"};
  });
  guard("sampler vs oracle", [&] {
    const Configuration c = e1_segment(static_cast<std::size_t>(spec.params.d), 0, spec.params.m);
    const auto law = enumerate_step_distribution(c, spec.params);
    std::map<Configuration, double> truth;
    for (const auto& [s, p] : law.by_state) truth[s] = static_cast<double>(p);
    std::map<Configuration, long> counts;
    RngStream rng(spec.master_seed, 1);
    const int samples = 200000;
    for (int i = 0; i < samples; ++i) ++counts[cat_step(c, spec.params, rng).next];
    const double tv = total_variation(truth, normalise(counts));
    return CheckRow{"sampler vs oracle", tv < 0.02,
                    "TV " + fmt(tv) + " over " + std::to_string(samples) + " samples"};
  });
  guard("translation invariance", [&] {
    const Configuration c = e1_segment(static_cast<std::size_t>(spec.params.d), 0, spec.params.m);
    Point shift(static_cast<std::size_t>(spec.params.d));
    for (std::size_t i = 0; i < shift.dim(); ++i) shift[i] = static_cast<Coord>(3 + 2 * i);
    const auto a = enumerate_step_distribution(c, spec.params).by_class;
    const auto b = enumerate_step_distribution(c.translated(shift), spec.params).by_class;
    const bool ok = a.size() == b.size() && total_variation(a, b) < 1e-15L;
    return CheckRow{"translation invariance", ok, "class laws of C and C+x"};
  });

  bool all = true;
  std::cout << std::left << std::setw(24) << "check" << std::setw(8) << "result" << "detail\n";
  for (const auto& r : rows) {
    all = all && r.pass;
    std::cout << std::setw(24) << r.name << std::setw(8) << (r.pass ? "PASS" : "FAIL") << r.detail
              << '\n';
  }
  return all ? 0 : 1;
}

// --- export ---

int run_export(const std::string& input, const std::string& out) {
  std::ifstream in(input);
  if (!in) throw ValidationError("cannot open " + input);
  const auto records = read_trajectories_jsonl(in);
  const std::filesystem::path dir = out;
  write_file(dir / "diameter.csv", [&](std::ostream& os) { write_diameter_csv(os, records); });
  std::cout << "exported " << records.size() << " trajectories to "
            << (dir / "diameter.csv").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"catlab: chain activation and transport lab"};
  app.require_subcommand(1);

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "run an ensemble of trajectories");
  add_spec_flags(simulate, sim.spec);
  simulate->add_option("--model", sim.model, "cat | copycat");
  simulate->add_option("--renewals", sim.renewals, "copycat: stop after this many renewals");

  SpecFlags enum_flags;
  auto* enumerate = app.add_subcommand("enumerate", "print the exact one-step law");
  add_spec_flags(enumerate, enum_flags, false);

  SweepFlags sw;
  auto* sweep_cmd = app.add_subcommand("sweep", "collapse/growth phase sweep over (m, n)");
  add_spec_flags(sweep_cmd, sw.spec);
  sweep_cmd->remove_option(sweep_cmd->get_option("--m"));
  sweep_cmd->remove_option(sweep_cmd->get_option("--n"));
  sweep_cmd->add_option("--m", sw.m_list, "m values: a..b or a,b,c");
  sweep_cmd->add_option("--n", sw.n_list, "n values: auto (m+1..2m+4), a..b or a,b,c");
  sweep_cmd->add_option("--dominance", sw.dominance, "fraction of seeds for a verdict");

  SpecFlags stat_flags;
  bool stat_classes = false;
  auto* stationarity = app.add_subcommand("stationarity", "segment vs spread start diameter laws");
  add_spec_flags(stationarity, stat_flags);
  stationarity->add_flag("--classes", stat_classes, "also compare translation-class laws");

  SpecFlags reach_flags;
  double cap = 4;
  std::size_t class_cap = 200000;
  auto* reach = app.add_subcommand("reach", "reachability BFS over translation classes");
  add_spec_flags(reach, reach_flags, false);
  reach->add_option("--cap", cap, "diameter cap");
  reach->add_option("--class-cap", class_cap, "stop after this many classes");

  SpecFlags check_flags;
  auto* check = app.add_subcommand("check", "built-in invariant suite");
  add_spec_flags(check, check_flags);

  std::string export_input, export_out = "out";
  auto* export_cmd = app.add_subcommand("export", "convert trajectories JSON-lines to CSV");
  export_cmd->add_option("--input", export_input, "trajectories.jsonl")->required();
  export_cmd->add_option("--out", export_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*enumerate) return run_enumerate(enum_flags);
    if (*sweep_cmd) return run_sweep(sw);
    if (*stationarity) return run_stationarity(stat_flags, stat_classes);
    if (*reach) return run_reach(reach_flags, cap, class_cap);
    if (*check) return run_check(check_flags);
    if (*export_cmd) return run_export(export_input, export_out);
  } catch (const ValidationError& e) {
    std::cerr << "error [validation]: " << e.what() << '\n';
    return 2;
  } catch (const InvariantViolation& e) {
    std::cerr << "error [invariant]: " << e.what() << '\n';
    return 1;
  } catch (const EnumerationInfeasible& e) {
    std::cerr << "error [enumeration]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error [runtime]: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
