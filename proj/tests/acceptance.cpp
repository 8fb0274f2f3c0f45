// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "catlab/config.hpp"
#include "catlab/copycat.hpp"
#include "catlab/enumerate.hpp"
#include "catlab/errors.hpp"
#include "catlab/harness.hpp"
#include "catlab/kernel.hpp"
#include "catlab/observables.hpp"
#include "catlab/stats.hpp"

using namespace catlab;

namespace {

constexpr std::uint64_t kSeed = 20240611;

int failures = 0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

void criterion(int id, const std::string& name, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.pass) ++failures;
  std::printf("[%s] %2d %s: %s (%.1fs)\n", out.pass ? "PASS" : "FAIL", id, name.c_str(),
              out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string num(double x, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << x;
  return os.str();
}

// --- 1 ---

Outcome kernel_exactness() {
  const Configuration c{Point{0}, Point{1}};
  const ModelParams params{1, 1, 1};
  const Configuration right{Point{1}, Point{2}};
  const Configuration left{Point{-1}, Point{0}};
  const auto law = enumerate_step_distribution_exact(c, params);
  // Worked by hand: activate either point (1/2 each); the lone survivor's
  // boundary sites sit at distance 1 and 2 from the activated point, so the
  // transport returns with weight 1/(1 + 1/2) = 2/3.
  const bool exact = law.by_state.size() == 3 && law.by_state.at(c) == Rational(2, 3) &&
                     law.by_state.at(right) == Rational(1, 6) &&
                     law.by_state.at(left) == Rational(1, 6) && law.total() == 1;

  std::map<int, double> truth{{0, 2.0 / 3}, {1, 1.0 / 6}, {-1, 1.0 / 6}};
  std::map<int, long> counts;
  RngStream rng(kSeed, 1);
  Configuration state = c;
  const int samples = 1000000;
  for (int i = 0; i < samples; ++i) {
    auto step = cat_step(state, params, rng);
    const int shift = step.next[0][0] - state[0][0];
    if (step.next != state.translated(Point{shift})) return {false, "step left the class"};
    ++counts[shift];
    state = std::move(step.next);
  }
  const double tv = total_variation(truth, normalise(counts));
  return {exact && tv < 0.005, std::string("exact law ") + (exact ? "2/3, 1/6, 1/6" : "WRONG") +
                                   "; sampled TV " + num(tv) + " over 10^6 steps (< 0.005)"};
}

// --- 2 ---

Outcome structural_invariants() {
  const ModelParams params{3, 2, 4};
  Configuration c = spread_configuration(3, 2, 5, 100);
  RngStream rng(kSeed, 2);
  std::uint64_t mass = 0, growth = 0;
  const std::uint64_t steps = 1000000;
  for (std::uint64_t t = 0; t < steps; ++t) {
    auto step = cat_step(c, params, rng);
    if (step.next.size() != c.size()) ++mass;
    // diam' <= diam + m, checked on exact squares: (d'^2 - d^2 - m^2)^2 <= 4 m^2 d^2.
    const long double before = std::sqrt(static_cast<long double>(diameter_sq(c)));
    const long double after = std::sqrt(static_cast<long double>(diameter_sq(step.next)));
    const bool amlg = amlg_holds(diameter_sq(c), diameter_sq(step.next), params.m);
    if (!amlg || after > before + params.m + 1e-9L) ++growth;
    c = std::move(step.next);
  }
  return {mass == 0 && growth == 0, "10^6 steps at (3,2,4): " + std::to_string(mass) +
                                        " mass violations, " + std::to_string(growth) +
                                        " a.m.l.g. violations"};
}

// --- 3 ---

Outcome translation_invariance() {
  std::mt19937_64 gen(kSeed);
  int agreed = 0;
  std::string sizes;
  for (int k = 0; k < 5; ++k) {
    const int d = 2 + k % 2;
    const int m = 1 + k % 2;
    const std::size_t n = static_cast<std::size_t>(m) + 2;
    const ModelParams params{d, m, 4};
    std::uniform_int_distribution<int> coord(0, 3), far(-50, 50);
    std::set<Point> pts;
    while (pts.size() < n) {
      Point p(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) p[i] = coord(gen);
      pts.insert(p);
    }
    const Configuration c(static_cast<std::size_t>(d), {pts.begin(), pts.end()});
    Point x(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) x[i] = far(gen);
    const auto a = enumerate_step_distribution_exact(c, params).by_class;
    const auto b = enumerate_step_distribution_exact(c.translated(x), params).by_class;
    if (a == b) ++agreed;
    sizes += (k ? "," : "") + std::to_string(a.size());
  }
  return {agreed == 5, std::to_string(agreed) + "/5 instances with identical rational class laws"
                       " (classes per law: " + sizes + ")"};
}

// --- 4, 5, 6 ---

SweepResult phase_sweep() {
  ExperimentSpec base;
  base.params = {3, 2, 4};
  base.initial.kind = InitialKind::kSpread;
  base.initial.diameter = 100;
  base.steps = 100000;
  base.ensemble = 50;
  base.master_seed = kSeed;
  base.jobs = std::max(1u, std::thread::hardware_concurrency());
  const std::vector<int> ms{1, 2};
  return sweep(base, ms, [](int m) {
    std::vector<std::size_t> ns;
    for (int n = m + 1; n <= 2 * m + 4; ++n) ns.push_back(static_cast<std::size_t>(n));
    return ns;
  });
}

Outcome subcritical(const SweepResult& r) {
  const auto* cell = r.find(2, 5);
  std::uint64_t min_visits = ~std::uint64_t{0};
  for (const auto& s : cell->seeds) min_visits = std::min(min_visits, s.visits_below);
  return {cell->collapse_fraction >= 0.9,
          "n=5: " + num(100 * cell->collapse_fraction) + "% of 50 seeds reach diam <= 50 with >= 10 visits"
          " (median min diam " + num(cell->median_min_diameter) + ", fewest visits " +
              std::to_string(min_visits) + ")"};
}

// Log-log slope of the median diameter against t over [10^3, 10^5].
double growth_exponent(std::size_t seeds) {
  ExperimentSpec spec;
  spec.params = {3, 2, 4};
  spec.n = 8;
  spec.initial.kind = InitialKind::kSpread;
  spec.initial.diameter = 100;
  spec.steps = 100000;
  spec.master_seed = kSeed;
  spec.record.per_step = false;
  spec.record.events = false;
  std::vector<std::uint64_t> checkpoints;
  for (double t = 1000; t <= 100000.5; t *= std::pow(10.0, 0.25)) {
    checkpoints.push_back(static_cast<std::uint64_t>(std::llround(t)));
  }
  std::vector<std::vector<double>> at(checkpoints.size());
  for (std::size_t i = 0; i < seeds; ++i) {
    std::size_t next = 0;
    const Observer obs = [&](const StepContext& ctx) {
      if (next < checkpoints.size() && ctx.t == checkpoints[next]) at[next++].push_back(diameter(ctx.next));
    };
    run_trajectory(spec, i, std::span<const Observer>(&obs, 1));
  }
  std::vector<double> x, y;
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    x.push_back(std::log(static_cast<double>(checkpoints[k])));
    y.push_back(std::log(median(at[k])));
  }
  return fit_line(x, y).slope;
}

Outcome supercritical(const SweepResult& r) {
  const auto* cell = r.find(2, 8);
  const double slope = growth_exponent(10);
  return {cell->growth_fraction >= 0.9,
          "n=8: " + num(100 * cell->growth_fraction) +
              "% of 50 seeds end above diam 100 with late minimum >= 50 (median final diam " +
              num(cell->median_final_diameter) + "; log-log growth exponent " + num(slope, 3) +
              ", reported only)"};
}

Outcome phase_boundary(const SweepResult& r) {
  std::string table;
  bool ok = true;
  for (int m : {1, 2}) {
    const auto b = r.boundary(m);
    ok = ok && b && *b == static_cast<std::size_t>(2 * m + 2);
    table += (m == 1 ? "" : "; ") + std::string("m=") + std::to_string(m) + " [";
    for (const auto& cell : r.cells) {
      if (cell.m != m) continue;
      table += " " + std::to_string(cell.n) + ":" +
               (cell.collapse_dominant ? (cell.growth_dominant ? "B" : "C")
                                       : (cell.growth_dominant ? "G" : "?")) +
               "(" + num(100 * cell.collapse_fraction, 3) + "/" + num(100 * cell.growth_fraction, 3) + ")";
    }
    table += " ] boundary " + (b ? std::to_string(*b) : std::string("unclear"));
  }
  return {ok, table + "; expected 2m+2 = 4 and 6"};
}

// --- 7 ---

Outcome recurrence() {
  ExperimentSpec a;
  a.params = {3, 2, 4};
  a.n = 5;
  a.initial.kind = InitialKind::kSegment;
  a.steps = 100000;
  a.ensemble = 50;
  a.master_seed = kSeed + 7;
  a.jobs = std::max(1u, std::thread::hardware_concurrency());
  ExperimentSpec b = a;
  b.initial.kind = InitialKind::kSpread;
  b.initial.diameter = 100;
  b.master_seed = kSeed + 8;
  const auto rep = stationarity_check(a, b);
  return {rep.tv_diameter < 0.1, "diameter-histogram TV over t in [5*10^4, 10^5] = " +
                                     num(rep.tv_diameter) + " (< 0.1); medians at T: " +
                                     num(rep.median_a.back()) + " vs " + num(rep.median_b.back())};
}

// --- 8 ---

Outcome irreducibility() {
  const ModelParams params{2, 1, 3};
  const auto rep = reachability_bfs(params, 3, 4.0);
  std::size_t bad_evidence = 0;
  for (const auto& [cls, ev] : rep.evidence) {
    if (!(ev.probability > 0) || TranslationClass(apply_trace(ev.parent.canonical(), ev.trace)) != cls) {
      ++bad_evidence;
    }
  }
  const bool ok = !rep.partial && rep.missing.empty() && rep.non_prog_successors.empty() &&
                  bad_evidence == 0 && rep.self_loop_probability > 0;
  return {ok, "(2,1,3) cap 4: " + std::to_string(rep.visited.size() - rep.missing.size()) + " visited, " +
                  std::to_string(rep.prog_classes.size()) + " Prog classes, coverage " +
                  num(100 * rep.coverage()) + "%, " + std::to_string(rep.non_prog_successors.size()) +
                  " non-Prog successors, self-loop " +
                  num(static_cast<double>(rep.self_loop_probability)) + ", " +
                  std::to_string(bad_evidence) + " bad evidence traces"};
}

// --- 9 ---

Outcome copycat_approximation() {
  const ModelParams params{3, 1, 4};
  std::vector<long double> tvs;
  std::string detail;
  for (Coord s : {8, 16, 32}) {
    const TupleState state(3, {e1_segment(3, 0, 1), e1_segment(3, 1 + s, 2 + s)});
    tvs.push_back(copycat_approximation_tv(state, params));
    detail += (detail.empty() ? "" : ", ") + std::string("sep ") + std::to_string(s) + ": " +
              num(static_cast<double>(tvs.back()), 3);
  }
  const bool ok = tvs[0] > 0 && tvs[1] > 0 && tvs[2] > 0 && tvs[0] > tvs[1] && tvs[1] > tvs[2];
  return {ok, "TV " + detail + " (positive, strictly decreasing)"};
}

// --- 10 ---

Outcome walk_symmetry() {
  const ModelParams params{3, 2, 4};
  const TupleState initial(3, {e1_segment(3, 0, 2), e1_segment(3, 12, 14)});
  if (!is_stable_tuple(initial, params.m)) return {false, "initial tuple is not stable"};
  RngStream rng(kSeed, 10);
  CopyRunOptions options;
  options.target_renewals = 10001;
  const auto run = run_copycat(initial, params, 500000000, rng, options);
  if (run.renewals.times.empty() || run.renewals.times.front() != 0) return {false, "xi_0 != 0"};
  // Throws on any telescoping mismatch.
  const auto walk = derived_walk(run.renewals, 0, 1);
  std::size_t exact = 0;
  for (std::size_t k = 0; k < walk.size(); ++k) {
    exact += walk[k] == run.renewals.representatives[k][0] - run.renewals.representatives[k][1];
  }
  const auto inc = walk_increments(walk);
  bool ok = exact == walk.size() && inc.size() == 10000;
  std::string detail;
  for (std::size_t a = 0; a < 3; ++a) {
    std::vector<double> v;
    for (const auto& p : inc) v.push_back(p[a]);
    const auto s = mean_stats(v);
    const bool within = std::fabs(s.mean) <= 3 * s.stderr_mean;
    ok = ok && within;
    detail += (a ? ", " : "") + std::string("S") + std::to_string(a + 1) + " mean " + num(s.mean, 3) +
              " (3SE " + num(3 * s.stderr_mean, 3) + ")";
  }
  return {ok, std::to_string(inc.size()) + " renewals over " + std::to_string(run.steps) +
                  " steps; " + detail + "; telescoping exact at " + std::to_string(exact) + "/" +
                  std::to_string(walk.size())};
}

}  // namespace

int main() {
  criterion(1, "kernel exactness", kernel_exactness);
  criterion(2, "structural invariants", structural_invariants);
  criterion(3, "translation invariance", translation_invariance);
  SweepResult sweep_result;
  const auto start = std::chrono::steady_clock::now();
  std::string sweep_error;
  try {
    sweep_result = phase_sweep();
  } catch (const std::exception& e) {
    sweep_error = e.what();
  }
  std::printf("(phase sweep m in {1,2}, n in m+1..2m+4, 50 seeds, T = 10^5: %.1fs)\n",
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  const auto from_sweep = [&](auto fn) {
    return [&, fn] {
      if (!sweep_error.empty()) return Outcome{false, "sweep failed: " + sweep_error};
      return fn(sweep_result);
    };
  };
  criterion(4, "critical numerosity, sub-critical", from_sweep(subcritical));
  criterion(5, "critical numerosity, super-critical", from_sweep(supercritical));
  criterion(6, "phase boundary", from_sweep(phase_boundary));
  criterion(7, "recurrence diagnostic", recurrence);
  criterion(8, "irreducibility", irreducibility);
  criterion(9, "copycat approximation", copycat_approximation);
  criterion(10, "derived-walk symmetry", walk_symmetry);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
