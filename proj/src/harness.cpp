#include "catlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "catlab/errors.hpp"
#include "catlab/stats.hpp"

namespace catlab {

void parallel_for_index(std::size_t count, unsigned jobs,
                        const std::function<void(std::size_t)>& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_index = count;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (i < error_index) {
            error_index = i;
            error = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

TrajectoryRecord run_trajectory(const ExperimentSpec& spec, std::size_t index,
                                std::span<const Observer> observers) {
  RngStream rng(spec.master_seed, index);
  return cat_run(initial_configuration(spec), spec.params, spec.steps, rng, spec.record,
                 observers);
}

std::vector<TrajectoryRecord> run_ensemble(const ExperimentSpec& spec) {
  spec.validate();
  initial_configuration(spec);  // fail fast on a bad initial condition
  std::vector<TrajectoryRecord> out(spec.ensemble);
  parallel_for_index(spec.ensemble, spec.jobs,
                     [&](std::size_t i) { out[i] = run_trajectory(spec, i); });
  return out;
}

std::vector<SquaredLength> diameter_series(const TrajectoryRecord& record) {
  std::vector<SquaredLength> out;
  out.reserve(record.rows.size());
  for (const auto& row : record.rows) out.push_back(row.diameter_sq);
  return out;
}

// --- classification ---

double collapse_level(std::size_t n, double initial_diameter) {
  return std::min(2.0 * static_cast<double>(n * n), initial_diameter / 2.0);
}

SeedVerdict classify_series(std::span<const SquaredLength> series, const ClassificationRule& rule) {
  if (series.empty()) throw ValidationError("empty diameter series");
  const auto as_diameter = [](SquaredLength d2) { return std::sqrt(static_cast<double>(d2)); };
  SeedVerdict v;
  const std::size_t last = series.size() - 1;
  const std::size_t late_begin = last / 2;
  SquaredLength min_all = series[0];
  SquaredLength min_late = series[late_begin];
  const double level_sq = rule.level * rule.level;
  for (std::size_t t = 0; t <= last; ++t) {
    min_all = std::min(min_all, series[t]);
    if (t >= late_begin) min_late = std::min(min_late, series[t]);
    if (static_cast<double>(series[t]) <= level_sq) ++v.visits_below;
  }
  v.initial_diameter = as_diameter(series.front());
  v.final_diameter = as_diameter(series.back());
  v.min_diameter = as_diameter(min_all);
  v.late_min_diameter = as_diameter(min_late);
  v.collapse = static_cast<double>(min_all) <= level_sq && v.visits_below >= rule.min_visits;
  v.growth = series.back() > series.front() && static_cast<double>(min_late) >= level_sq;
  return v;
}

SweepCell classify_cell(int m, std::size_t n, std::vector<SeedVerdict> seeds, double level,
                        double initial_diameter, double dominance_fraction) {
  SweepCell cell;
  cell.m = m;
  cell.n = n;
  cell.defined = n > static_cast<std::size_t>(m);
  cell.level = level;
  cell.seeds = std::move(seeds);
  if (!cell.defined || cell.seeds.empty()) return cell;
  std::vector<double> mins, finals;
  std::size_t collapses = 0, growths = 0;
  for (const auto& s : cell.seeds) {
    collapses += s.collapse;
    growths += s.growth;
    mins.push_back(s.min_diameter);
    finals.push_back(s.final_diameter);
  }
  const auto k = static_cast<double>(cell.seeds.size());
  cell.collapse_fraction = static_cast<double>(collapses) / k;
  cell.growth_fraction = static_cast<double>(growths) / k;
  cell.median_min_diameter = median(mins);
  cell.median_final_diameter = median(finals);
  cell.collapse_dominant = cell.collapse_fraction >= dominance_fraction;
  cell.growth_dominant = cell.growth_fraction >= dominance_fraction;
  cell.median_collapse = cell.median_min_diameter <= level;
  cell.median_growth = cell.median_final_diameter > initial_diameter;
  return cell;
}

const SweepCell* SweepResult::find(int m, std::size_t n) const {
  for (const auto& c : cells) {
    if (c.m == m && c.n == n) return &c;
  }
  return nullptr;
}

std::optional<std::size_t> SweepResult::boundary(int m) const {
  std::vector<const SweepCell*> row;
  for (const auto& c : cells) {
    if (c.m == m && c.defined) row.push_back(&c);
  }
  std::sort(row.begin(), row.end(), [](auto* a, auto* b) { return a->n < b->n; });
  std::optional<std::size_t> switch_at;
  for (const auto* c : row) {
    const bool collapse_only = c->collapse_dominant && !c->growth_dominant;
    const bool growth_only = c->growth_dominant && !c->collapse_dominant;
    if (!switch_at) {
      if (growth_only) {
        switch_at = c->n;
      } else if (!collapse_only) {
        return std::nullopt;
      }
    } else if (!growth_only) {
      return std::nullopt;
    }
  }
  // Both phases must be present for a boundary to exist.
  if (!switch_at || row.empty() || row.front()->n == *switch_at) return std::nullopt;
  return switch_at;
}

SweepResult sweep(const ExperimentSpec& base, std::span<const int> m_values,
                  const std::function<std::vector<std::size_t>(int)>& n_values,
                  double dominance_fraction) {
  SweepResult result;
  result.dominance_fraction = dominance_fraction;
  result.steps = base.steps;
  result.initial_diameter = static_cast<double>(base.initial.diameter);
  if (base.initial.kind != InitialKind::kSpread) {
    throw ValidationError("sweep needs a spread initial condition");
  }
  for (int m : m_values) {
    for (std::size_t n : n_values(m)) {
      const double d0 = static_cast<double>(base.initial.diameter);
      const double level = collapse_level(n, d0);
      if (n <= static_cast<std::size_t>(m)) {
        result.cells.push_back(classify_cell(m, n, {}, level, d0, dominance_fraction));
        continue;
      }
      ExperimentSpec spec = base;
      spec.params.m = m;
      spec.n = n;
      spec.record = RecordOptions{};
      spec.record.per_step = false;
      spec.record.events = false;
      spec.validate();
      std::vector<SeedVerdict> verdicts(spec.ensemble);
      parallel_for_index(spec.ensemble, spec.jobs, [&](std::size_t i) {
        std::vector<SquaredLength> series;
        series.reserve(spec.steps + 1);
        const Configuration c0 = initial_configuration(spec);
        series.push_back(diameter_sq(c0));
        const Observer track = [&](const StepContext& ctx) {
          series.push_back(diameter_sq(ctx.next));
        };
        run_trajectory(spec, i, std::span<const Observer>(&track, 1));
        verdicts[i] = classify_series(series, {level, 10});
      });
      result.cells.push_back(
          classify_cell(m, n, std::move(verdicts), level, d0, dominance_fraction));
    }
  }
  return result;
}

// --- stationarity ---

namespace {

struct WindowStats {
  std::map<long, std::uint64_t> histogram;
  std::map<TranslationClass, std::uint64_t> classes;
  std::vector<double> checkpoint_diameters;
};

WindowStats collect_window(const ExperimentSpec& spec, std::size_t index, std::uint64_t begin,
                           std::uint64_t end, long overflow,
                           std::span<const std::uint64_t> checkpoints, bool track_classes) {
  WindowStats stats;
  stats.checkpoint_diameters.assign(checkpoints.size(), 0.0);
  const auto record = [&](std::uint64_t t, const Configuration& c) {
    const double diam = diameter(c);
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
      if (checkpoints[k] == t) stats.checkpoint_diameters[k] = diam;
    }
    if (t < begin || t > end) return;
    ++stats.histogram[std::min(static_cast<long>(std::floor(diam)), overflow)];
    if (track_classes) ++stats.classes[TranslationClass(c)];
  };
  ExperimentSpec local = spec;
  local.record = RecordOptions{};
  local.record.per_step = false;
  local.record.events = false;
  record(0, initial_configuration(local));
  const Observer obs = [&](const StepContext& ctx) { record(ctx.t, ctx.next); };
  run_trajectory(local, index, std::span<const Observer>(&obs, 1));
  return stats;
}

struct EnsembleWindow {
  std::map<long, std::uint64_t> histogram;
  std::map<TranslationClass, std::uint64_t> classes;
  std::vector<double> medians;
};

EnsembleWindow ensemble_window(const ExperimentSpec& spec, std::uint64_t begin, std::uint64_t end,
                               long overflow, std::span<const std::uint64_t> checkpoints,
                               bool track_classes) {
  std::vector<WindowStats> per(spec.ensemble);
  parallel_for_index(spec.ensemble, spec.jobs, [&](std::size_t i) {
    per[i] = collect_window(spec, i, begin, end, overflow, checkpoints, track_classes);
  });
  EnsembleWindow out;
  for (const auto& s : per) {
    for (const auto& [bin, c] : s.histogram) out.histogram[bin] += c;
    for (const auto& [cls, c] : s.classes) out.classes[cls] += c;
  }
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    std::vector<double> values;
    for (const auto& s : per) values.push_back(s.checkpoint_diameters[k]);
    out.medians.push_back(median(values));
  }
  return out;
}

}  // namespace

StationarityReport stationarity_check(const ExperimentSpec& a, const ExperimentSpec& b,
                                      const StationarityOptions& options) {
  a.validate();
  b.validate();
  if (a.params != b.params || a.n != b.n || a.steps != b.steps) {
    throw ValidationError("stationarity specs must share (d, m, beta, n, T)");
  }
  StationarityReport report;
  report.window_begin = a.steps / 2;
  report.window_end = a.steps;
  report.overflow_bin = options.overflow_bin.value_or(static_cast<long>(2 * a.n * a.n));
  report.checkpoints = {a.steps / 4, a.steps / 2, (3 * a.steps) / 4, a.steps};
  const auto wa = ensemble_window(a, report.window_begin, report.window_end, report.overflow_bin,
                                  report.checkpoints, options.track_classes);
  const auto wb = ensemble_window(b, report.window_begin, report.window_end, report.overflow_bin,
                                  report.checkpoints, options.track_classes);
  report.histogram_a = normalise(wa.histogram);
  report.histogram_b = normalise(wb.histogram);
  report.tv_diameter = total_variation(report.histogram_a, report.histogram_b);
  if (options.track_classes) {
    report.tv_class = total_variation(normalise(wa.classes), normalise(wb.classes));
  }
  report.median_a = wa.medians;
  report.median_b = wb.medians;
  return report;
}

// --- reachability ---

double ReachabilityReport::coverage() const {
  if (prog_classes.empty()) return 1.0;
  return 1.0 - static_cast<double>(missing.size()) / static_cast<double>(prog_classes.size());
}

std::vector<TranslationClass> enumerate_classes(std::size_t d, std::size_t n, double cap) {
  if (n < 1) throw ValidationError("n must be positive");
  const double cap_sq = cap * cap;
  const auto reach = static_cast<Coord>(std::floor(cap));
  std::vector<Point> offsets;
  Point origin(d);
  Point p(d);
  for (std::size_t i = 0; i < d; ++i) p[i] = -reach;
  while (true) {
    if (p > origin && static_cast<double>(squared_norm(p)) <= cap_sq) offsets.push_back(p);
    std::size_t axis = 0;
    while (axis < d && p[axis] == reach) p[axis++] = -reach;
    if (axis == d) break;
    ++p[axis];
  }
  std::sort(offsets.begin(), offsets.end());

  std::vector<TranslationClass> out;
  std::vector<Point> chosen{origin};
  std::function<void(std::size_t)> extend = [&](std::size_t from) {
    if (chosen.size() == n) {
      out.emplace_back(Configuration(d, chosen));
      return;
    }
    for (std::size_t k = from; k < offsets.size(); ++k) {
      const Point& q = offsets[k];
      bool ok = true;
      for (const auto& c : chosen) {
        if (static_cast<double>(squared_distance(c, q)) > cap_sq) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      chosen.push_back(q);
      extend(k + 1);
      chosen.pop_back();
    }
  };
  extend(0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TranslationClass> enumerate_prog_classes(const ModelParams& params, std::size_t n,
                                                     double cap) {
  std::vector<TranslationClass> out;
  for (auto& cls : enumerate_classes(static_cast<std::size_t>(params.d), n, cap)) {
    if (has_progressive_boundary(cls.canonical(), params.m)) out.push_back(std::move(cls));
  }
  return out;
}

Configuration apply_trace(const Configuration& c, const StepTrace& trace) {
  if (trace.activated.size() != trace.transported.size()) {
    throw ValidationError("trace halves differ in length");
  }
  Configuration current = c;
  for (const auto& x : trace.activated) {
    if (!current.erase(x)) throw ValidationError("trace activates a site not in the set");
  }
  for (const auto& y : trace.transported) {
    if (current.empty() || !boundary(current).contains(y)) {
      throw ValidationError("trace transports off the boundary");
    }
    current.insert(y);
  }
  return current;
}

ReachabilityReport reachability_bfs(const ModelParams& params, std::size_t n, double cap,
                                    const ReachabilityOptions& options) {
  params.validate();
  if (n <= static_cast<std::size_t>(params.m)) throw ValidationError("state below minimum size");
  const auto d = static_cast<std::size_t>(params.d);
  const double cap_sq = cap * cap;
  ReachabilityReport report;
  const TranslationClass root(e1_segment(d, 1, static_cast<Coord>(n)));
  std::set<TranslationClass> seen{root};
  std::set<TranslationClass> non_prog;
  std::deque<TranslationClass> queue{root};
  report.visited.push_back(root);

  while (!queue.empty()) {
    const TranslationClass current = queue.front();
    queue.pop_front();
    const auto law = enumerate_step_distribution(current.canonical(), params, options.enumeration);
    if (current == root) {
      const auto it = law.by_class.find(root);
      report.self_loop_probability = it == law.by_class.end() ? 0 : it->second;
    }
    for (const auto& tp : law.traces) {
      if (!(tp.probability > 0)) continue;
      TranslationClass child(tp.next);
      if (seen.contains(child)) continue;
      if (!has_progressive_boundary(child.canonical(), params.m)) non_prog.insert(child);
      if (static_cast<double>(diameter_sq(child.canonical())) > cap_sq) continue;
      if (seen.size() >= options.class_cap) {
        report.partial = true;
        continue;
      }
      seen.insert(child);
      report.evidence.emplace(child, ReachEvidence{current, tp.trace, tp.probability});
      report.visited.push_back(child);
      queue.push_back(std::move(child));
    }
  }

  report.non_prog_successors.assign(non_prog.begin(), non_prog.end());
  report.prog_classes = enumerate_prog_classes(params, n, cap);
  for (const auto& cls : report.prog_classes) {
    if (!seen.contains(cls)) report.missing.push_back(cls);
  }
  return report;
}

// --- CopyCAT runs ---

CopyTrajectory run_copycat(const TupleState& initial, const ModelParams& params,
                           std::uint64_t max_steps, RngStream& rng,
                           const CopyRunOptions& options) {
  params.validate();
  validate_tuple(initial, params.m);
  CopyTrajectory out;
  out.initial = initial;
  RenewalTracker tracker;
  tracker.observe(0, initial);
  if (options.rows) out.rows.push_back({0, 0, sep(initial), !tracker.series().times.empty()});
  TupleState state = initial;
  std::uint64_t t = 0;
  const auto done = [&] {
    return options.target_renewals && tracker.series().size() >= *options.target_renewals;
  };
  while (t < max_steps && !done()) {
    ++t;
    auto step = copycat_step(state, params, rng);
    state = std::move(step.next);
    const std::size_t before = tracker.series().size();
    tracker.observe(t, state);
    if (options.rows) {
      out.rows.push_back({t, step.trace.chosen, sep(state), tracker.series().size() > before});
    }
  }
  out.final_state = std::move(state);
  out.steps = t;
  out.renewals = tracker.series();
  return out;
}

}  // namespace catlab
