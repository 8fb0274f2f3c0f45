#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "catlab/config.hpp"
#include "catlab/copycat.hpp"
#include "catlab/enumerate.hpp"
#include "catlab/kernel.hpp"
#include "catlab/observables.hpp"

namespace catlab {

/// Runs fn(0), ..., fn(count - 1) on up to `jobs` threads. Results must be
/// written by index, which keeps output independent of scheduling. The
/// exception of the lowest failing index is rethrown.
void parallel_for_index(std::size_t count, unsigned jobs,
                        const std::function<void(std::size_t)>& fn);

/// Trajectory `index` of an ensemble: stream_id = index.
TrajectoryRecord run_trajectory(const ExperimentSpec& spec, std::size_t index,
                                std::span<const Observer> observers = {});

/// K independent trajectories, ordered by stream id.
std::vector<TrajectoryRecord> run_ensemble(const ExperimentSpec& spec);

/// diam(C_t)^2 for t = 0..T, taken from the per-step rows.
std::vector<SquaredLength> diameter_series(const TrajectoryRecord& record);

// --- collapse / growth classification ---

/// Diameter level separating collapse from growth: 2n^2, capped at half the
/// initial diameter so the level stays below the starting point.
double collapse_level(std::size_t n, double initial_diameter);

struct SeedVerdict {
  double initial_diameter = 0;
  double min_diameter = 0;
  double final_diameter = 0;
  /// min of diam(C_t) over t in [T/2, T].
  double late_min_diameter = 0;
  /// Number of t in [0, T] with diam(C_t) <= level.
  std::uint64_t visits_below = 0;
  bool collapse = false;
  bool growth = false;
};

struct ClassificationRule {
  double level = 50;
  std::uint64_t min_visits = 10;
};

/// Collapse: min diameter <= level with at least min_visits visits.
/// Growth: final diameter > initial and the late minimum stays >= level.
SeedVerdict classify_series(std::span<const SquaredLength> diameter_sq_series,
                            const ClassificationRule& rule);

struct SweepCell {
  int m = 0;
  std::size_t n = 0;
  bool defined = false;
  double level = 0;
  std::vector<SeedVerdict> seeds;
  double collapse_fraction = 0;
  double growth_fraction = 0;
  double median_min_diameter = 0;
  double median_final_diameter = 0;
  /// Fraction-based verdicts (>= dominance_fraction of seeds).
  bool collapse_dominant = false;
  bool growth_dominant = false;
  /// Median-based verdicts, reported raw.
  bool median_collapse = false;
  bool median_growth = false;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  double dominance_fraction = 0.9;
  std::uint64_t steps = 0;
  double initial_diameter = 0;

  const SweepCell* find(int m, std::size_t n) const;
  /// Smallest n at which the verdicts switch cleanly from collapse-only to
  /// growth-only for this m; nullopt when the switch is not clean.
  std::optional<std::size_t> boundary(int m) const;
};

/// Sweeps (m, n) over `base`'s remaining settings. Cells with n <= m are
/// marked undefined and not simulated.
SweepResult sweep(const ExperimentSpec& base, std::span<const int> m_values,
                  const std::function<std::vector<std::size_t>(int)>& n_values,
                  double dominance_fraction = 0.9);

SweepCell classify_cell(int m, std::size_t n, std::vector<SeedVerdict> seeds, double level,
                        double initial_diameter, double dominance_fraction);

// --- stationarity ---

struct StationarityReport {
  std::uint64_t window_begin = 0;
  std::uint64_t window_end = 0;
  /// Histograms of floor(diam) with everything >= overflow_bin merged.
  long overflow_bin = 0;
  std::map<long, double> histogram_a;
  std::map<long, double> histogram_b;
  double tv_diameter = 0;
  std::optional<double> tv_class;
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> median_a;
  std::vector<double> median_b;
};

struct StationarityOptions {
  /// Also compare empirical translation-class laws (tiny instances only).
  bool track_classes = false;
  /// Defaults to 2n^2.
  std::optional<long> overflow_bin;
};

/// Compares the diameter laws over t in [T/2, T] of two ensembles that
/// differ only in their initial condition.
StationarityReport stationarity_check(const ExperimentSpec& a, const ExperimentSpec& b,
                                      const StationarityOptions& options = {});

// --- reachability ---

struct ReachEvidence {
  TranslationClass parent;
  StepTrace trace;
  long double probability = 0;
};

struct ReachabilityOptions {
  std::size_t class_cap = 200000;
  EnumerationOptions enumeration;
};

struct ReachabilityReport {
  std::vector<TranslationClass> visited;  // BFS order
  std::map<TranslationClass, ReachEvidence> evidence;  // every class but the root
  std::vector<TranslationClass> prog_classes;  // exhaustive, within the cap
  std::vector<TranslationClass> missing;
  std::vector<TranslationClass> non_prog_successors;
  long double self_loop_probability = 0;
  bool partial = false;

  double coverage() const;
};

/// All translation classes of n-point subsets of Z^d with diameter <= cap.
std::vector<TranslationClass> enumerate_classes(std::size_t d, std::size_t n, double cap);
std::vector<TranslationClass> enumerate_prog_classes(const ModelParams& params, std::size_t n,
                                                     double cap);

/// BFS over translation classes from class(L_{1,n}) along positive-probability
/// one-step transitions, keeping classes with diameter <= cap.
ReachabilityReport reachability_bfs(const ModelParams& params, std::size_t n, double cap,
                                    const ReachabilityOptions& options = {});

/// Applies a trace to a configuration; throws if it is not a legal step.
Configuration apply_trace(const Configuration& c, const StepTrace& trace);

// --- CopyCAT runs ---

struct CopyRunRow {
  std::uint64_t t = 0;
  std::size_t chosen = 0;
  double sep = 0;
  bool renewal = false;
};

struct CopyTrajectory {
  TupleState initial;
  TupleState final_state;
  std::uint64_t steps = 0;
  std::vector<CopyRunRow> rows;
  RenewalSeries renewals;
};

struct CopyRunOptions {
  bool rows = false;
  /// Stop early once this many renewals (including xi_0) were seen.
  std::optional<std::size_t> target_renewals;
};

CopyTrajectory run_copycat(const TupleState& initial, const ModelParams& params,
                           std::uint64_t max_steps, RngStream& rng,
                           const CopyRunOptions& options = {});

}  // namespace catlab
