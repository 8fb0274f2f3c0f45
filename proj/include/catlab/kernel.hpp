#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catlab/lattice.hpp"
#include "catlab/rng.hpp"

namespace catlab {

/// Data of the chain: grid dimension d, elements moved per step m and the
/// distance exponent beta.
struct ModelParams {
  int d = 3;
  int m = 2;
  double beta = 4.0;

  /// Throws ValidationError for d outside 1..kMaxDim, m < 1 or non-finite beta.
  void validate() const;
  /// The regime covered by the collapse/growth theorems: d >= 3 and beta > 2.
  bool theorem_regime() const { return d >= 3 && beta > 2.0; }
  /// A human-readable warning when outside theorem_regime().
  std::optional<std::string> regime_warning() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Substep weight max{|u - v|, 1}^(-beta), from the exact squared distance.
double phi(const Point& u, const Point& v, double beta);
/// log phi(u, v) = -(beta / 2) ln max{|u - v|^2, 1}.
double log_phi(const Point& u, const Point& v, double beta);

/// Anchor of a substep measure; nullopt stands for the point at infinity,
/// which gives the uniform law.
using Anchor = std::optional<Point>;
inline const Anchor kAnchorAtInfinity = std::nullopt;

/// Probabilities of mu_{U,u}, aligned with `support`. Throws "empty support".
std::vector<double> mu_pmf(std::span<const Point> support, const Anchor& anchor, double beta);

/// Index into `support` drawn from mu_{U,u} by inverting the cumulative sum
/// of max-log-shifted weights at `uniform` in [0, 1).
std::size_t mu_sample_index(std::span<const Point> support, const Anchor& anchor, double beta,
                            double uniform);
Point mu_sample(std::span<const Point> support, const Anchor& anchor, double beta,
                RngStream& rng);

/// The 2m substep choices of one step: activated A_{t,1..m} then
/// transported T_{t,1..m}.
struct StepTrace {
  std::vector<Point> activated;
  std::vector<Point> transported;

  /// The concatenation (A_{t,1}, ..., A_{t,m}, T_{t,1}, ..., T_{t,m}).
  std::vector<Point> sequence() const;

  friend bool operator==(const StepTrace&, const StepTrace&) = default;
  friend auto operator<=>(const StepTrace&, const StepTrace&) = default;
};

struct StepResult {
  Configuration next;
  StepTrace trace;
};

enum class StepChecks {
  /// Size bounds per substep, mass conservation and a.m.l.g.
  kCheap,
  /// kCheap plus a from-scratch boundary recompute after every transport.
  kFull,
};

/// One CAT step from C. Throws "state below minimum size" when |C| <= m and
/// InvariantViolation if any always-on check fails.
StepResult cat_step(const Configuration& c, const ModelParams& params, RngStream& rng,
                    StepChecks checks = StepChecks::kCheap);
/// Same step with explicitly supplied draws (substeps 0..2m-1 of lane 0).
StepResult cat_step(const Configuration& c, const ModelParams& params, const StepDraws& draws,
                    StepChecks checks = StepChecks::kCheap);

/// diam(after) <= diam(before) + m, decided on squared lengths without
/// floating point.
bool amlg_holds(SquaredLength diameter_sq_before, SquaredLength diameter_sq_after, int m);

// --- trajectories ---

enum EventFlag : std::uint8_t {
  kEventDepleteSmallComps = 1u << 0,
  kEventNoSmallComp = 1u << 1,
  kEventAddToBall = 1u << 2,
  kEventCanPersist = 1u << 3,
};

/// Per-step observables of C_t. Transition events refer to C_{t-1} -> C_t
/// and are never set on the t = 0 row.
struct StepRow {
  std::uint64_t t = 0;
  SquaredLength diameter_sq = 0;
  std::uint32_t n_components = 0;
  std::uint8_t events = 0;

  double diameter() const;
  bool has(EventFlag flag) const { return (events & flag) != 0; }
  friend bool operator==(const StepRow&, const StepRow&) = default;
};

struct Snapshot {
  std::uint64_t t = 0;
  Configuration state;
  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct RecordOptions {
  bool per_step = true;
  /// Store C_t whenever t % snapshot_stride == 0; 0 disables snapshots.
  std::uint64_t snapshot_stride = 0;
  bool traces = false;
  bool events = true;
  /// AddToBall_{x,r} is recorded when set.
  std::optional<Point> ball_center;
  double ball_radius = 0.0;
  /// CanPersist_r is recorded when set (r >= 2).
  std::optional<int> persist_radius;
};

struct TrajectoryRecord {
  ModelParams params;
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
  Configuration initial;
  Configuration final_state;
  std::uint64_t steps = 0;
  std::vector<StepRow> rows;
  std::vector<Snapshot> snapshots;
  /// traces[t - 1] produced C_t from C_{t-1}.
  std::vector<StepTrace> traces;

  friend bool operator==(const TrajectoryRecord&, const TrajectoryRecord&) = default;
};

struct StepContext {
  std::uint64_t t;  // index of `next`
  const Configuration& prev;
  const Configuration& next;
  const StepTrace& trace;
};
using Observer = std::function<void(const StepContext&)>;

/// Applies cat_step T times from C0, calling every observer after each step.
TrajectoryRecord cat_run(const Configuration& c0, const ModelParams& params, std::uint64_t steps,
                         RngStream& rng, const RecordOptions& options = {},
                         std::span<const Observer> observers = {});

/// Event bits for the transition prev -> next under `options`.
std::uint8_t compute_events(const Configuration& prev, const Configuration& next,
                            const ModelParams& params, const RecordOptions& options,
                            bool is_initial);

}  // namespace catlab
