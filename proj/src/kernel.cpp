#include "catlab/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <limits>

#include "catlab/errors.hpp"
#include "catlab/observables.hpp"

namespace catlab {

void ModelParams::validate() const {
  if (d < 1 || d > static_cast<int>(kMaxDim)) {
    throw ValidationError("d must be in 1.." + std::to_string(kMaxDim));
  }
  if (m < 1) throw ValidationError("m must be >= 1");
  if (!std::isfinite(beta)) throw ValidationError("beta must be finite");
}

std::optional<std::string> ModelParams::regime_warning() const {
  if (theorem_regime()) return std::nullopt;
  std::ostringstream os;
  os << "parameters outside the theorem regime (needs d >= 3 and beta > 2): d=" << d
     << " beta=" << beta << "; collapse/growth results are not asserted here";
  return os.str();
}

namespace {

constexpr std::size_t kLogTableSize = 1u << 14;

// ln k for small k; avoids a libm call for the common short distances.
const std::array<double, kLogTableSize>& log_table() {
  static const auto table = [] {
    std::array<double, kLogTableSize> t{};
    t[0] = 0.0;
    for (std::size_t k = 1; k < kLogTableSize; ++k) t[k] = std::log(static_cast<double>(k));
    return t;
  }();
  return table;
}

inline double log_clamped_sq(SquaredLength d2) {
  if (d2 <= 1) return 0.0;
  if (static_cast<std::size_t>(d2) < kLogTableSize) return log_table()[d2];
  return std::log(static_cast<double>(d2));
}

std::size_t sample_index(std::span<const Point> support, const Anchor& anchor, double beta,
                         double uniform, std::vector<double>& weights) {
  if (support.empty()) throw ValidationError("empty support");
  const std::size_t k = support.size();
  if (!anchor) {
    return std::min(static_cast<std::size_t>(uniform * static_cast<double>(k)), k - 1);
  }
  weights.resize(k);
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k; ++i) {
    weights[i] = -0.5 * beta * log_clamped_sq(squared_distance(*anchor, support[i]));
    max_log = std::max(max_log, weights[i]);
  }
  double total = 0.0;
  for (auto& w : weights) {
    w = std::exp(w - max_log);
    total += w;
    w = total;  // cumulative
  }
  const double target = uniform * total;
  const auto it = std::upper_bound(weights.begin(), weights.end(), target);
  return std::min(static_cast<std::size_t>(it - weights.begin()), k - 1);
}

void insert_sorted(std::vector<Point>& v, const Point& p) {
  v.insert(std::lower_bound(v.begin(), v.end(), p), p);
}

}  // namespace

double log_phi(const Point& u, const Point& v, double beta) {
  return -0.5 * beta * log_clamped_sq(squared_distance(u, v));
}

double phi(const Point& u, const Point& v, double beta) { return std::exp(log_phi(u, v, beta)); }

std::vector<double> mu_pmf(std::span<const Point> support, const Anchor& anchor, double beta) {
  if (support.empty()) throw ValidationError("empty support");
  std::vector<double> p(support.size());
  if (!anchor) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(support.size()));
    return p;
  }
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < support.size(); ++i) {
    p[i] = log_phi(*anchor, support[i], beta);
    max_log = std::max(max_log, p[i]);
  }
  double total = 0.0;
  for (auto& w : p) total += (w = std::exp(w - max_log));
  for (auto& w : p) w /= total;
  return p;
}

std::size_t mu_sample_index(std::span<const Point> support, const Anchor& anchor, double beta,
                            double uniform) {
  std::vector<double> scratch;
  return sample_index(support, anchor, beta, uniform, scratch);
}

Point mu_sample(std::span<const Point> support, const Anchor& anchor, double beta,
                RngStream& rng) {
  return support[mu_sample_index(support, anchor, beta, rng.next_step().uniform(0))];
}

std::vector<Point> StepTrace::sequence() const {
  std::vector<Point> out = activated;
  out.insert(out.end(), transported.begin(), transported.end());
  return out;
}

__extension__ using i128 = __int128;

bool amlg_holds(SquaredLength before, SquaredLength after, int m) {
  // after <= before + m^2 + 2m sqrt(before)
  const i128 slack = static_cast<i128>(after) - before - static_cast<i128>(m) * m;
  if (slack <= 0) return true;
  return slack * slack <= static_cast<i128>(4) * m * m * before;
}

StepResult cat_step(const Configuration& c, const ModelParams& params, RngStream& rng,
                    StepChecks checks) {
  return cat_step(c, params, rng.next_step(), checks);
}

StepResult cat_step(const Configuration& c, const ModelParams& params, const StepDraws& draws,
                    StepChecks checks) {
  const std::size_t n = c.size();
  const auto m = static_cast<std::size_t>(params.m);
  const auto d = static_cast<std::size_t>(params.d);
  if (c.dim() != d) throw ValidationError("configuration dimension does not match d");
  if (n <= m) throw ValidationError("state below minimum size");

  thread_local std::vector<double> weights;
  StepResult result{Configuration(d), {}};
  auto& trace = result.trace;
  trace.activated.reserve(m);
  trace.transported.reserve(m);

  std::vector<Point> current(c.begin(), c.end());
  Anchor anchor = kAnchorAtInfinity;
  for (std::size_t j = 0; j < m; ++j) {
    if (current.size() != n - j) throw InvariantViolation("activation support has wrong size");
    const auto idx = sample_index(current, anchor, params.beta, draws.uniform(j), weights);
    anchor = current[idx];
    trace.activated.push_back(current[idx]);
    current.erase(current.begin() + static_cast<std::ptrdiff_t>(idx));
  }

  // Boundary of the current set, maintained incrementally as sites are added.
  const Configuration remaining_boundary = boundary(Configuration(d, current));
  std::vector<Point> frontier(remaining_boundary.begin(), remaining_boundary.end());
  const std::size_t frontier_cap = 2 * d * n;
  for (std::size_t j = 0; j < m; ++j) {
    if (frontier.size() > frontier_cap || frontier.empty()) {
      throw InvariantViolation("transport support size out of bounds");
    }
    const auto idx = sample_index(frontier, anchor, params.beta, draws.uniform(m + j), weights);
    const Point y = frontier[idx];
    frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(idx));
    insert_sorted(current, y);
    for (std::size_t axis = 0; axis < d; ++axis) {
      for (Coord step : {Coord{-1}, Coord{1}}) {
        Point q = y;
        q[axis] += step;
        if (std::binary_search(current.begin(), current.end(), q)) continue;
        if (std::binary_search(frontier.begin(), frontier.end(), q)) continue;
        insert_sorted(frontier, q);
      }
    }
    if (checks == StepChecks::kFull) {
      const auto expected = boundary(Configuration(d, std::vector<Point>(current)));
      if (!std::equal(frontier.begin(), frontier.end(), expected.begin(), expected.end())) {
        throw InvariantViolation("incremental boundary diverged from full recompute");
      }
    }
    trace.transported.push_back(y);
    anchor = y;
  }

  result.next = Configuration(d, std::move(current));
  if (result.next.size() != n) throw InvariantViolation("mass conservation violated");
  if (!amlg_holds(diameter_sq(c), diameter_sq(result.next), params.m)) {
    throw InvariantViolation("at-most-linear-growth violated");
  }
  return result;
}

// --- trajectories ---

double StepRow::diameter() const { return std::sqrt(static_cast<double>(diameter_sq)); }

std::uint8_t compute_events(const Configuration& prev, const Configuration& next,
                            const ModelParams& params, const RecordOptions& options,
                            bool is_initial) {
  std::uint8_t flags = 0;
  if (event_no_small_comp(next, params.m)) flags |= kEventNoSmallComp;
  if (options.persist_radius && can_persist(next, params.m, *options.persist_radius)) {
    flags |= kEventCanPersist;
  }
  if (is_initial) return flags;
  if (event_deplete_small_comps(prev, next, params.m)) flags |= kEventDepleteSmallComps;
  if (options.ball_center &&
      event_add_to_ball(prev, next, *options.ball_center, options.ball_radius, params.m)) {
    flags |= kEventAddToBall;
  }
  return flags;
}

namespace {

StepRow make_row(std::uint64_t t, const Configuration& prev, const Configuration& next,
                 const ModelParams& params, const RecordOptions& options) {
  StepRow row;
  row.t = t;
  row.diameter_sq = diameter_sq(next);
  row.n_components = static_cast<std::uint32_t>(components(next).size());
  if (options.events) row.events = compute_events(prev, next, params, options, t == 0);
  return row;
}

}  // namespace

TrajectoryRecord cat_run(const Configuration& c0, const ModelParams& params, std::uint64_t steps,
                         RngStream& rng, const RecordOptions& options,
                         std::span<const Observer> observers) {
  params.validate();
  if (c0.size() <= static_cast<std::size_t>(params.m)) {
    throw ValidationError("state below minimum size");
  }
  TrajectoryRecord record;
  record.params = params;
  record.master_seed = rng.master_seed();
  record.stream_id = rng.stream_id();
  record.initial = c0;
  record.steps = steps;
  if (options.per_step) {
    record.rows.reserve(steps + 1);
    record.rows.push_back(make_row(0, c0, c0, params, options));
  }
  if (options.snapshot_stride) record.snapshots.push_back({0, c0});
  if (options.traces) record.traces.reserve(steps);

  Configuration state = c0;
  for (std::uint64_t t = 1; t <= steps; ++t) {
    StepResult step = cat_step(state, params, rng);
    if (options.per_step) record.rows.push_back(make_row(t, state, step.next, params, options));
    for (const auto& observer : observers) observer(StepContext{t, state, step.next, step.trace});
    if (options.snapshot_stride && t % options.snapshot_stride == 0) {
      record.snapshots.push_back({t, step.next});
    }
    if (options.traces) record.traces.push_back(std::move(step.trace));
    state = std::move(step.next);
  }
  record.final_state = std::move(state);
  return record;
}

}  // namespace catlab
