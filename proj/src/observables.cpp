#include "catlab/observables.hpp"

#include <algorithm>

#include "catlab/errors.hpp"

namespace catlab {

namespace {

// True when x has a lattice neighbour in U that is not among `removed`.
bool borders_remainder(const Configuration& u, const Point& x, std::span<const Point> removed) {
  for (std::size_t axis = 0; axis < x.dim(); ++axis) {
    for (Coord step : {Coord{-1}, Coord{1}}) {
      Point q = x;
      q[axis] += step;
      if (u.contains(q) && std::find(removed.begin(), removed.end(), q) == removed.end()) {
        return true;
      }
    }
  }
  return false;
}

// Every chosen x_j borders U minus {x_j, ..., x_k}.
bool prefix_feasible(const Configuration& u, std::span<const Point> chosen) {
  for (std::size_t j = 0; j < chosen.size(); ++j) {
    if (!borders_remainder(u, chosen[j], chosen.subspan(j))) return false;
  }
  return true;
}

bool search(const Configuration& u, std::size_t m, std::vector<Point>& chosen) {
  if (chosen.size() == m) return true;
  for (const auto& x : u) {
    if (std::find(chosen.begin(), chosen.end(), x) != chosen.end()) continue;
    chosen.push_back(x);
    if (prefix_feasible(u, chosen) && search(u, m, chosen)) return true;
    chosen.pop_back();
  }
  return false;
}

}  // namespace

std::optional<ProgWitness> progressive_boundary_witness(const Configuration& u, int m) {
  if (m < 1) throw ValidationError("m must be >= 1");
  if (u.size() <= static_cast<std::size_t>(m)) {
    throw ValidationError("progressive boundary needs |U| > m");
  }
  std::vector<Point> chosen;
  if (!search(u, static_cast<std::size_t>(m), chosen)) return std::nullopt;
  return ProgWitness{std::move(chosen)};
}

bool has_progressive_boundary(const Configuration& u, int m) {
  return progressive_boundary_witness(u, m).has_value();
}

bool verify_progressive_witness(const Configuration& u, const ProgWitness& witness) {
  const auto& xs = witness.sequence;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (!u.contains(xs[j])) return false;
    for (std::size_t k = j + 1; k < xs.size(); ++k) {
      if (xs[j] == xs[k]) return false;
    }
  }
  for (std::size_t j = 0; j < xs.size(); ++j) {
    Configuration rest = u;
    for (std::size_t k = j; k < xs.size(); ++k) rest.erase(xs[k]);
    if (rest.empty()) return false;
    const Configuration edge = boundary(rest);
    if (!edge.contains(xs[j])) return false;
  }
  return true;
}

std::optional<std::vector<Configuration>> can_persist_partition(const Configuration& c, int m,
                                                                int r) {
  if (r < 2) throw ValidationError("unsupported separation radius");
  auto parts = components(c);
  const auto lo = static_cast<std::size_t>(m + 1);
  const auto hi = static_cast<std::size_t>(2 * m + 1);
  for (const auto& part : parts) {
    if (part.size() < lo || part.size() > hi || !is_e1_segment(part)) return std::nullopt;
  }
  const SquaredLength r2 = SquaredLength{r} * r;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      if (*distance_sq(parts[i], parts[j]) < r2) return std::nullopt;
    }
  }
  return parts;
}

bool can_persist(const Configuration& c, int m, int r) {
  return can_persist_partition(c, m, r).has_value();
}

Configuration small_component_sites(const Configuration& c, int m) {
  const auto sizes = component_sizes(c);
  std::vector<Point> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (sizes[i] <= static_cast<std::size_t>(m)) out.push_back(c[i]);
  }
  return Configuration(c.dim(), std::move(out));
}

bool event_add_to_ball(const Configuration& c0, const Configuration& c1, const Point& x, double r,
                       int m) {
  return Ball(x, r + m).count_in(c1) > Ball(x, r).count_in(c0);
}

bool event_deplete_small_comps(const Configuration& c0, const Configuration& c1, int m) {
  return small_component_sites(c1, m).size() < small_component_sites(c0, m).size();
}

bool event_no_small_comp(const Configuration& c, int m) {
  const auto sizes = component_sizes(c);
  return std::all_of(sizes.begin(), sizes.end(),
                     [m](std::size_t s) { return s > static_cast<std::size_t>(m); });
}

bool all_clusters_segments(const TupleState& state) {
  return std::all_of(state.clusters().begin(), state.clusters().end(),
                     [](const Configuration& c) { return !c.empty() && is_e1_segment(c); });
}

bool is_stable_tuple(const TupleState& state, int m) {
  if (state.size() < 2 || !all_clusters_segments(state)) return false;
  return std::all_of(state.clusters().begin(), state.clusters().end(), [m](const auto& c) {
    return c.size() >= static_cast<std::size_t>(m + 1) &&
           c.size() <= static_cast<std::size_t>(2 * m + 1);
  });
}

void RenewalTracker::observe(std::uint64_t t, const TupleState& state) {
  if (!series_.times.empty() && t <= series_.times.back()) {
    throw ValidationError("renewal tracker fed out of order");
  }
  if (!all_clusters_segments(state)) return;
  series_.times.push_back(t);
  std::vector<Point> reps;
  reps.reserve(state.size());
  for (const auto& c : state.clusters()) reps.push_back(lex_min(c));
  series_.representatives.push_back(std::move(reps));
}

RenewalSeries renewal_series(std::span<const TupleState> trajectory) {
  RenewalTracker tracker;
  for (std::size_t t = 0; t < trajectory.size(); ++t) tracker.observe(t, trajectory[t]);
  return tracker.series();
}

std::vector<Point> derived_walk(const RenewalSeries& series, std::size_t i, std::size_t j) {
  if (i == j) throw ValidationError("derived walk needs two distinct clusters");
  std::vector<Point> walk;
  if (series.size() == 0) return walk;
  const std::size_t k = series.representatives.front().size();
  if (i >= k || j >= k) throw ValidationError("unknown cluster index");
  const auto& reps = series.representatives;
  walk.reserve(series.size());
  walk.push_back(reps[0][i] - reps[0][j]);
  for (std::size_t l = 1; l < series.size(); ++l) {
    const Point increment = reps[l][i] - reps[l][j] - reps[l - 1][i] + reps[l - 1][j];
    walk.push_back(walk.back() + increment);
    if (walk.back() != reps[l][i] - reps[l][j]) {
      throw InvariantViolation("derived walk telescoping identity failed");
    }
  }
  return walk;
}

std::vector<Point> walk_increments(std::span<const Point> walk) {
  std::vector<Point> out;
  for (std::size_t k = 1; k < walk.size(); ++k) out.push_back(walk[k] - walk[k - 1]);
  return out;
}

}  // namespace catlab
