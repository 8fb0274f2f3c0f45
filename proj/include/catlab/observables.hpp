#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "catlab/copycat.hpp"
#include "catlab/lattice.hpp"

namespace catlab {

// --- progressive boundaries ---

/// Ordered x_1..x_m with x_j on the boundary of U minus {x_j, ..., x_m}.
struct ProgWitness {
  std::vector<Point> sequence;
  friend bool operator==(const ProgWitness&, const ProgWitness&) = default;
};

/// The lexicographically first witness, by depth-first search over ordered
/// m-subsets. nullopt when U has no progressive boundary. Throws when |U| <= m.
std::optional<ProgWitness> progressive_boundary_witness(const Configuration& u, int m);
bool has_progressive_boundary(const Configuration& u, int m);
/// Direct re-check of the witness condition.
bool verify_progressive_witness(const Configuration& u, const ProgWitness& witness);

// --- cluster structure ---

/// The components of C when they form a CanPersist_r partition: each an
/// e_1-segment with m+1..2m+1 elements, pairwise at distance >= r.
/// Throws "unsupported separation radius" for r < 2.
std::optional<std::vector<Configuration>> can_persist_partition(const Configuration& c, int m,
                                                                int r);
bool can_persist(const Configuration& c, int m, int r);

/// Sites whose component has at most m elements.
Configuration small_component_sites(const Configuration& c, int m);

// --- events ---

/// |C1 ∩ B_x(r + m)| > |C0 ∩ B_x(r)|.
bool event_add_to_ball(const Configuration& c0, const Configuration& c1, const Point& x,
                       double r, int m);
/// Fewer small-component sites after the step than before.
bool event_deplete_small_comps(const Configuration& c0, const Configuration& c1, int m);
/// Every component has more than m elements.
bool event_no_small_comp(const Configuration& c, int m);

// --- renewals and pair walks ---

/// At least two clusters, each an e_1-segment with m+1..2m+1 elements.
bool is_stable_tuple(const TupleState& state, int m);
bool all_clusters_segments(const TupleState& state);

/// Times at which every cluster is an e_1-segment, with the lexicographic
/// minimum of each cluster at those times.
struct RenewalSeries {
  std::vector<std::uint64_t> times;
  /// representatives[l][i] is the least point of cluster i at times[l].
  std::vector<std::vector<Point>> representatives;
  std::size_t size() const { return times.size(); }
};

/// Streaming renewal detection for long runs; feed states in time order.
class RenewalTracker {
 public:
  void observe(std::uint64_t t, const TupleState& state);
  const RenewalSeries& series() const { return series_; }

 private:
  RenewalSeries series_;
};

/// Renewals of a trajectory whose entry t is the state at time t. Meant for
/// CopyCAT runs; on lifted-chain trajectories the result is experimental.
RenewalSeries renewal_series(std::span<const TupleState> trajectory);

/// S_k^{ij} for k = 0..size-1, accumulated from the increments and checked
/// against the closed form M^i - M^j at every renewal.
std::vector<Point> derived_walk(const RenewalSeries& series, std::size_t i, std::size_t j);
/// Increments S_k - S_{k-1}, k >= 1.
std::vector<Point> walk_increments(std::span<const Point> walk);

}  // namespace catlab
