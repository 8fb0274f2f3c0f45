#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catlab/enumerate.hpp"
#include "catlab/kernel.hpp"
#include "catlab/lattice.hpp"

namespace catlab {

/// An ordered tuple of configurations. For the lifted chain the clusters
/// partition one configuration; for CopyCAT each cluster lives in its own
/// copy of Z^d, stored in shared global coordinates.
class TupleState {
 public:
  explicit TupleState(std::size_t dim = 1) : dim_(dim) {}
  TupleState(std::size_t dim, std::vector<Configuration> clusters);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return clusters_.size(); }
  const Configuration& operator[](std::size_t i) const { return clusters_[i]; }
  Configuration& operator[](std::size_t i) { return clusters_[i]; }
  const std::vector<Configuration>& clusters() const { return clusters_; }
  std::size_t total_size() const;

  /// Union of all clusters (points shared by several copies appear once).
  Configuration merged() const;
  /// All clusters other than i, merged.
  Configuration others(std::size_t i) const;
  bool pairwise_disjoint() const;

  friend bool operator==(const TupleState&, const TupleState&) = default;
  friend auto operator<=>(const TupleState&, const TupleState&) = default;

 private:
  std::size_t dim_;
  std::vector<Configuration> clusters_;
};

/// Throws ValidationError unless every cluster has more than m elements.
void validate_tuple(const TupleState& state, int m);

/// The lifted state of C with the given colouring. Parts must be disjoint,
/// cover C and each have more than m elements.
TupleState lift_partition(const Configuration& c, const std::vector<Configuration>& parts, int m);

/// Recolours one CAT step on the union: the element transported in slot j
/// takes the colour of the element activated in slot j.
TupleState recolour(const TupleState& state, const StepTrace& trace);

struct LiftedStepResult {
  TupleState next;
  StepTrace trace;
};

/// One step of the lifted chain: CAT on the union, colours following slots.
LiftedStepResult lifted_step(const TupleState& state, const ModelParams& params, RngStream& rng);

struct CopyStepTrace {
  std::size_t chosen = 0;
  StepTrace trace;
};

struct CopyStepResult {
  TupleState next;
  CopyStepTrace trace;
};

/// Cluster index drawn with probability |D^i| / sum_j |D^j|.
std::size_t choose_cluster(const TupleState& state, double uniform);

/// One CopyCAT step: a size-biased cluster takes one CAT step in its own copy.
CopyStepResult copycat_step(const TupleState& state, const ModelParams& params, RngStream& rng);

/// min_i dist(U^i, U^{!=i}) squared; nullopt (= +infinity) for one cluster.
std::optional<SquaredLength> sep_sq(const TupleState& state);
double sep(const TupleState& state);

/// Membership in Tup_{a,b}: sep >= a and diam(U^i) <= b ln dist(U^i, U^{!=i})
/// for every i. Throws unless a > 0 and b > 0.
bool in_tup_ab(const TupleState& state, double a, double b);

/// Exact one-step laws over tuple outcomes.
std::map<TupleState, long double> enumerate_copycat_step(const TupleState& state,
                                                        const ModelParams& params,
                                                        const EnumerationOptions& options = {});
std::map<TupleState, long double> enumerate_lifted_step(const TupleState& state,
                                                       const ModelParams& params,
                                                       const EnumerationOptions& options = {});
std::map<TupleState, Rational> enumerate_copycat_step_exact(
    const TupleState& state, const ModelParams& params, const EnumerationOptions& options = {});
std::map<TupleState, Rational> enumerate_lifted_step_exact(
    const TupleState& state, const ModelParams& params, const EnumerationOptions& options = {});

/// True when at most one cluster differs between the two tuples.
bool is_single_cluster_move(const TupleState& from, const TupleState& to);

/// Total variation between the lifted CAT one-step law conditioned on
/// single-cluster-move outcomes and the CopyCAT one-step law.
long double copycat_approximation_tv(const TupleState& state, const ModelParams& params,
                                     const EnumerationOptions& options = {});

/// Text format: "clusters=<k>" header, then k configuration blocks in the
/// single-configuration format, separated by blank lines.
void write_tuple(std::ostream& os, const TupleState& state);
TupleState read_tuple(std::istream& is);
TupleState parse_tuple(const std::string& text);
std::string format_tuple(const TupleState& state);

}  // namespace catlab
