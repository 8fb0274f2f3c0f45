#include "catlab/copycat.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "catlab/errors.hpp"
#include "catlab/stats.hpp"

namespace catlab {

TupleState::TupleState(std::size_t dim, std::vector<Configuration> clusters)
    : dim_(dim), clusters_(std::move(clusters)) {
  for (const auto& c : clusters_) {
    if (c.dim() != dim_) throw ValidationError("cluster dimension mismatch");
  }
}

std::size_t TupleState::total_size() const {
  std::size_t n = 0;
  for (const auto& c : clusters_) n += c.size();
  return n;
}

Configuration TupleState::merged() const {
  Configuration out(dim_);
  for (const auto& c : clusters_) out = set_union(out, c);
  return out;
}

Configuration TupleState::others(std::size_t i) const {
  Configuration out(dim_);
  for (std::size_t j = 0; j < clusters_.size(); ++j) {
    if (j != i) out = set_union(out, clusters_[j]);
  }
  return out;
}

bool TupleState::pairwise_disjoint() const { return merged().size() == total_size(); }

void validate_tuple(const TupleState& state, int m) {
  if (state.size() == 0) throw ValidationError("tuple has no clusters");
  for (const auto& c : state.clusters()) {
    if (c.size() <= static_cast<std::size_t>(m)) {
      throw ValidationError("cluster has " + std::to_string(c.size()) +
                            " elements; needs more than m = " + std::to_string(m));
    }
  }
}

TupleState lift_partition(const Configuration& c, const std::vector<Configuration>& parts, int m) {
  TupleState state(c.dim(), parts);
  validate_tuple(state, m);
  if (!state.pairwise_disjoint()) throw ValidationError("parts are not disjoint");
  if (state.merged() != c) throw ValidationError("parts do not cover the configuration");
  return state;
}

TupleState recolour(const TupleState& state, const StepTrace& trace) {
  TupleState next = state;
  std::vector<std::size_t> colour(trace.activated.size());
  for (std::size_t j = 0; j < trace.activated.size(); ++j) {
    std::size_t i = 0;
    while (i < state.size() && !state[i].contains(trace.activated[j])) ++i;
    if (i == state.size()) throw InvariantViolation("activated element has no colour");
    colour[j] = i;
  }
  for (std::size_t j = 0; j < trace.activated.size(); ++j) next[colour[j]].erase(trace.activated[j]);
  for (std::size_t j = 0; j < trace.transported.size(); ++j) {
    next[colour[j]].insert(trace.transported[j]);
  }
  return next;
}

LiftedStepResult lifted_step(const TupleState& state, const ModelParams& params, RngStream& rng) {
  if (!state.pairwise_disjoint()) throw ValidationError("lifted clusters must be disjoint");
  auto step = cat_step(state.merged(), params, rng);
  return {recolour(state, step.trace), std::move(step.trace)};
}

std::size_t choose_cluster(const TupleState& state, double uniform) {
  const double target = uniform * static_cast<double>(state.total_size());
  double cumulative = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    cumulative += static_cast<double>(state[i].size());
    if (target < cumulative) return i;
  }
  return state.size() - 1;
}

CopyStepResult copycat_step(const TupleState& state, const ModelParams& params, RngStream& rng) {
  const StepDraws draws = rng.next_step();
  const std::size_t chosen = choose_cluster(state, draws.uniform(0, 1));
  auto step = cat_step(state[chosen], params, draws);
  CopyStepResult result{state, {chosen, std::move(step.trace)}};
  result.next[chosen] = std::move(step.next);
  return result;
}

std::optional<SquaredLength> sep_sq(const TupleState& state) {
  if (state.size() < 2) return std::nullopt;
  SquaredLength best = std::numeric_limits<SquaredLength>::max();
  for (std::size_t i = 0; i < state.size(); ++i) {
    for (std::size_t j = i + 1; j < state.size(); ++j) {
      best = std::min(best, *distance_sq(state[i], state[j]));
    }
  }
  return best;
}

double sep(const TupleState& state) {
  const auto s = sep_sq(state);
  return s ? std::sqrt(static_cast<double>(*s)) : std::numeric_limits<double>::infinity();
}

bool in_tup_ab(const TupleState& state, double a, double b) {
  if (!(a > 0) || !(b > 0)) throw ValidationError("Tup_{a,b} needs a > 0 and b > 0");
  if (sep(state) < a) return false;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const double dist = distance(state[i], state.others(i));
    if (std::isinf(dist)) continue;
    if (dist <= 0) return false;
    if (diameter(state[i]) > b * std::log(dist)) return false;
  }
  return true;
}

namespace {

template <class P, class Enumerate>
std::map<TupleState, P> copycat_law(const TupleState& state, const ModelParams& params,
                                    Enumerate enumerate) {
  validate_tuple(state, params.m);
  std::map<TupleState, P> out;
  const P total = P(static_cast<long>(state.total_size()));
  for (std::size_t i = 0; i < state.size(); ++i) {
    const P choice = P(static_cast<long>(state[i].size())) / total;
    const auto law = enumerate(state[i]);
    for (const auto& [next, p] : law.by_state) {
      TupleState outcome = state;
      outcome[i] = next;
      out[outcome] += P(choice * p);
    }
  }
  return out;
}

template <class P, class Enumerate>
std::map<TupleState, P> lifted_law(const TupleState& state, const ModelParams& params,
                                   Enumerate enumerate) {
  validate_tuple(state, params.m);
  if (!state.pairwise_disjoint()) throw ValidationError("lifted clusters must be disjoint");
  std::map<TupleState, P> out;
  const auto law = enumerate(state.merged());
  for (const auto& tp : law.traces) out[recolour(state, tp.trace)] += tp.probability;
  return out;
}

}  // namespace

std::map<TupleState, long double> enumerate_copycat_step(const TupleState& state,
                                                        const ModelParams& params,
                                                        const EnumerationOptions& options) {
  return copycat_law<long double>(state, params, [&](const Configuration& c) {
    return enumerate_step_distribution(c, params, options);
  });
}

std::map<TupleState, long double> enumerate_lifted_step(const TupleState& state,
                                                       const ModelParams& params,
                                                       const EnumerationOptions& options) {
  return lifted_law<long double>(state, params, [&](const Configuration& c) {
    return enumerate_step_distribution(c, params, options);
  });
}

std::map<TupleState, Rational> enumerate_copycat_step_exact(const TupleState& state,
                                                           const ModelParams& params,
                                                           const EnumerationOptions& options) {
  return copycat_law<Rational>(state, params, [&](const Configuration& c) {
    return enumerate_step_distribution_exact(c, params, options);
  });
}

std::map<TupleState, Rational> enumerate_lifted_step_exact(const TupleState& state,
                                                          const ModelParams& params,
                                                          const EnumerationOptions& options) {
  return lifted_law<Rational>(state, params, [&](const Configuration& c) {
    return enumerate_step_distribution_exact(c, params, options);
  });
}

bool is_single_cluster_move(const TupleState& from, const TupleState& to) {
  if (from.size() != to.size()) return false;
  std::size_t changed = 0;
  for (std::size_t i = 0; i < from.size(); ++i) changed += from[i] != to[i];
  return changed <= 1;
}

long double copycat_approximation_tv(const TupleState& state, const ModelParams& params,
                                     const EnumerationOptions& options) {
  const auto copy = enumerate_copycat_step(state, params, options);
  const auto lifted = enumerate_lifted_step(state, params, options);
  std::map<TupleState, long double> restricted;
  long double mass = 0;
  for (const auto& [outcome, p] : lifted) {
    if (!is_single_cluster_move(state, outcome)) continue;
    restricted[outcome] = p;
    mass += p;
  }
  for (auto& [outcome, p] : restricted) p /= mass;
  return total_variation(restricted, copy);
}

// --- text format ---

void write_tuple(std::ostream& os, const TupleState& state) {
  os << "clusters=" << state.size() << '\n';
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (i) os << '\n';
    write_configuration(os, state[i]);
  }
}

std::string format_tuple(const TupleState& state) {
  std::ostringstream os;
  write_tuple(os, state);
  return os.str();
}

TupleState read_tuple(std::istream& is) {
  std::string line;
  std::optional<std::size_t> count;
  std::vector<std::string> blocks;
  while (std::getline(is, line)) {
    std::string body = line.substr(0, line.find('#'));
    const auto start = body.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (!count) {
      if (body.compare(start, 9, "clusters=") != 0) {
        throw ValidationError("tuple header must be 'clusters=<k>', got: " + line);
      }
      try {
        count = std::stoul(body.substr(start + 9));
      } catch (const std::exception&) {
        throw ValidationError("bad cluster count: " + line);
      }
      continue;
    }
    if (body.compare(start, 2, "d=") == 0) blocks.emplace_back();
    if (blocks.empty()) throw ValidationError("point line before a 'd=' block header");
    blocks.back() += body + '\n';
  }
  if (!count) throw ValidationError("missing 'clusters=<k>' header");
  if (blocks.size() != *count) {
    throw ValidationError("expected " + std::to_string(*count) + " clusters, found " +
                          std::to_string(blocks.size()));
  }
  std::vector<Configuration> clusters;
  for (const auto& b : blocks) clusters.push_back(parse_configuration(b));
  const std::size_t dim = clusters.empty() ? 1 : clusters.front().dim();
  return TupleState(dim, std::move(clusters));
}

TupleState parse_tuple(const std::string& text) {
  std::istringstream is(text);
  return read_tuple(is);
}

}  // namespace catlab
