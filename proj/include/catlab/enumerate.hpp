#pragma once

#include <gmpxx.h>

#include <map>
#include <vector>

#include "catlab/kernel.hpp"
#include "catlab/lattice.hpp"

namespace catlab {

using Rational = mpq_class;

struct EnumerationOptions {
  /// Refuse enumerations whose predicted trace count exceeds this.
  double trace_cap = 1e7;
};

template <class P>
struct TraceProbability {
  StepTrace trace;
  Configuration next;
  P probability;
};

/// Exact one-step law of CAT from a configuration, by trace, by next state
/// and by next translation class.
template <class P>
struct StepDistribution {
  std::vector<TraceProbability<P>> traces;
  std::map<Configuration, P> by_state;
  std::map<TranslationClass, P> by_class;

  P total() const {
    P sum = 0;
    for (const auto& [state, p] : by_state) sum += p;
    return sum;
  }
};

/// Upper bound on the number of substep sequences from an n-point state:
/// n!/(n-m)! activation orders times (2dn)^m transport choices.
double predicted_trace_count(std::size_t n, const ModelParams& params);

/// True when beta is an integer. Even beta makes every phi value rational;
/// odd beta does so only for integer distances, which the exact expansion
/// checks as it goes.
bool admits_exact_weights(double beta);

/// Depth-first expansion of every activation/transport choice with
/// extended-precision weights. Throws EnumerationInfeasible above the cap.
StepDistribution<long double> enumerate_step_distribution(const Configuration& c,
                                                          const ModelParams& params,
                                                          const EnumerationOptions& options = {});

/// Same expansion in exact rational arithmetic; requires admits_exact_weights(beta)
/// and throws ValidationError on an irrational weight.
StepDistribution<Rational> enumerate_step_distribution_exact(
    const Configuration& c, const ModelParams& params, const EnumerationOptions& options = {});

/// P(C_1 = D | C_0 = C); zero when D is not reachable in one step.
long double transition_probability(const Configuration& c, const Configuration& d,
                                   const ModelParams& params,
                                   const EnumerationOptions& options = {});
Rational transition_probability_exact(const Configuration& c, const Configuration& d,
                                      const ModelParams& params,
                                      const EnumerationOptions& options = {});

}  // namespace catlab
