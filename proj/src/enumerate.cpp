#include "catlab/enumerate.hpp"

#include <cmath>

#include "catlab/errors.hpp"

namespace catlab {

double predicted_trace_count(std::size_t n, const ModelParams& params) {
  double count = 1.0;
  for (int j = 0; j < params.m; ++j) count *= static_cast<double>(n - static_cast<std::size_t>(j));
  const double transport = 2.0 * params.d * static_cast<double>(n);
  for (int j = 0; j < params.m; ++j) count *= transport;
  return count;
}

bool admits_exact_weights(double beta) {
  return std::isfinite(beta) && beta == std::floor(beta) && std::fabs(beta) < 128;
}

namespace {

long double weight(const Point& u, const Point& v, double beta, long double*) {
  const auto d2 = std::max<SquaredLength>(squared_distance(u, v), 1);
  return std::pow(static_cast<long double>(d2), -static_cast<long double>(beta) / 2);
}

Rational weight(const Point& u, const Point& v, double beta, Rational*) {
  const auto d2 = std::max<SquaredLength>(squared_distance(u, v), 1);
  const auto b = static_cast<long>(beta);
  // phi = d2^(-beta/2); for odd beta the distance itself must be an integer.
  mpz_class base(static_cast<long>(d2));
  long k = b / 2;
  if (b % 2 != 0) {
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), base.get_mpz_t());
    if (root * root != base) {
      throw ValidationError("substep weight is irrational (odd beta with a non-integer distance)");
    }
    base = root;
    k = b;
  }
  mpz_class power;
  mpz_pow_ui(power.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(k >= 0 ? k : -k));
  Rational w = k >= 0 ? Rational(1, power) : Rational(power);
  w.canonicalize();
  return w;
}

template <class P>
std::vector<P> measure(const std::vector<Point>& support, const Anchor& anchor, double beta) {
  std::vector<P> probs(support.size());
  if (!anchor) {
    for (auto& p : probs) p = P(1) / P(static_cast<long>(support.size()));
    return probs;
  }
  P total = 0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    probs[i] = weight(*anchor, support[i], beta, static_cast<P*>(nullptr));
    total += probs[i];
  }
  for (auto& p : probs) p /= total;
  return probs;
}

template <class P>
class Expander {
 public:
  Expander(const ModelParams& params, StepDistribution<P>& out) : params_(params), out_(out) {}

  void run(const Configuration& c) {
    std::vector<Point> current(c.begin(), c.end());
    activate(current, kAnchorAtInfinity, P(1));
  }

 private:
  void activate(std::vector<Point>& current, const Anchor& anchor, const P& prob) {
    if (trace_.activated.size() == static_cast<std::size_t>(params_.m)) {
      transport(Configuration(static_cast<std::size_t>(params_.d), current), anchor, prob);
      return;
    }
    const auto probs = measure<P>(current, anchor, params_.beta);
    for (std::size_t i = 0; i < current.size(); ++i) {
      std::vector<Point> rest = current;
      const Point x = rest[i];
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      trace_.activated.push_back(x);
      activate(rest, x, P(prob * probs[i]));
      trace_.activated.pop_back();
    }
  }

  void transport(const Configuration& current, const Anchor& anchor, const P& prob) {
    if (trace_.transported.size() == static_cast<std::size_t>(params_.m)) {
      out_.traces.push_back({trace_, current, prob});
      return;
    }
    const Configuration support = boundary(current);
    const std::vector<Point> sites(support.begin(), support.end());
    const auto probs = measure<P>(sites, anchor, params_.beta);
    for (std::size_t i = 0; i < sites.size(); ++i) {
      Configuration next = current;
      next.insert(sites[i]);
      trace_.transported.push_back(sites[i]);
      transport(next, sites[i], P(prob * probs[i]));
      trace_.transported.pop_back();
    }
  }

  const ModelParams& params_;
  StepDistribution<P>& out_;
  StepTrace trace_;
};

template <class P>
StepDistribution<P> expand(const Configuration& c, const ModelParams& params,
                           const EnumerationOptions& options) {
  params.validate();
  if (c.dim() != static_cast<std::size_t>(params.d)) {
    throw ValidationError("configuration dimension does not match d");
  }
  if (c.size() <= static_cast<std::size_t>(params.m)) {
    throw ValidationError("state below minimum size");
  }
  const double predicted = predicted_trace_count(c.size(), params);
  if (predicted > options.trace_cap) throw EnumerationInfeasible(predicted, options.trace_cap);

  StepDistribution<P> out;
  Expander<P>(params, out).run(c);
  for (const auto& tp : out.traces) {
    out.by_state[tp.next] += tp.probability;
    out.by_class[TranslationClass(tp.next)] += tp.probability;
  }
  return out;
}

}  // namespace

StepDistribution<long double> enumerate_step_distribution(const Configuration& c,
                                                          const ModelParams& params,
                                                          const EnumerationOptions& options) {
  return expand<long double>(c, params, options);
}

StepDistribution<Rational> enumerate_step_distribution_exact(const Configuration& c,
                                                             const ModelParams& params,
                                                             const EnumerationOptions& options) {
  if (!admits_exact_weights(params.beta)) {
    throw ValidationError("exact enumeration needs an integer beta");
  }
  return expand<Rational>(c, params, options);
}

long double transition_probability(const Configuration& c, const Configuration& d,
                                   const ModelParams& params, const EnumerationOptions& options) {
  if (d.size() != c.size()) return 0;
  const auto law = enumerate_step_distribution(c, params, options);
  const auto it = law.by_state.find(d);
  return it == law.by_state.end() ? 0 : it->second;
}

Rational transition_probability_exact(const Configuration& c, const Configuration& d,
                                      const ModelParams& params,
                                      const EnumerationOptions& options) {
  if (d.size() != c.size()) return 0;
  const auto law = enumerate_step_distribution_exact(c, params, options);
  const auto it = law.by_state.find(d);
  return it == law.by_state.end() ? Rational(0) : it->second;
}

}  // namespace catlab
