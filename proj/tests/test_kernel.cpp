#include <doctest.h>

#include <map>
#include <random>

#include "catlab/errors.hpp"
#include "catlab/kernel.hpp"
#include "catlab/stats.hpp"
#include "helpers.hpp"

using namespace catlab;
using testing_util::to_set;

TEST_CASE("model parameter validation") {
  CHECK_NOTHROW(ModelParams{3, 2, 4}.validate());
  CHECK_THROWS_AS((ModelParams{0, 2, 4}.validate()), ValidationError);
  CHECK_THROWS_AS((ModelParams{7, 2, 4}.validate()), ValidationError);
  CHECK_THROWS_AS((ModelParams{3, 0, 4}.validate()), ValidationError);
  CHECK_THROWS_AS((ModelParams{3, 1, std::nan("")}.validate()), ValidationError);
  CHECK_FALSE((ModelParams{3, 2, 4}.regime_warning()));
  CHECK((ModelParams{2, 1, 3}.regime_warning()));
  CHECK((ModelParams{3, 1, 2}.regime_warning()));
}

TEST_CASE("phi") {
  CHECK(phi(Point{0}, Point{0}, 4) == doctest::Approx(1.0));
  CHECK(phi(Point{0}, Point{1}, 4) == doctest::Approx(1.0));
  CHECK(phi(Point{0}, Point{2}, 1) == doctest::Approx(0.5));
  CHECK(phi(Point{0, 0}, Point{3, 4}, 2) == doctest::Approx(1.0 / 25));
  CHECK(log_phi(Point{0}, Point{100000}, 4) == doctest::Approx(-4 * std::log(100000.0)));
}

TEST_CASE("mu is uniform at infinity and weighted otherwise") {
  const std::vector<Point> support{Point{-1}, Point{2}};
  const auto uniform = mu_pmf(support, kAnchorAtInfinity, 4);
  CHECK(uniform[0] == doctest::Approx(0.5));
  // Anchored at 0: phi(0,-1) = 1, phi(0,2) = 1/2.
  const auto weighted = mu_pmf(support, Point{0}, 1);
  CHECK(weighted[0] == doctest::Approx(2.0 / 3));
  CHECK(weighted[1] == doctest::Approx(1.0 / 3));
  CHECK_THROWS_WITH(mu_pmf(std::span<const Point>{}, Point{0}, 1), "empty support");
  CHECK_THROWS_WITH(mu_sample_index(std::span<const Point>{}, Point{0}, 1, 0.5), "empty support");
}

TEST_CASE("mu sampling inverts the cumulative law") {
  const std::vector<Point> support{Point{-1}, Point{2}};
  CHECK(mu_sample_index(support, Point{0}, 1, 0.0) == 0);
  CHECK(mu_sample_index(support, Point{0}, 1, 0.66) == 0);
  CHECK(mu_sample_index(support, Point{0}, 1, 0.67) == 1);
  CHECK(mu_sample_index(support, Point{0}, 1, 0.999999) == 1);
  CHECK(mu_sample_index(support, kAnchorAtInfinity, 1, 0.49) == 0);
  CHECK(mu_sample_index(support, kAnchorAtInfinity, 1, 0.51) == 1);
}

TEST_CASE("far anchors do not underflow") {
  std::vector<Point> support;
  for (int i = 0; i < 5; ++i) support.push_back(Point{1000000 + i, 0, 0});
  const auto p = mu_pmf(support, Point{0, 0, 0}, 40);
  double sum = 0;
  for (double x : p) {
    CHECK(std::isfinite(x));
    sum += x;
  }
  CHECK(sum == doctest::Approx(1.0));
}

TEST_CASE("step preconditions") {
  RngStream rng(1, 0);
  CHECK_THROWS_WITH(cat_step(Configuration{Point{0}}, ModelParams{1, 1, 1}, rng),
                    "state below minimum size");
  CHECK_THROWS_WITH(cat_step(e1_segment(3, 1, 2), ModelParams{3, 2, 4}, rng),
                    "state below minimum size");
  CHECK_THROWS_AS(cat_step(e1_segment(2, 1, 3), ModelParams{3, 1, 4}, rng), ValidationError);
}

TEST_CASE("a.m.l.g. decided exactly") {
  CHECK(amlg_holds(0, 1, 1));
  CHECK(amlg_holds(4, 9, 1));       // 2 -> 3
  CHECK_FALSE(amlg_holds(4, 10, 1));  // 2 -> sqrt(10)
  CHECK(amlg_holds(2, 8, 1) == (std::sqrt(8.0) <= std::sqrt(2.0) + 1));
  CHECK(amlg_holds(100, 9, 2));
  CHECK(amlg_holds(10000, 10404, 2));
  CHECK_FALSE(amlg_holds(10000, 10405, 2));
}

TEST_CASE("steps conserve mass, respect a.m.l.g. and keep the trace consistent") {
  std::mt19937_64 gen(3);
  for (int rep = 0; rep < 60; ++rep) {
    const ModelParams params{1 + rep % 3, 1 + rep % 3, rep % 2 ? 4.0 : 1.5};
    const std::size_t n = static_cast<std::size_t>(params.m) + 1 + rep % 4;
    Configuration c = testing_util::random_configuration(gen, params.d, n, 6);
    RngStream rng(rep, 0);
    for (int t = 0; t < 200; ++t) {
      const auto step = cat_step(c, params, rng, StepChecks::kFull);
      CHECK(step.next.size() == c.size());
      CHECK(amlg_holds(diameter_sq(c), diameter_sq(step.next), params.m));
      REQUIRE(step.trace.activated.size() == static_cast<std::size_t>(params.m));
      REQUIRE(step.trace.transported.size() == static_cast<std::size_t>(params.m));
      // Replaying the trace by hand reproduces the next state.
      Configuration replay = c;
      for (const auto& x : step.trace.activated) CHECK(replay.erase(x));
      for (const auto& y : step.trace.transported) {
        CHECK(boundary(replay).contains(y));
        replay.insert(y);
      }
      CHECK(replay == step.next);
      CHECK(step.trace.sequence().size() == 2 * static_cast<std::size_t>(params.m));
      c = step.next;
    }
  }
}

TEST_CASE("steps are deterministic given the draws") {
  const ModelParams params{3, 2, 4};
  const auto c = e1_segment(3, 1, 5);
  RngStream a(9, 4), b(9, 4);
  for (int t = 0; t < 50; ++t) {
    const auto sa = cat_step(c, params, a);
    const auto sb = cat_step(c, params, b);
    CHECK(sa.next == sb.next);
    CHECK(sa.trace == sb.trace);
  }
  const StepDraws draws({9, 4}, 17);
  CHECK(cat_step(c, params, draws).trace == cat_step(c, params, draws, StepChecks::kFull).trace);
}

namespace {

// Empirical next-state law against the brute-force oracle.
double sampler_tv(const Configuration& c, const ModelParams& params, int samples,
                  std::uint64_t seed) {
  const auto exact = oracle::one_step_law(to_set(c), params.m, params.beta);
  std::map<oracle::Set, double> truth;
  for (const auto& [s, p] : exact) truth[s] = static_cast<double>(p);
  std::map<oracle::Set, long> counts;
  RngStream rng(seed, 0);
  for (int i = 0; i < samples; ++i) ++counts[to_set(cat_step(c, params, rng).next)];
  return total_variation(truth, normalise(counts));
}

}  // namespace

TEST_CASE("sampler matches the brute-force law on small configurations") {
  const int samples = 1000000;
  CHECK(sampler_tv(Configuration{Point{0}, Point{1}}, {1, 1, 1}, samples, 1) < 0.005);
  CHECK(sampler_tv(e1_segment(2, 0, 2), {2, 1, 3}, samples, 2) < 0.005);
  CHECK(sampler_tv(Configuration{Point{0, 0}, Point{1, 0}, Point{0, 1}}, {2, 1, 2}, samples, 3) <
        0.005);
  CHECK(sampler_tv(e1_segment(3, 0, 1), {3, 1, 4}, samples, 4) < 0.005);
  CHECK(sampler_tv(e1_segment(1, 0, 2), {1, 2, 4}, samples, 5) < 0.005);
}

TEST_CASE("trajectory recording") {
  const ModelParams params{2, 1, 3};
  RecordOptions options;
  options.snapshot_stride = 10;
  options.traces = true;
  options.persist_radius = 2;
  RngStream rng(5, 0);
  std::uint64_t seen = 0;
  const Observer count = [&](const StepContext& ctx) {
    CHECK(ctx.t == ++seen);
    CHECK(ctx.prev.size() == ctx.next.size());
  };
  const auto c0 = e1_segment(2, 1, 3);
  const auto rec = cat_run(c0, params, 35, rng, options, std::span<const Observer>(&count, 1));
  CHECK(seen == 35);
  CHECK(rec.rows.size() == 36);
  CHECK(rec.traces.size() == 35);
  CHECK(rec.snapshots.size() == 4);
  CHECK(rec.snapshots.back().t == 30);
  CHECK(rec.initial == c0);
  CHECK(rec.rows[0].diameter_sq == 4);
  CHECK(rec.rows[0].has(kEventNoSmallComp));
  CHECK(rec.rows[0].has(kEventCanPersist));
  CHECK_FALSE(rec.rows[0].has(kEventDepleteSmallComps));
  // Traces replay to the final state.
  Configuration state = c0;
  for (const auto& tr : rec.traces) {
    for (const auto& x : tr.activated) state.erase(x);
    for (const auto& y : tr.transported) state.insert(y);
  }
  CHECK(state == rec.final_state);
  RngStream again(5, 0);
  CHECK(cat_run(c0, params, 35, again, options) == rec);
}
