#include <doctest.h>

#include <map>

#include "catlab/copycat.hpp"
#include "catlab/errors.hpp"
#include "catlab/stats.hpp"
#include "helpers.hpp"

using namespace catlab;
using testing_util::to_set;

namespace {

TupleState two_segments(std::size_t d, int len, int gap) {
  return TupleState(d, {e1_segment(d, 0, len - 1), e1_segment(d, len - 1 + gap, 2 * len - 2 + gap)});
}

}  // namespace

TEST_CASE("tuple basics") {
  const auto s = two_segments(2, 2, 5);
  CHECK(s.size() == 2);
  CHECK(s.total_size() == 4);
  CHECK(s.merged().size() == 4);
  CHECK(s.others(0) == s[1]);
  CHECK(s.pairwise_disjoint());
  CHECK_FALSE(TupleState(1, {e1_segment(1, 0, 1), e1_segment(1, 1, 2)}).pairwise_disjoint());
  CHECK_THROWS_AS(TupleState(2, {e1_segment(3, 0, 1)}), ValidationError);
  CHECK_THROWS_AS(validate_tuple(TupleState(1), 1), ValidationError);
  CHECK_THROWS_AS(validate_tuple(TupleState(1, {e1_segment(1, 0, 1)}), 2), ValidationError);
}

TEST_CASE("separation") {
  CHECK(*sep_sq(two_segments(3, 2, 8)) == 64);
  CHECK(sep(two_segments(3, 2, 8)) == doctest::Approx(8.0));
  CHECK(std::isinf(sep(TupleState(1, {e1_segment(1, 0, 2)}))));
  const TupleState three(2, {e1_segment(2, 0, 1), e1_segment(2, 10, 11), e1_segment(2, 14, 15)});
  CHECK(*sep_sq(three) == 9);
}

TEST_CASE("Tup_{a,b} membership") {
  const auto s = two_segments(3, 2, 8);  // sep 8, each diameter 1
  CHECK(in_tup_ab(s, 8, 1));
  CHECK_FALSE(in_tup_ab(s, 9, 1));
  // diam 1 <= b ln 8 needs b >= 1/ln 8.
  CHECK(in_tup_ab(s, 1, 1.0 / std::log(8.0) + 1e-9));
  CHECK_FALSE(in_tup_ab(s, 1, 1.0 / std::log(8.0) - 1e-9));
  CHECK_THROWS_AS(in_tup_ab(s, 0, 1), ValidationError);
  CHECK_THROWS_AS(in_tup_ab(s, 1, -1), ValidationError);
}

TEST_CASE("lift and recolour by slot") {
  const Configuration c{Point{0}, Point{1}, Point{5}, Point{6}};
  const auto lifted = lift_partition(c, {Configuration{Point{0}, Point{1}}, Configuration{Point{5}, Point{6}}}, 1);
  CHECK_THROWS_AS(lift_partition(c, {Configuration{Point{0}, Point{1}}}, 1), ValidationError);
  CHECK_THROWS_AS(lift_partition(c, {Configuration{Point{0}, Point{1}, Point{5}}, Configuration{Point{5}, Point{6}}}, 1),
                  ValidationError);
  // Activating 0 and transporting to 7 moves the colour of 0 to 7.
  const auto next = recolour(lifted, StepTrace{{Point{0}}, {Point{7}}});
  CHECK(next[0] == Configuration{Point{1}, Point{7}});
  CHECK(next[1] == Configuration{Point{5}, Point{6}});
  CHECK_THROWS_AS(recolour(lifted, StepTrace{{Point{9}}, {Point{7}}}), InvariantViolation);
}

TEST_CASE("cluster choice is size-biased") {
  const TupleState s(1, {e1_segment(1, 0, 0), e1_segment(1, 10, 12)});
  CHECK(choose_cluster(s, 0.0) == 0);
  CHECK(choose_cluster(s, 0.249) == 0);
  CHECK(choose_cluster(s, 0.251) == 1);
  CHECK(choose_cluster(s, 0.999) == 1);
}

TEST_CASE("lifted law marginalises to the CAT law of the union") {
  const ModelParams params{2, 1, 4};
  const auto s = two_segments(2, 2, 3);
  const auto lifted = enumerate_lifted_step_exact(s, params);
  std::map<Configuration, Rational> merged;
  for (const auto& [t, p] : lifted) merged[t.merged()] += p;
  const auto cat = enumerate_step_distribution_exact(s.merged(), params);
  CHECK(merged == cat.by_state);
}

TEST_CASE("copycat law is the size-biased mixture of per-cluster CAT laws") {
  const ModelParams params{2, 1, 2};
  const TupleState s(2, {e1_segment(2, 0, 1), e1_segment(2, 4, 6)});
  const auto copy = enumerate_copycat_step_exact(s, params);
  Rational total = 0;
  for (const auto& [t, p] : copy) total += p;
  CHECK(total == 1);
  // Oracle: cluster i with weight |D^i|/5, then its own CAT law.
  std::map<TupleState, long double> expect;
  for (std::size_t i = 0; i < 2; ++i) {
    const long double w = static_cast<long double>(s[i].size()) / 5;
    for (const auto& [next, p] : oracle::one_step_law(to_set(s[i]), params.m, params.beta)) {
      TupleState t = s;
      t[i] = testing_util::from_set(2, next);
      expect[t] += w * p;
    }
  }
  REQUIRE(expect.size() == copy.size());
  for (const auto& [t, p] : copy) CHECK(p.get_d() == doctest::Approx(static_cast<double>(expect.at(t))));
}

TEST_CASE("copycat sampling matches its law") {
  const ModelParams params{1, 1, 2};
  const TupleState s(1, {e1_segment(1, 0, 1), e1_segment(1, 10, 12)});
  std::map<TupleState, double> truth;
  for (const auto& [t, p] : enumerate_copycat_step(s, params)) truth[t] = static_cast<double>(p);
  std::map<TupleState, long> counts;
  RngStream rng(3, 0);
  for (int i = 0; i < 400000; ++i) ++counts[copycat_step(s, params, rng).next];
  CHECK(total_variation(truth, normalise(counts)) < 0.01);
}

TEST_CASE("single-cluster moves and approximation TV") {
  const auto s = two_segments(1, 2, 4);
  CHECK(is_single_cluster_move(s, s));
  TupleState one = s;
  one[0] = e1_segment(1, 1, 2);
  CHECK(is_single_cluster_move(s, one));
  TupleState both = one;
  both[1] = e1_segment(1, 6, 7);
  CHECK_FALSE(is_single_cluster_move(s, both));
  const auto tv = copycat_approximation_tv(two_segments(3, 2, 4), {3, 1, 4});
  CHECK(tv > 0);
  CHECK(tv < 0.5);
}

TEST_CASE("tuple text round-trip") {
  const auto s = two_segments(2, 3, 7);
  CHECK(parse_tuple(format_tuple(s)) == s);
  CHECK_THROWS_AS(parse_tuple("clusters=2\nd=1\n0\n1\n"), ValidationError);
  CHECK_THROWS_AS(parse_tuple("d=1\n0\n"), ValidationError);
}
