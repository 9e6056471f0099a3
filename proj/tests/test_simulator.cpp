#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "choicerank/errors.hpp"
#include "choicerank/rng.hpp"
#include "choicerank/simulator.hpp"
#include "support/instances.hpp"

using namespace choicerank;

namespace {

std::uint64_t count_of(const EdgeCounts& c, NodeId s, NodeId d) {
  for (const auto& e : c.entries())
    if (e.src == s && e.dst == d) return e.count;
  ADD_FAILURE() << "no edge " << s << "->" << d;
  return 0;
}

TrajectorySpec fixed_length(std::size_t k, std::size_t len, std::uint64_t seed) {
  TrajectorySpec s;
  s.num_trajectories = k;
  s.length = len;
  s.seed = seed;
  return s;
}

}  // namespace

TEST(Rng, ReferenceSequence) {
  // std::mt19937_64 is pinned by the standard: 10000th output for seed 5489.
  Rng r(5489);
  std::uint64_t v = 0;
  for (int k = 0; k < 10000; ++k) v = r.next();
  EXPECT_EQ(v, 9981545732273789042ULL);
  // SplitMix64 of 0 (first output of the generator seeded with 0)
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(Rng, UniformAndBelowRanges) {
  Rng r(1);
  std::vector<int> hist(7, 0);
  for (int k = 0; k < 70000; ++k) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ++hist[r.below(7)];
  }
  for (int h : hist) EXPECT_NEAR(h, 10000, 5 * std::sqrt(10000 * 6.0 / 7.0));
}

TEST(Rng, NormalMoments) {
  Rng r(2);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 5 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 5 * std::sqrt(2.0 / n));
}

TEST(Simulate, CycleIsDeterministic) {
  const DirectedGraph g(3, {0, 1, 2}, {1, 2, 0});
  auto spec = fixed_length(1, 10, 99);
  spec.start = StartRule::at(0);
  const auto c = sample_trajectories(g, StrengthVector({1, 5, 0.1}), spec);
  EXPECT_EQ(count_of(c, 0, 1), 4u);
  EXPECT_EQ(count_of(c, 1, 2), 3u);
  EXPECT_EQ(count_of(c, 2, 0), 3u);
  EXPECT_EQ(c.total(), 10u);
}

TEST(Simulate, TwoCycleWithSelfLoopsIsFair) {
  const DirectedGraph g(2, {0, 0, 1, 1}, {0, 1, 0, 1});
  const auto c = sample_trajectories(g, StrengthVector::constant(2, 3.0), fixed_length(10, 20000, 4));
  const auto p = empirical_transitions(c);
  for (NodeId i = 0; i < 2; ++i) {
    const double n = static_cast<double>(count_of(c, i, 0) + count_of(c, i, 1));
    const double sigma = std::sqrt(0.25 / n);
    for (const auto& tr : p.row(i)) EXPECT_NEAR(tr.p, 0.5, 3 * sigma);
  }
}

TEST(Simulate, StarOneHopBinomialBand) {
  const DirectedGraph g(3, {0, 0}, {1, 2});
  auto spec = fixed_length(100000, 1, 17);
  spec.start = StartRule::at(0);
  const auto c = sample_trajectories(g, StrengthVector({1.0, 4.0 / 3.0, 2.0 / 3.0}), spec);
  const double n = 100000;
  const double p = 2.0 / 3.0;
  const double sigma = std::sqrt(p * (1 - p) / n);
  EXPECT_NEAR(static_cast<double>(count_of(c, 0, 1)) / n, p, 3 * sigma);
  EXPECT_EQ(c.total(), 100000u);
}

TEST(Simulate, WeightsEnterProbabilities) {
  const std::vector<Edge> edges{{0, 1, 3.0}, {0, 2, 1.0}};
  const DirectedGraph g(3, edges, true);
  auto spec = fixed_length(50000, 1, 3);
  spec.start = StartRule::at(0);
  const auto c = sample_trajectories(g, StrengthVector::constant(3, 1.0), spec);
  const double sigma = std::sqrt(0.75 * 0.25 / 50000);
  EXPECT_NEAR(count_of(c, 0, 1) / 50000.0, 0.75, 3 * sigma);
}

TEST(Simulate, SeededDeterminismAndThreadIndependence) {
  std::mt19937_64 rng(1);
  const auto g = testing_support::random_graph(40, 5, rng);
  const StrengthVector lam(testing_support::random_lambda(40, rng));
  const auto spec = fixed_length(300, 50, 1234);
  const auto a = sample_trajectories(g, lam, spec);
  const auto b = sample_trajectories(g, lam, spec);
  const auto c = sample_trajectories(g, lam, spec, 4);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  auto other = spec;
  other.seed = 1235;
  EXPECT_NE(a, sample_trajectories(g, lam, other));
}

TEST(Simulate, EveryEdgeListedEvenWithZeroCount) {
  const DirectedGraph g(3, {0, 0, 1, 2}, {1, 2, 0, 0});
  auto spec = fixed_length(1, 1, 5);
  spec.start = StartRule::at(1);
  const auto c = sample_trajectories(g, StrengthVector::constant(3, 1.0), spec);
  EXPECT_EQ(c.entries().size(), 4u);
  EXPECT_EQ(c.total(), 1u);
}

TEST(Simulate, FlowNearConservation) {
  std::mt19937_64 rng(2);
  const auto g = testing_support::random_graph(30, 4, rng);
  const StrengthVector lam(testing_support::random_lambda(30, rng));
  for (std::size_t k : {1u, 7u}) {
    const auto c = sample_trajectories(g, lam, fixed_length(k, 500, 9));
    const auto t = aggregate_marginals(c);
    double total_out = 0;
    for (std::size_t i = 0; i < 30; ++i) {
      EXPECT_LE(std::abs(t.c_in[i] - t.c_out[i]), static_cast<double>(k));
      total_out += t.c_out[i];
    }
    EXPECT_EQ(total_out, 500.0 * k);
  }
}

TEST(Simulate, SinkIsErrorUnlessEarlyStop) {
  const DirectedGraph g(2, {0}, {1});
  auto spec = fixed_length(1, 5, 1);
  spec.start = StartRule::at(0);
  EXPECT_THROW(sample_trajectories(g, StrengthVector::constant(2, 1), spec), ModelError);
  EXPECT_THROW(sample_trajectories(g, StrengthVector::constant(2, 1), spec, 2), ModelError);
  spec.allow_early_stop = true;
  const auto c = sample_trajectories(g, StrengthVector::constant(2, 1), spec);
  EXPECT_EQ(c.total(), 1u);
}

TEST(Simulate, GeometricLengths) {
  const DirectedGraph g(2, {0, 1}, {1, 0});
  TrajectorySpec spec;
  spec.num_trajectories = 20000;
  spec.stop_probability = 0.2;
  spec.seed = 8;
  const auto c = sample_trajectories(g, StrengthVector::constant(2, 1), spec);
  // hops before stopping ~ Geometric: mean (1-p)/p = 4, variance (1-p)/p^2 = 20
  const double mean = static_cast<double>(c.total()) / 20000;
  EXPECT_NEAR(mean, 4.0, 5 * std::sqrt(20.0 / 20000));
}

TEST(Simulate, StartDistribution) {
  const DirectedGraph g(3, {0, 1, 2}, {1, 2, 0});
  auto spec = fixed_length(1000, 1, 2);
  spec.start = StartRule::from({0.0, 1.0, 0.0});
  const auto c = sample_trajectories(g, StrengthVector::constant(3, 1), spec);
  EXPECT_EQ(count_of(c, 1, 2), 1000u);
}

TEST(Simulate, SpecValidation) {
  TrajectorySpec s;
  EXPECT_THROW(s.validate(3), std::invalid_argument);  // no length law
  s.length = 3;
  s.stop_probability = 0.5;
  EXPECT_THROW(s.validate(3), std::invalid_argument);
  s.length.reset();
  s.stop_probability = 1.0;
  EXPECT_THROW(s.validate(3), std::invalid_argument);
  s.stop_probability = 0.5;
  EXPECT_NO_THROW(s.validate(3));
  s.start = StartRule::from({0.5, 0.4, 0.0});
  EXPECT_THROW(s.validate(3), std::invalid_argument);
  s.start = StartRule::at(3);
  EXPECT_THROW(s.validate(3), std::invalid_argument);
}

TEST(Aggregate, DirectSums) {
  const EdgeCounts c(3, {{0, 1, 7}, {0, 2, 3}});
  const auto t = aggregate_marginals(c);
  EXPECT_EQ(t.c_out, (std::vector<double>{10, 0, 0}));
  EXPECT_EQ(t.c_in, (std::vector<double>{0, 7, 3}));
  const auto z = aggregate_marginals(EdgeCounts(4, {}));
  EXPECT_EQ(z.c_in, std::vector<double>(4, 0.0));
  EXPECT_EQ(z.c_out, std::vector<double>(4, 0.0));
}

TEST(Aggregate, SingleTrajectoryTelescopes) {
  std::mt19937_64 rng(3);
  const auto g = testing_support::random_graph(25, 4, rng);
  const auto c = sample_trajectories(g, StrengthVector::constant(25, 1), fixed_length(1, 777, 3));
  const auto t = aggregate_marginals(c);
  double sum = 0;
  for (std::size_t i = 0; i < 25; ++i) {
    sum += t.c_out[i];
    EXPECT_LE(std::abs(t.c_in[i] - t.c_out[i]), 1.0);
  }
  EXPECT_EQ(sum, 777.0);
}

TEST(Empirical, RowNormalization) {
  const auto p = empirical_transitions(EdgeCounts(4, {{0, 1, 7}, {0, 2, 3}, {1, 3, 5}, {2, 0, 0}}));
  ASSERT_EQ(p.row(0).size(), 2u);
  EXPECT_DOUBLE_EQ(p.row(0)[0].p, 0.7);
  EXPECT_DOUBLE_EQ(p.row(0)[1].p, 0.3);
  EXPECT_DOUBLE_EQ(p.row(1)[0].p, 1.0);
  EXPECT_FALSE(p.has_row(2));
  EXPECT_FALSE(p.has_row(3));
}

TEST(Empirical, ZeroCountEdgeInLiveRowKept) {
  const auto p = empirical_transitions(EdgeCounts(3, {{0, 1, 4}, {0, 2, 0}}));
  ASSERT_EQ(p.row(0).size(), 2u);
  EXPECT_EQ(p.row(0)[1].p, 0.0);
}

TEST(EdgeCountsType, Validation) {
  EXPECT_THROW(EdgeCounts(2, {{0, 2, 1}}), std::invalid_argument);
  EXPECT_THROW(EdgeCounts(2, {{0, 1, 1}, {0, 1, 2}}), std::invalid_argument);
}
