#include <gtest/gtest.h>

#include <map>

#include "test_support.hpp"

namespace sine {
namespace {

// Greedy check that a path can be realised by contacts with strictly increasing times.
bool time_respecting(const TemporalNetwork& tn, const Path& p) {
  Timestamp t = -1;
  for (std::size_t k = 1; k < p.size(); ++k) {
    Timestamp next = -1;
    for (const auto& c : tn.contacts_of(p[k - 1]))
      if (c.other == p[k] && c.t > t) {
        next = c.t;
        break;
      }
    if (next < 0) return false;
    t = next;
  }
  return true;
}

TEST(DeepWalk, FirstStepOnCycleIsUniform) {
  const auto g = testing::cycle_graph(4);
  Rng rng(1);
  int to_one = 0;
  constexpr int kWalks = 20000;
  for (int k = 0; k < kWalks; ++k) {
    const auto p = detail::uniform_walk(g, 0, 2, rng);
    ASSERT_TRUE(p[1] == 1 || p[1] == 3);
    to_one += p[1] == 1;
  }
  EXPECT_NEAR(static_cast<double>(to_one) / kWalks, 0.5, 0.015);
}

TEST(DeepWalk, IsolatedStartStops) {
  const StaticNetwork g(3, {{0, 1}});
  Rng rng(1);
  EXPECT_EQ(detail::uniform_walk(g, 2, 20, rng), Path{2});
}

TEST(DeepWalk, StepsOnTriangleAreUniform) {
  const auto g = testing::complete_graph(3);
  Rng rng(3);
  std::map<std::pair<NodeId, NodeId>, double> counts;
  const auto p = detail::uniform_walk(g, 0, 10001, rng);
  for (std::size_t k = 1; k < p.size(); ++k) counts[{p[k - 1], p[k]}] += 1;
  for (NodeId from = 0; from < 3; ++from) {
    std::vector<double> obs;
    for (NodeId to = 0; to < 3; ++to)
      if (to != from) obs.push_back(counts[{from, to}]);
    EXPECT_GT(testing::chi_squared_p(obs, {0.5, 0.5}), 0.01);
  }
}

TEST(DeepWalk, CorpusBudgetAndEdges) {
  const auto g = testing::erdos_renyi(50, 0.1, 4);
  WalkConfig cfg;
  cfg.budget_multiplier = 7;
  cfg.rng_seed = 5;
  const auto c = deepwalk_corpus(g, cfg);
  EXPECT_GE(c.total_length, 350u);
  EXPECT_LT(c.total_length, 350u + 20u);
  for (const auto& p : c.paths)
    for (std::size_t k = 1; k < p.size(); ++k) EXPECT_TRUE(g.has_edge(p[k - 1], p[k]));
  EXPECT_EQ(c, deepwalk_corpus(g, cfg));
}

TEST(Node2Vec, UnitParametersReduceToUniformSteps) {
  const auto g = testing::erdos_renyi(12, 0.5, 6);
  WalkConfig cfg;
  cfg.walk_length = 3;
  Rng rng(7);
  // second-step distribution out of every (prev, cur) state
  std::map<std::pair<NodeId, NodeId>, std::map<NodeId, double>> counts;
  for (int k = 0; k < 60000; ++k) {
    const auto p = detail::node2vec_walk(g, uniform_index(rng, 12), cfg, rng);
    if (p.size() == 3) counts[{p[0], p[1]}][p[2]] += 1;
  }
  int tested = 0;
  for (const auto& [state, next] : counts) {
    const auto nb = g.neighbors(state.second);
    std::vector<NodeId> keys(nb.begin(), nb.end());
    double total = 0;
    for (const auto& [_, c] : next) total += c;
    if (total < 200) continue;
    ++tested;
    EXPECT_GT(testing::chi_squared_p(testing::frequencies(next, keys),
                                     std::vector<double>(keys.size(), 1.0 / keys.size())),
              0.001);
  }
  EXPECT_GT(tested, 10);
}

TEST(Node2Vec, TriangleWithPendantTransitionTable) {
  // triangle 0-1-2 with pendant 3 on node 2; state prev=0, cur=2
  const StaticNetwork g(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}});
  WalkConfig cfg;
  cfg.walk_length = 3;
  cfg.p = 0.5;
  cfg.q = 2.0;
  // weights: back to 0 -> 1/p = 2; to 1 (adjacent to 0) -> 1; to 3 -> 1/q = 0.5
  const std::vector<double> expected{2.0 / 3.5, 1.0 / 3.5, 0.5 / 3.5};
  EXPECT_DOUBLE_EQ(detail::node2vec_weight(g, 0, 0, cfg.p, cfg.q), 2.0);
  EXPECT_DOUBLE_EQ(detail::node2vec_weight(g, 0, 1, cfg.p, cfg.q), 1.0);
  EXPECT_DOUBLE_EQ(detail::node2vec_weight(g, 0, 3, cfg.p, cfg.q), 0.5);
  Rng rng(8);
  std::map<NodeId, double> counts;
  int samples = 0;
  while (samples < 20000) {
    const auto p = detail::node2vec_walk(g, 0, cfg, rng);
    if (p[1] != 2) continue;
    counts[p[2]] += 1;
    ++samples;
  }
  EXPECT_GT(testing::chi_squared_p(testing::frequencies(counts, std::vector<NodeId>{0, 1, 3}), expected), 0.01);
  EXPECT_NEAR(counts[0] / samples, expected[0], 0.015);
}

TEST(Node2Vec, HugeQOscillatesOnPath) {
  const auto g = testing::path_graph(7);
  WalkConfig cfg;
  cfg.walk_length = 200;
  cfg.q = 1e6;
  Rng rng(9);
  int forward = 0, total = 0;
  for (int k = 0; k < 50; ++k) {
    const auto p = detail::node2vec_walk(g, 3, cfg, rng);
    for (std::size_t s = 2; s < p.size(); ++s) {
      ++total;
      forward += p[s] != p[s - 2];
    }
  }
  // return probability (1/p) / (1/p + 1/q) = 1 - 1e-6 at interior nodes
  EXPECT_LE(forward, 1);
  EXPECT_GT(total, 9000);
}

TEST(Node2Vec, CorpusBudget) {
  const auto g = testing::erdos_renyi(40, 0.15, 10);
  WalkConfig cfg;
  cfg.budget_multiplier = 3;
  cfg.p = 0.25;
  cfg.q = 4;
  const auto c = node2vec_corpus(g, cfg);
  EXPECT_GE(c.total_length, 120u);
  EXPECT_LT(c.total_length, 140u);
  for (const auto& p : c.paths)
    for (std::size_t k = 1; k < p.size(); ++k) EXPECT_TRUE(g.has_edge(p[k - 1], p[k]));
}

TEST(Ctdne, SuccessorFromLaterContacts) {
  const auto tn = TemporalNetwork::with_numeric_labels(4, {{0, 1, 1}, {1, 2, 2}, {1, 3, 2}});
  Rng rng(1);
  std::vector<double> w;
  int twos = 0;
  constexpr int kDraws = 20000;
  for (int k = 0; k < kDraws; ++k) {
    const auto* c = detail::ctdne_step(tn, 1, 1, TemporalBias::Uniform, rng, w);
    ASSERT_NE(c, nullptr);
    ASSERT_TRUE(c->other == 2 || c->other == 3);
    twos += c->other == 2;
  }
  EXPECT_NEAR(static_cast<double>(twos) / kDraws, 0.5, 0.015);
  // nothing strictly after t = 2
  EXPECT_EQ(detail::ctdne_step(tn, 1, 2, TemporalBias::Uniform, rng, w), nullptr);
}

TEST(Ctdne, SingleContactWalks) {
  const auto tn = TemporalNetwork::with_numeric_labels(2, {{0, 1, 5}});
  WalkConfig cfg;
  cfg.budget_multiplier = 50;
  const auto c = ctdne_corpus(tn, cfg);
  int forward = 0;
  for (const auto& p : c.paths) {
    ASSERT_EQ(p.size(), 2u);
    ASSERT_TRUE(p == (Path{0, 1}) || p == (Path{1, 0}));
    forward += p == Path{0, 1};
  }
  EXPECT_GT(forward, 0);
  EXPECT_LT(forward, static_cast<int>(c.paths.size()));
}

TEST(Ctdne, SuccessorMultiset) {
  const auto tn = TemporalNetwork::with_numeric_labels(
      4, {{0, 1, 1}, {1, 2, 3}, {1, 2, 4}, {1, 3, 6}});
  Rng rng(2);
  std::vector<double> w;
  int twos = 0;
  constexpr int kDraws = 100000;
  for (int k = 0; k < kDraws; ++k) twos += detail::ctdne_step(tn, 1, 2, TemporalBias::Uniform, rng, w)->other == 2;
  EXPECT_NEAR(static_cast<double>(twos) / kDraws, 2.0 / 3.0, 0.006);
}

TEST(Ctdne, ExponentialBiasPrefersSoonerContacts) {
  const auto tn = TemporalNetwork::with_numeric_labels(3, {{0, 1, 1}, {1, 2, 100}});
  Rng rng(3);
  std::vector<double> w;
  int sooner = 0;
  for (int k = 0; k < 10000; ++k)
    sooner += detail::ctdne_step(tn, 1, 0, TemporalBias::Exponential, rng, w)->other == 0;
  // weights exp(-1/100) vs exp(-100/100)
  const double expected = std::exp(-0.01) / (std::exp(-0.01) + std::exp(-1.0));
  EXPECT_NEAR(sooner / 10000.0, expected, 0.02);
}

TEST(Ctdne, CorpusWalksAreTimeRespecting) {
  const auto tn = testing::planted_partition_temporal(60, 0.2, 0.05, 5, 300);
  WalkConfig cfg;
  cfg.budget_multiplier = 10;
  cfg.rng_seed = 11;
  const auto c = ctdne_corpus(tn, cfg);
  EXPECT_GE(c.total_length, 600u);
  EXPECT_LT(c.total_length, 620u);
  for (const auto& p : c.paths) {
    EXPECT_GE(p.size(), 2u);
    EXPECT_TRUE(time_respecting(tn, p));
  }
  cfg.temporal_bias = TemporalBias::Exponential;
  for (const auto& p : ctdne_corpus(tn, cfg).paths) EXPECT_TRUE(time_respecting(tn, p));
}

TEST(WalkConfig, Validation) {
  WalkConfig cfg;
  cfg.walk_length = 1;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg.walk_length = 2;
  cfg.p = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
}

}  // namespace
}  // namespace sine
