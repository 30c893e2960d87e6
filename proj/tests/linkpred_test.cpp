#include <gtest/gtest.h>

#include <set>

#include "test_support.hpp"

namespace sine {
namespace {

// Pairwise definition: fraction of (positive, negative) pairs ordered correctly.
double brute_force_auc(const std::vector<double>& s, const std::vector<int>& y) {
  double hits = 0;
  std::size_t total = 0;
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < s.size(); ++b) {
      if (y[a] != 1 || y[b] != 0) continue;
      ++total;
      hits += s[a] > s[b] ? 1.0 : s[a] == s[b] ? 0.5 : 0.0;
    }
  return hits / static_cast<double>(total);
}

TemporalNetwork from_static(const StaticNetwork& g) {
  std::vector<Contact> cs;
  Timestamp t = 0;
  for (const auto& [a, b] : g.edges()) cs.push_back({a, b, t++ % 7});
  return TemporalNetwork::with_numeric_labels(g.num_nodes(), cs);
}

TEST(MakeSplit, Invariants) {
  const auto tn = testing::planted_partition_temporal(80, 0.2, 0.02, 3, 100);
  const auto full = aggregate(tn);
  const auto split = make_split(tn, 17);
  const std::size_t p = full.num_edges();
  EXPECT_EQ(split.train_static.num_edges(), p * 3 / 4);
  EXPECT_EQ(split.train_temporal.num_nodes(), tn.num_nodes());

  const auto pos = split.positives();
  EXPECT_EQ(pos.size(), p - p * 3 / 4);
  EXPECT_EQ(split.test_pairs.size(), 2 * pos.size());
  std::set<std::pair<NodeId, NodeId>> seen;
  for (std::size_t k = 0; k < split.test_pairs.size(); ++k) {
    const auto& tp = split.test_pairs[k];
    EXPECT_EQ(tp.label, k < pos.size() ? 1 : 0);
    EXPECT_LT(tp.i, tp.j);
    EXPECT_TRUE(seen.insert({tp.i, tp.j}).second);
    EXPECT_FALSE(split.train_static.has_edge(tp.i, tp.j));
    EXPECT_EQ(full.has_edge(tp.i, tp.j), tp.label == 1);
  }
  // every contact of a training pair survives
  std::size_t kept = 0;
  for (const auto& c : tn.contacts()) kept += split.train_static.has_edge(c.u, c.v);
  EXPECT_EQ(split.train_temporal.contacts().size(), kept);
}

TEST(MakeSplit, FourPairToy) {
  const auto tn = TemporalNetwork::with_numeric_labels(
      5, {{0, 1, 0}, {1, 2, 1}, {2, 3, 2}, {3, 4, 3}, {0, 1, 5}});
  const auto split = make_split(tn, 3);
  EXPECT_EQ(split.train_static.num_edges(), 3u);
  ASSERT_EQ(split.test_pairs.size(), 2u);
  EXPECT_EQ(split.test_pairs[0].label, 1);
  EXPECT_EQ(split.test_pairs[1].label, 0);
}

TEST(MakeSplit, SeedsControlTheSplit) {
  const auto tn = testing::planted_partition_temporal(60, 0.2, 0.05, 4, 100);
  EXPECT_EQ(make_split(tn, 1).test_pairs, make_split(tn, 1).test_pairs);
  EXPECT_NE(make_split(tn, 1).test_pairs, make_split(tn, 2).test_pairs);
}

TEST(MakeSplit, DenseOrTinyNetworksAreErrors) {
  EXPECT_THROW(make_split(from_static(testing::complete_graph(6)), 1), InsufficientNegativesError);
  EXPECT_THROW(make_split(TemporalNetwork::with_numeric_labels(3, {{0, 1, 0}}), 1), DomainError);
}

TEST(ScoreDot, InnerProducts) {
  Matrix u(2, 3);
  u(0, 0) = 1;
  u(1, 1) = 1;
  u(0, 2) = 1;
  const std::vector<TestPair> pairs{{0, 1, 1}, {0, 2, 0}};
  EXPECT_EQ(score_dot(u, pairs), (std::vector<double>{0.0, 1.0}));

  Rng rng(1);
  std::normal_distribution<double> z;
  Matrix r(5, 8);
  for (double& x : r.data()) x = z(rng);
  std::vector<TestPair> all;
  for (NodeId a = 0; a < 8; ++a)
    for (NodeId b = 0; b < 8; ++b) all.push_back({a, b, 0});
  const auto s = score_dot(r, all);
  for (std::size_t k = 0; k < all.size(); ++k) {
    double g = 0;  // (U^T U)_ab
    for (int d = 0; d < 5; ++d) g += r(d, all[k].i) * r(d, all[k].j);
    EXPECT_NEAR(s[k], g, 1e-12);
  }
}

TEST(Auc, WorkedExample) {
  const std::vector<double> s{0.9, 0.4, 0.6, 0.1};
  const std::vector<int> y{1, 1, 0, 0};
  EXPECT_DOUBLE_EQ(auc(s, y), 0.75);
}

TEST(Auc, TiesAndExtremes) {
  EXPECT_DOUBLE_EQ(auc(std::vector<double>(6, 2.0), std::vector<int>{1, 0, 1, 0, 1, 0}), 0.5);
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{3, 4, 1, 2}, std::vector<int>{1, 1, 0, 0}), 1.0);
  EXPECT_DOUBLE_EQ(auc(std::vector<double>{1, 2, 3, 4}, std::vector<int>{1, 1, 0, 0}), 0.0);
}

TEST(Auc, MatchesPairwiseDefinitionWithTies) {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + uniform_index(rng, 40);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t k = 0; k < n; ++k) {
      s[k] = static_cast<double>(uniform_index(rng, 6));  // coarse values force ties
      y[k] = bernoulli(rng, 0.5);
    }
    y[0] = 1;
    y[1] = 0;
    EXPECT_NEAR(auc(s, y), brute_force_auc(s, y), 1e-12);
    std::vector<double> neg(s), mono(s);
    for (std::size_t k = 0; k < n; ++k) {
      neg[k] = -s[k];
      mono[k] = std::exp(0.3 * s[k]) - 7;
    }
    EXPECT_NEAR(auc(s, y) + auc(neg, y), 1.0, 1e-12);
    EXPECT_NEAR(auc(mono, y), auc(s, y), 1e-12);
  }
}

TEST(Auc, SingleClassIsError) {
  EXPECT_THROW(auc(std::vector<double>{1, 2}, std::vector<int>{1, 1}), DomainError);
  EXPECT_THROW(auc(std::vector<double>{1, 2}, std::vector<int>{0, 0}), DomainError);
  EXPECT_THROW(auc(std::vector<double>{1}, std::vector<int>{1, 0}), DomainError);
}

TEST(Histogram, ConservesCountsAndSeparates) {
  Matrix u(1, 6);
  for (NodeId i = 0; i < 6; ++i) u(0, i) = i < 3 ? 1.0 : -1.0;
  // positives within a block (dot 1), negatives across (dot -1)
  const std::vector<TestPair> pairs{{0, 1, 1}, {1, 2, 1}, {3, 4, 1}, {0, 3, 0}, {1, 4, 0}, {2, 5, 0}};
  const auto h = dot_product_histogram(u, pairs, 10);
  ASSERT_EQ(h.edges.size(), 11u);
  EXPECT_EQ(std::accumulate(h.positive.begin(), h.positive.end(), 0ull), 3ull);
  EXPECT_EQ(std::accumulate(h.negative.begin(), h.negative.end(), 0ull), 3ull);
  EXPECT_EQ(h.positive.back(), 3u);
  EXPECT_EQ(h.negative.front(), 3u);

  const auto flat = dot_product_histogram(Matrix(1, 6), pairs, 4);
  EXPECT_EQ(flat.positive, flat.negative);
  EXPECT_THROW(dot_product_histogram(u, pairs, 1), DomainError);
}

TEST(SampledNetwork, LinksEveryEmittedPair) {
  TrajectoryCorpus corpus;
  corpus.append({0, 1, 2});
  const auto g = sampled_network(PairView(corpus, 2), 4);
  EXPECT_EQ(g.edges(), (std::vector<std::pair<NodeId, NodeId>>{{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_EQ(g.degree(3), 0u);
  EXPECT_EQ(sampled_network(PairView(TrajectoryCorpus{}, 2), 4).num_edges(), 0u);

  const auto cdf = cumulative_degree_distribution(g);
  using Point = std::pair<std::size_t, double>;
  EXPECT_EQ(cdf, (std::vector<Point>{{0, 1.0}, {2, 0.75}}));
}

TEST(Pearson, KnownValues) {
  const std::vector<double> x{1, 2, 3, 4, 5}, lin{3, 5, 7, 9, 11};
  EXPECT_NEAR(pearson(x, lin), 1.0, 1e-12);
  // deviations (-1,0,1) and (-5/3,1/3,4/3): r = 3 / sqrt(2 * 42/9)
  EXPECT_NEAR(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 5}),
              3.0 / std::sqrt(84.0 / 9.0), 1e-12);
  EXPECT_NEAR(3.0 / std::sqrt(84.0 / 9.0), 0.9820, 5e-5);
  EXPECT_THROW(pearson(x, std::vector<double>(5, 1.0)), DomainError);
}

TEST(Pearson, IndependentSamplesNearZero) {
  Rng rng(3);
  std::normal_distribution<double> z;
  std::vector<double> a(10000), b(10000);
  for (auto& v : a) v = z(rng);
  for (auto& v : b) v = z(rng);
  EXPECT_LT(std::abs(pearson(a, b)), 0.05);
}

TEST(LPathScore, TwoPathsAreCommonNeighbours) {
  const auto g = testing::erdos_renyi(30, 0.2, 5);
  std::vector<TestPair> pairs;
  for (NodeId a = 0; a < 30; ++a)
    for (NodeId b = a + 1; b < 30; ++b) pairs.push_back({a, b, 0});
  const auto s = score_lpath(g, pairs, 2);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    std::vector<NodeId> common;
    std::ranges::set_intersection(g.neighbors(pairs[k].i), g.neighbors(pairs[k].j),
                                  std::back_inserter(common));
    EXPECT_EQ(s[k], static_cast<double>(common.size()));
  }
}

}  // namespace
}  // namespace sine
