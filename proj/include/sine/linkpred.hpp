#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sine/common.hpp"
#include "sine/graph.hpp"
#include "sine/pairs.hpp"
#include "sine/skipgram.hpp"

namespace sine {

struct TestPair {
  NodeId i;
  NodeId j;
  int label;  // 1 = had contact, 0 = never in contact

  friend bool operator==(const TestPair&, const TestPair&) = default;
};

/// One randomised train/test split.
struct EvalSplit {
  TemporalNetwork train_temporal;
  StaticNetwork train_static;
  std::vector<TestPair> test_pairs;  // positives first, then negatives
  std::uint64_t split_seed = 0;

  std::vector<TestPair> positives() const {
    std::vector<TestPair> out;
    std::ranges::copy_if(test_pairs, std::back_inserter(out),
                         [](const TestPair& p) { return p.label == 1; });
    return out;
  }
};

namespace detail {
inline std::uint64_t pair_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}
}  // namespace detail

/// Holds out 25% of contacted node pairs (all of their contacts) as positives
/// and samples as many never-contacted pairs as negatives. floor(0.75 P) of
/// the P contacted pairs stay in training; isolated nodes are kept.
inline EvalSplit make_split(const TemporalNetwork& tn, std::uint64_t split_seed) {
  const StaticNetwork full = aggregate(tn);
  auto pairs = full.edges();
  const std::size_t n_pairs = pairs.size();
  if (n_pairs < 2) throw DomainError("need at least 2 contacted node pairs to split");

  Rng rng(split_seed);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  const std::size_t n_train = n_pairs * 3 / 4;
  const std::size_t n_pos = n_pairs - n_train;

  std::unordered_set<std::uint64_t> train_keys;
  train_keys.reserve(n_train * 2);
  for (std::size_t k = 0; k < n_train; ++k)
    train_keys.insert(detail::pair_key(pairs[k].first, pairs[k].second));

  std::vector<Contact> kept;
  for (const auto& c : tn.contacts())
    if (train_keys.contains(detail::pair_key(c.u, c.v))) kept.push_back(c);

  EvalSplit split;
  split.split_seed = split_seed;
  split.train_temporal = TemporalNetwork(tn.labels(), std::move(kept));
  split.train_static = aggregate(split.train_temporal);
  for (std::size_t k = n_train; k < n_pairs; ++k)
    split.test_pairs.push_back({pairs[k].first, pairs[k].second, 1});

  const auto n = static_cast<std::uint64_t>(tn.num_nodes());
  const std::uint64_t all_pairs = n * (n - 1) / 2;
  const std::uint64_t free_pairs = all_pairs - n_pairs;
  if (free_pairs < n_pos)
    throw InsufficientNegativesError("network too dense: " + std::to_string(free_pairs) +
                                     " uncontacted pairs for " + std::to_string(n_pos) +
                                     " negatives");

  if (all_pairs <= 4'000'000 || free_pairs < 2 * n_pos) {
    std::vector<std::pair<NodeId, NodeId>> candidates;
    candidates.reserve(free_pairs);
    for (NodeId a = 0; a < tn.num_nodes(); ++a)
      for (NodeId b = a + 1; b < tn.num_nodes(); ++b)
        if (!full.has_edge(a, b)) candidates.emplace_back(a, b);
    for (std::size_t k = 0; k < n_pos; ++k) {
      std::swap(candidates[k], candidates[k + uniform_index(rng, candidates.size() - k)]);
      split.test_pairs.push_back({candidates[k].first, candidates[k].second, 0});
    }
  } else {
    std::unordered_set<std::uint64_t> taken;
    while (split.test_pairs.size() < 2 * n_pos) {
      const auto a = uniform_index(rng, tn.num_nodes());
      const auto b = uniform_index(rng, tn.num_nodes());
      if (a == b || full.has_edge(a, b)) continue;
      if (!taken.insert(detail::pair_key(a, b)).second) continue;
      split.test_pairs.push_back({std::min(a, b), std::max(a, b), 0});
    }
  }
  return split;
}

inline std::vector<double> score_dot(const Matrix& U, std::span<const TestPair> pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(dot(U.col(p.i), U.col(p.j)));
  return out;
}

inline std::vector<double> score_lpath(const StaticNetwork& g, std::span<const TestPair> pairs,
                                       int l) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(static_cast<double>(count_l_paths(g, p.i, p.j, l)));
  return out;
}

/// Mann-Whitney AUC from mid-ranks: the fraction of (positive, negative)
/// pairs ranked correctly, ties counting one half.
inline double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw DomainError("scores and labels differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::ranges::sort(order, [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double pos_rank_sum = 0.0;  // ranks start at 1
  std::size_t n_pos = 0;
  for (std::size_t k = 0; k < n;) {
    std::size_t end = k;
    while (end < n && scores[order[end]] == scores[order[k]]) ++end;
    const double mid = 0.5 * static_cast<double>(k + 1 + end);
    for (std::size_t m = k; m < end; ++m) {
      if (labels[order[m]] == 1) {
        pos_rank_sum += mid;
        ++n_pos;
      }
    }
    k = end;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw DomainError("AUC needs both positive and negative labels");
  const double np = static_cast<double>(n_pos);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * static_cast<double>(n_neg));
}

inline std::vector<int> labels_of(std::span<const TestPair> pairs) {
  std::vector<int> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.label);
  return out;
}

struct Histogram {
  std::vector<double> edges;  // n_bins + 1, shared by both series
  std::vector<std::uint64_t> positive;
  std::vector<std::uint64_t> negative;
};

/// Dot-product histograms of positive and negative test pairs on shared bins.
inline Histogram dot_product_histogram(const Matrix& U, std::span<const TestPair> pairs,
                                       int n_bins) {
  if (n_bins < 2) throw DomainError("need at least 2 bins");
  const auto scores = score_dot(U, pairs);
  Histogram h;
  h.positive.assign(static_cast<std::size_t>(n_bins), 0);
  h.negative.assign(static_cast<std::size_t>(n_bins), 0);
  double lo = 0.0, hi = 0.0;
  if (!scores.empty()) {
    auto [mn, mx] = std::ranges::minmax_element(scores);
    lo = *mn;
    hi = *mx;
  }
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / n_bins;
  for (int b = 0; b <= n_bins; ++b) h.edges.push_back(lo + b * width);
  h.edges.back() = hi;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto bin = static_cast<int>((scores[k] - lo) / width);
    bin = std::clamp(bin, 0, n_bins - 1);
    (pairs[k].label == 1 ? h.positive : h.negative)[bin]++;
  }
  return h;
}

/// Unweighted graph over nodes 0..n-1 linking every emitted (center, context) pair.
template <typename Pairs>
StaticNetwork sampled_network(const Pairs& pairs, NodeId n) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  pairs.for_each([&](NodeId c, NodeId x) { edges.emplace_back(c, x); });
  return StaticNetwork(n, std::move(edges));
}

/// (k, fraction of nodes with degree >= k) for every distinct degree k.
inline std::vector<std::pair<std::size_t, double>> cumulative_degree_distribution(
    const StaticNetwork& g) {
  std::vector<std::size_t> degrees;
  for (NodeId i = 0; i < g.num_nodes(); ++i) degrees.push_back(g.degree(i));
  std::ranges::sort(degrees);
  std::vector<std::pair<std::size_t, double>> out;
  const double n = static_cast<double>(degrees.size());
  for (std::size_t k = 0; k < degrees.size();) {
    out.emplace_back(degrees[k], static_cast<double>(degrees.size() - k) / n);
    std::size_t end = k;
    while (end < degrees.size() && degrees[end] == degrees[k]) ++end;
    k = end;
  }
  return out;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("need two equal-length samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw DomainError("correlation undefined for constant data");
  return sxy / std::sqrt(sxx * syy);
}

/// Pearson correlation between embedding dot products and l-path counts
/// over the given (positive) test pairs.
inline double pcc_dot_vs_lpath(const Matrix& U, const StaticNetwork& g_train,
                               std::span<const TestPair> positives, int l) {
  const auto dots = score_dot(U, positives);
  const auto paths = score_lpath(g_train, positives, l);
  return pearson(dots, paths);
}

}  // namespace sine
