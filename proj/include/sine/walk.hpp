#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "sine/common.hpp"
#include "sine/corpus.hpp"
#include "sine/graph.hpp"

namespace sine {

enum class TemporalBias { Uniform, Exponential };

struct WalkConfig {
  int walk_length = 20;
  std::int64_t budget_multiplier = 1;
  double p = 1.0;
  double q = 1.0;
  std::uint64_t rng_seed = 0;
  // CTDNE successor choice; Exponential favours contacts soon after the current time.
  TemporalBias temporal_bias = TemporalBias::Uniform;

  void validate() const {
    if (walk_length < 2) throw DomainError("walk length must be >= 2");
    if (budget_multiplier < 1) throw DomainError("budget multiplier must be >= 1");
    if (!(p > 0.0) || !(q > 0.0)) throw DomainError("p and q must be positive");
  }
};

namespace detail {

template <typename Walk>
TrajectoryCorpus fill_walk_budget(NodeId n, const WalkConfig& cfg, Walk&& walk) {
  const auto budget = static_cast<std::size_t>(n) * static_cast<std::size_t>(cfg.budget_multiplier);
  TrajectoryCorpus corpus;
  while (corpus.total_length < budget) {
    Path p = walk();
    if (!p.empty()) corpus.append(std::move(p));
  }
  return corpus;
}

inline Path uniform_walk(const StaticNetwork& g, NodeId start, int length, Rng& rng) {
  Path p{start};
  while (static_cast<int>(p.size()) < length) {
    auto nb = g.neighbors(p.back());
    if (nb.empty()) break;
    p.push_back(nb[uniform_index(rng, nb.size())]);
  }
  return p;
}

// Unnormalised second-order weight of stepping prev -> cur -> next.
inline double node2vec_weight(const StaticNetwork& g, NodeId prev, NodeId next, double p,
                              double q) {
  if (next == prev) return 1.0 / p;
  if (g.has_edge(prev, next)) return 1.0;
  return 1.0 / q;
}

inline Path node2vec_walk(const StaticNetwork& g, NodeId start, const WalkConfig& cfg, Rng& rng) {
  Path p{start};
  std::vector<double> weights;
  while (static_cast<int>(p.size()) < cfg.walk_length) {
    const NodeId cur = p.back();
    auto nb = g.neighbors(cur);
    if (nb.empty()) break;
    if (p.size() == 1) {
      p.push_back(nb[uniform_index(rng, nb.size())]);
      continue;
    }
    const NodeId prev = p[p.size() - 2];
    weights.resize(nb.size());
    for (std::size_t k = 0; k < nb.size(); ++k)
      weights[k] = node2vec_weight(g, prev, nb[k], cfg.p, cfg.q);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    p.push_back(nb[pick(rng)]);
  }
  return p;
}

}  // namespace detail

/// DeepWalk corpus: uniform random walks from uniform start nodes.
inline TrajectoryCorpus deepwalk_corpus(const StaticNetwork& g, const WalkConfig& cfg) {
  cfg.validate();
  if (g.num_nodes() == 0) throw EmptyNetworkError("network has no nodes");
  Rng rng(cfg.rng_seed);
  return detail::fill_walk_budget(g.num_nodes(), cfg, [&] {
    return detail::uniform_walk(g, uniform_index(rng, g.num_nodes()), cfg.walk_length, rng);
  });
}

/// Node2Vec corpus: second-order walks with return parameter p and in-out
/// parameter q; the first step of each walk is uniform.
inline TrajectoryCorpus node2vec_corpus(const StaticNetwork& g, const WalkConfig& cfg) {
  cfg.validate();
  if (g.num_nodes() == 0) throw EmptyNetworkError("network has no nodes");
  Rng rng(cfg.rng_seed);
  return detail::fill_walk_budget(g.num_nodes(), cfg, [&] {
    return detail::node2vec_walk(g, uniform_index(rng, g.num_nodes()), cfg, rng);
  });
}

namespace detail {

// Next hop from `node` after time `t`, drawn from the multiset of later contacts.
inline const NodeContact* ctdne_step(const TemporalNetwork& tn, NodeId node, Timestamp t,
                                     TemporalBias bias, Rng& rng, std::vector<double>& weights) {
  auto cs = tn.contacts_of(node);
  auto first = std::upper_bound(cs.begin(), cs.end(), t,
                                [](Timestamp x, const NodeContact& c) { return x < c.t; });
  const auto count = static_cast<std::size_t>(cs.end() - first);
  if (count == 0) return nullptr;
  if (bias == TemporalBias::Uniform) return &*(first + uniform_index(rng, count));
  const double span = static_cast<double>(cs.back().t - t);
  weights.resize(count);
  for (std::size_t k = 0; k < count; ++k)
    weights[k] = std::exp(-static_cast<double>((first + k)->t - t) / span);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  return &*(first + pick(rng));
}

}  // namespace detail

/// CTDNE corpus: temporal walks with strictly increasing contact times,
/// started from a uniformly drawn contact.
inline TrajectoryCorpus ctdne_corpus(const TemporalNetwork& tn, const WalkConfig& cfg) {
  cfg.validate();
  if (tn.contacts().empty()) throw EmptyNetworkError("network has no contacts");
  Rng rng(cfg.rng_seed);
  std::vector<double> weights;
  auto contacts = tn.contacts();
  return detail::fill_walk_budget(tn.num_nodes(), cfg, [&]() -> Path {
    const Contact& c = contacts[uniform_index(rng, contacts.size())];
    Path p = bernoulli(rng, 0.5) ? Path{c.u, c.v} : Path{c.v, c.u};
    Timestamp t = c.t;
    while (static_cast<int>(p.size()) < cfg.walk_length) {
      const NodeContact* next = detail::ctdne_step(tn, p.back(), t, cfg.temporal_bias, rng, weights);
      if (!next) break;
      p.push_back(next->other);
      t = next->t;
    }
    if (p.size() < 2) return {};
    return p;
  });
}

}  // namespace sine
