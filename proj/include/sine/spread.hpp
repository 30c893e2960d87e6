#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "sine/common.hpp"
#include "sine/corpus.hpp"
#include "sine/graph.hpp"

namespace sine {

enum class SpreadMode { Sine, Tsine1, Tsine2 };

struct SpreadConfig {
  double beta = 0.5;
  std::int64_t budget_multiplier = 1;  // X; budget B = N * X
  std::int64_t m_max = 0;              // 0 selects 10 * N
  int l_max = 20;
  std::uint64_t rng_seed = 0;
  // TSINE1 draws the seed time from the multiset of contact times by default.
  bool distinct_seed_times = false;
  // Safety valve for static SI: nodes whose infection step would exceed it stay susceptible.
  std::int64_t max_steps = 100000;

  void validate() const {
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("beta must lie in (0, 1]");
    if (budget_multiplier < 1) throw DomainError("budget multiplier must be >= 1");
    if (m_max < 0) throw DomainError("m_max must be positive");
    if (l_max < 2) throw DomainError("l_max must be >= 2");
  }
};

/// Infection tree of one SI run, indexed by dense node id.
///
/// `parent[v]` is the infector of v (kNoNode for the root and susceptible
/// nodes); `time[v]` is the step (static) or contact timestamp (temporal) at
/// which v was infected. `infected` lists nodes in infection order.
struct TrajectoryTree {
  NodeId root = kNoNode;
  std::vector<NodeId> parent;
  std::vector<Timestamp> time;
  std::vector<NodeId> infected;

  TrajectoryTree() = default;
  TrajectoryTree(NodeId n, NodeId seed, Timestamp t0)
      : root(seed), parent(static_cast<std::size_t>(n), kNoNode),
        time(static_cast<std::size_t>(n), std::numeric_limits<Timestamp>::max()) {
    time[seed] = t0;
    infected.push_back(seed);
  }

  bool is_infected(NodeId v) const { return v == root || parent[v] != kNoNode; }

  void infect(NodeId v, NodeId by, Timestamp t) {
    parent[v] = by;
    time[v] = t;
    infected.push_back(v);
  }

  // Infected nodes without children.
  std::vector<NodeId> leaves() const {
    std::vector<char> has_child(parent.size(), 0);
    for (NodeId v : infected)
      if (parent[v] != kNoNode) has_child[parent[v]] = 1;
    std::vector<NodeId> out;
    for (NodeId v : infected)
      if (!has_child[v]) out.push_back(v);
    return out;
  }

  // Root-to-v path.
  Path path_to(NodeId v) const {
    Path p;
    for (NodeId x = v; x != kNoNode; x = parent[x]) p.push_back(x);
    std::reverse(p.begin(), p.end());
    return p;
  }
};

/// Discrete-time SI from `seed` on a static network.
///
/// Each infected node tries every susceptible neighbour with probability beta
/// per step, so the step at which u first succeeds on v is u's infection step
/// plus a Geometric(beta) delay. The run is simulated event-wise on those
/// delays: v is infected at the earliest arrival and its parent is drawn
/// uniformly among the neighbours that reach it in that same step.
inline TrajectoryTree si_spread_static(const StaticNetwork& g, NodeId seed, double beta, Rng& rng,
                                       std::int64_t max_steps = 100000) {
  const NodeId n = g.num_nodes();
  TrajectoryTree tree(n, seed, 0);
  if (max_steps <= 0) return tree;

  constexpr Timestamp kInf = std::numeric_limits<Timestamp>::max();
  std::vector<Timestamp> arrival(static_cast<std::size_t>(n), kInf);
  std::vector<NodeId> best(static_cast<std::size_t>(n), kNoNode);
  std::vector<std::uint32_t> ties(static_cast<std::size_t>(n), 0);
  std::vector<char> done(static_cast<std::size_t>(n), 0);
  std::geometric_distribution<Timestamp> failures(beta);

  using Entry = std::pair<Timestamp, NodeId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;

  auto relax_from = [&](NodeId u, Timestamp tu) {
    for (NodeId v : g.neighbors(u)) {
      if (done[v]) continue;
      const Timestamp delay = beta >= 1.0 ? 1 : 1 + failures(rng);
      const Timestamp tv = tu + delay;
      if (tv > max_steps) continue;
      if (tv < arrival[v]) {
        arrival[v] = tv;
        best[v] = u;
        ties[v] = 1;
        heap.emplace(tv, v);
      } else if (tv == arrival[v]) {
        // reservoir choice keeps the parent uniform among same-step infectors
        ++ties[v];
        if (uniform_index<std::uint32_t>(rng, ties[v]) == 0) best[v] = u;
      }
    }
  };

  done[seed] = 1;
  relax_from(seed, 0);
  while (!heap.empty()) {
    auto [tv, v] = heap.top();
    heap.pop();
    if (done[v] || tv != arrival[v]) continue;
    done[v] = 1;
    tree.infect(v, best[v], tv);
    relax_from(v, tv);
  }
  return tree;
}

/// SI on a temporal network, seed infected at `t_start`.
///
/// Contacts sharing a timestamp form one batch: only nodes infected before the
/// batch (or the seed itself) transmit, each contact independently with
/// probability beta, and a node reached by several successful contacts picks
/// its parent uniformly among them.
inline TrajectoryTree si_spread_temporal(const TemporalNetwork& tn, NodeId seed, Timestamp t_start,
                                         double beta, Rng& rng) {
  if (t_start < 0 || t_start > tn.horizon()) throw DomainError("start time outside [0, T]");
  const NodeId n = tn.num_nodes();
  TrajectoryTree tree(n, seed, t_start);
  auto contacts = tn.contacts();
  auto it = std::lower_bound(contacts.begin(), contacts.end(), t_start,
                             [](const Contact& c, Timestamp t) { return c.t < t; });

  std::vector<NodeId> best(static_cast<std::size_t>(n), kNoNode);
  std::vector<std::uint32_t> hits(static_cast<std::size_t>(n), 0);
  std::vector<NodeId> reached;
  while (it != contacts.end()) {
    const Timestamp t = it->t;
    auto batch_end = it;
    while (batch_end != contacts.end() && batch_end->t == t) ++batch_end;
    for (; it != batch_end; ++it) {
      const bool iu = tree.is_infected(it->u);
      const bool iv = tree.is_infected(it->v);
      if (iu == iv) continue;
      const NodeId from = iu ? it->u : it->v;
      const NodeId to = iu ? it->v : it->u;
      if (!bernoulli(rng, beta)) continue;
      if (hits[to]++ == 0) reached.push_back(to);
      if (uniform_index<std::uint32_t>(rng, hits[to]) == 0) best[to] = from;
    }
    for (NodeId v : reached) {
      tree.infect(v, best[v], t);
      hits[v] = 0;
    }
    reached.clear();
  }
  return tree;
}

namespace detail {
inline void require_contacts(const TemporalNetwork& tn, NodeId i) {
  if (tn.contacts_of(i).empty())
    throw NoContactError("node '" + tn.label(i) + "' has no contacts");
}
}  // namespace detail

// Seed time for TSINE1: uniform over the node's contact times, counted with
// multiplicity unless `distinct` is set.
inline Timestamp seed_time_tsine1(const TemporalNetwork& tn, NodeId i, Rng& rng,
                                  bool distinct = false) {
  detail::require_contacts(tn, i);
  auto cs = tn.contacts_of(i);
  if (!distinct) return cs[uniform_index(rng, cs.size())].t;
  std::vector<Timestamp> times;
  for (const auto& c : cs)
    if (times.empty() || times.back() != c.t) times.push_back(c.t);
  return times[uniform_index(rng, times.size())];
}

// Seed time for TSINE2: the node's first contact.
inline Timestamp seed_time_tsine2(const TemporalNetwork& tn, NodeId i) {
  detail::require_contacts(tn, i);
  return tn.contacts_of(i).front().t;
}

/// Paths drawn from a tree rooted at i: max{1, round(K(i) * m_max / sum K)},
/// rounding half up. An edgeless graph yields 1.
inline std::int64_t path_quota(const StaticNetwork& g, NodeId i, std::int64_t m_max) {
  if (m_max < 1) throw DomainError("m_max must be >= 1");
  const auto degree_sum = static_cast<std::int64_t>(2 * g.num_edges());
  if (degree_sum == 0) return 1;
  const auto k = static_cast<std::int64_t>(g.degree(i));
  // floor(k*m/S + 1/2) in integers
  const std::int64_t q = (2 * k * m_max + degree_sum) / (2 * degree_sum);
  return std::max<std::int64_t>(1, q);
}

/// m root-to-leaf paths, leaves drawn uniformly with replacement, each cut
/// to its first l_max nodes.
inline std::vector<Path> extract_paths(const TrajectoryTree& tree, std::int64_t m, int l_max,
                                       Rng& rng) {
  const auto leaves = tree.leaves();
  std::vector<Path> out;
  out.reserve(static_cast<std::size_t>(m));
  for (std::int64_t k = 0; k < m; ++k) {
    Path p = tree.path_to(leaves[uniform_index(rng, leaves.size())]);
    if (p.size() > static_cast<std::size_t>(l_max)) p.resize(static_cast<std::size_t>(l_max));
    out.push_back(std::move(p));
  }
  return out;
}

namespace detail {

template <typename MakeTree>
TrajectoryCorpus fill_budget(const StaticNetwork& g, const SpreadConfig& cfg, Rng& rng,
                             MakeTree&& make_tree) {
  const NodeId n = g.num_nodes();
  const auto budget = static_cast<std::size_t>(n) * static_cast<std::size_t>(cfg.budget_multiplier);
  const std::int64_t m_max = cfg.m_max > 0 ? cfg.m_max : 10 * static_cast<std::int64_t>(n);
  TrajectoryCorpus corpus;
  while (corpus.total_length < budget) {
    const NodeId seed = uniform_index(rng, n);
    const TrajectoryTree tree = make_tree(seed);
    auto paths = extract_paths(tree, path_quota(g, seed, m_max), cfg.l_max, rng);
    for (auto& p : paths) {
      corpus.append(std::move(p));
      if (corpus.total_length >= budget) break;
    }
  }
  return corpus;
}

}  // namespace detail

/// SINE corpus: SI trees on the static network until the budget N*X is met.
inline TrajectoryCorpus sample_corpus(const StaticNetwork& g, const SpreadConfig& cfg) {
  cfg.validate();
  if (g.num_nodes() == 0) throw EmptyNetworkError("network has no nodes");
  Rng rng(cfg.rng_seed);
  return detail::fill_budget(g, cfg, rng, [&](NodeId seed) {
    return si_spread_static(g, seed, cfg.beta, rng, cfg.max_steps);
  });
}

/// Temporal corpus (TSINE1/TSINE2, or SINE on the aggregated network).
/// Quotas use the aggregated static degree. A seed without contacts yields a
/// single-node tree.
inline TrajectoryCorpus sample_corpus(const TemporalNetwork& tn, const SpreadConfig& cfg,
                                      SpreadMode mode) {
  const StaticNetwork g = aggregate(tn);
  if (mode == SpreadMode::Sine) return sample_corpus(g, cfg);
  cfg.validate();
  if (tn.num_nodes() == 0) throw EmptyNetworkError("network has no nodes");
  Rng rng(cfg.rng_seed);
  return detail::fill_budget(g, cfg, rng, [&](NodeId seed) {
    if (tn.contacts_of(seed).empty()) return TrajectoryTree(tn.num_nodes(), seed, 0);
    const Timestamp t0 = mode == SpreadMode::Tsine1
                             ? seed_time_tsine1(tn, seed, rng, cfg.distinct_seed_times)
                             : seed_time_tsine2(tn, seed);
    return si_spread_temporal(tn, seed, t0, cfg.beta, rng);
  });
}

}  // namespace sine
