#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "sine/common.hpp"
#include "sine/corpus.hpp"

namespace sine {

struct NodePair {
  NodeId center;
  NodeId context;

  friend bool operator==(const NodePair&, const NodePair&) = default;
  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

/// Calls fn(center, context) for every window pair of the corpus, in corpus
/// order. Pairs with center == context (a node revisited within the window)
/// are skipped.
template <typename Fn>
void for_each_pair(const TrajectoryCorpus& corpus, int omega, Fn&& fn) {
  if (omega < 1) throw DomainError("window size must be >= 1");
  for (const auto& path : corpus.paths) {
    const auto len = static_cast<std::ptrdiff_t>(path.size());
    for (std::ptrdiff_t c = 0; c < len; ++c) {
      const auto lo = std::max<std::ptrdiff_t>(0, c - omega);
      const auto hi = std::min<std::ptrdiff_t>(len - 1, c + omega);
      for (auto k = lo; k <= hi; ++k) {
        if (k == c || path[k] == path[c]) continue;
        fn(path[c], path[k]);
      }
    }
  }
}

/// Streaming view over the pairs of a corpus; nothing is materialised.
class PairView {
 public:
  PairView(const TrajectoryCorpus& corpus, int omega) : corpus_(&corpus), omega_(omega) {
    if (omega < 1) throw DomainError("window size must be >= 1");
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for_each_pair(*corpus_, omega_, std::forward<Fn>(fn));
  }

  std::size_t size() const {
    std::size_t n = 0;
    for_each([&](NodeId, NodeId) { ++n; });
    return n;
  }

  // Frequency of each node as a center, over ids 0..n-1.
  std::vector<std::uint64_t> center_counts(NodeId n) const {
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(n), 0);
    for_each([&](NodeId c, NodeId) { ++counts[c]; });
    return counts;
  }

 private:
  const TrajectoryCorpus* corpus_;
  int omega_;
};

/// Materialised pair sequence with center frequencies.
struct PairStream {
  std::vector<NodePair> pairs;
  std::vector<std::uint64_t> counts;  // indexed by node id

  std::size_t size() const noexcept { return pairs.size(); }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& p : pairs) fn(p.center, p.context);
  }

  std::vector<std::uint64_t> center_counts(NodeId n) const {
    auto out = counts;
    out.resize(static_cast<std::size_t>(n), 0);
    return out;
  }
};

inline PairStream generate_pairs(const TrajectoryCorpus& corpus, int omega) {
  PairStream s;
  for_each_pair(corpus, omega, [&](NodeId c, NodeId x) {
    s.pairs.push_back({c, x});
    if (static_cast<std::size_t>(c) >= s.counts.size()) s.counts.resize(c + 1, 0);
    ++s.counts[c];
  });
  return s;
}

// "center \t context" per line, using node labels.
template <typename Pairs>
void write_pairs_tsv(std::ostream& out, const Pairs& pairs, const std::vector<std::string>& labels) {
  pairs.for_each([&](NodeId c, NodeId x) { out << labels.at(c) << '\t' << labels.at(x) << '\n'; });
}

}  // namespace sine
