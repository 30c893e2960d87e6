#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sine/common.hpp"

namespace sine {

struct Contact {
  NodeId u;
  NodeId v;
  Timestamp t;

  friend bool operator==(const Contact&, const Contact&) = default;
};

// A contact as seen from one endpoint.
struct NodeContact {
  Timestamp t;
  NodeId other;
};

/// Time-stamped contact list over dense node ids 0..N-1.
///
/// Contacts are kept sorted by timestamp (stable with respect to input order)
/// and never contain self-loops. Original labels are kept for output.
class TemporalNetwork {
 public:
  TemporalNetwork() = default;

  TemporalNetwork(std::vector<std::string> labels, std::vector<Contact> contacts)
      : labels_(std::move(labels)), contacts_(std::move(contacts)) {
    const auto n = static_cast<NodeId>(labels_.size());
    for (NodeId i = 0; i < n; ++i) {
      if (!label_to_id_.emplace(labels_[i], i).second)
        throw Error("duplicate node label '" + labels_[i] + "'");
    }
    for (const auto& c : contacts_) {
      if (c.u < 0 || c.v < 0 || c.u >= n || c.v >= n)
        throw Error("contact references unknown node");
      if (c.u == c.v) throw Error("self-loop contact");
      if (c.t < 0) throw Error("negative timestamp");
    }
    std::stable_sort(contacts_.begin(), contacts_.end(),
                     [](const Contact& a, const Contact& b) { return a.t < b.t; });
    horizon_ = contacts_.empty() ? 0 : contacts_.back().t;

    node_offsets_.assign(labels_.size() + 1, 0);
    for (const auto& c : contacts_) {
      ++node_offsets_[c.u + 1];
      ++node_offsets_[c.v + 1];
    }
    for (std::size_t i = 1; i < node_offsets_.size(); ++i)
      node_offsets_[i] += node_offsets_[i - 1];
    node_contacts_.resize(2 * contacts_.size());
    auto fill = node_offsets_;
    // contacts_ is time-sorted, so each node's list comes out time-sorted too
    for (const auto& c : contacts_) {
      node_contacts_[fill[c.u]++] = {c.t, c.v};
      node_contacts_[fill[c.v]++] = {c.t, c.u};
    }
  }

  // Nodes named "0".."n-1".
  static TemporalNetwork with_numeric_labels(NodeId n, std::vector<Contact> contacts) {
    std::vector<std::string> labels(static_cast<std::size_t>(n));
    for (NodeId i = 0; i < n; ++i) labels[i] = std::to_string(i);
    return TemporalNetwork(std::move(labels), std::move(contacts));
  }

  NodeId num_nodes() const noexcept { return static_cast<NodeId>(labels_.size()); }
  std::span<const Contact> contacts() const noexcept { return contacts_; }
  Timestamp horizon() const noexcept { return horizon_; }

  const std::string& label(NodeId i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  NodeId id_of(std::string_view label) const {
    auto it = label_to_id_.find(std::string(label));
    if (it == label_to_id_.end()) throw Error("unknown node label '" + std::string(label) + "'");
    return it->second;
  }

  // Contacts of node i from either side, sorted by time.
  std::span<const NodeContact> contacts_of(NodeId i) const {
    return std::span<const NodeContact>(node_contacts_)
        .subspan(node_offsets_[i], node_offsets_[i + 1] - node_offsets_[i]);
  }

  std::size_t num_distinct_timestamps() const {
    std::size_t n = 0;
    for (std::size_t k = 0; k < contacts_.size(); ++k)
      if (k == 0 || contacts_[k].t != contacts_[k - 1].t) ++n;
    return n;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> label_to_id_;
  std::vector<Contact> contacts_;
  Timestamp horizon_ = 0;
  std::vector<std::size_t> node_offsets_;
  std::vector<NodeContact> node_contacts_;
};

/// Unweighted undirected graph in CSR form with sorted neighbor lists.
class StaticNetwork {
 public:
  StaticNetwork() = default;

  // Self-loops and duplicate edges (in either orientation) are dropped.
  StaticNetwork(NodeId n, std::vector<std::pair<NodeId, NodeId>> edges) : n_(n) {
    for (auto& [a, b] : edges) {
      if (a < 0 || b < 0 || a >= n || b >= n) throw Error("edge references unknown node");
      if (a > b) std::swap(a, b);
    }
    std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& [a, b] : edges_) {
      ++offsets_[a + 1];
      ++offsets_[b + 1];
    }
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
    neighbors_.resize(2 * edges_.size());
    auto fill = offsets_;
    for (const auto& [a, b] : edges_) {
      neighbors_[fill[a]++] = b;
      neighbors_[fill[b]++] = a;
    }
    for (NodeId i = 0; i < n; ++i)
      std::sort(neighbors_.begin() + offsets_[i], neighbors_.begin() + offsets_[i + 1]);
  }

  NodeId num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  // Edges as (a, b) with a < b, lexicographically sorted.
  const std::vector<std::pair<NodeId, NodeId>>& edges() const noexcept { return edges_; }

  std::span<const NodeId> neighbors(NodeId i) const {
    return std::span<const NodeId>(neighbors_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
  }

  std::size_t degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }

  bool has_edge(NodeId a, NodeId b) const {
    auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
  }

 private:
  NodeId n_ = 0;
  std::vector<std::pair<NodeId, NodeId>> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> neighbors_;
};

struct EdgeListFormat {
  // Zero-based column indices. A line lacking the time column gets t = 0.
  int source_column = 0;
  int target_column = 1;
  int time_column = 2;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  auto is_sep = [](char c) { return c == ',' || std::isspace(static_cast<unsigned char>(c)); };
  while (k < line.size()) {
    while (k < line.size() && is_sep(line[k])) ++k;
    std::size_t start = k;
    while (k < line.size() && !is_sep(line[k])) ++k;
    if (k > start) out.push_back(line.substr(start, k - start));
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Reads an "i j t" edge list. Labels are remapped to dense ids in order of
/// first appearance; nodes that occur only in self-loops are not kept.
inline TemporalNetwork load_temporal(std::istream& in, const EdgeListFormat& fmt = {}) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeId> ids;
  std::vector<Contact> contacts;

  auto intern = [&](std::string_view label) {
    auto [it, inserted] = ids.emplace(std::string(label), static_cast<NodeId>(labels.size()));
    if (inserted) labels.emplace_back(label);
    return it->second;
  };

  const int needed = std::max(fmt.source_column, fmt.target_column) + 1;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == '%') continue;
    auto fields = detail::split_fields(line);
    if (static_cast<int>(fields.size()) < needed)
      throw ParseError(line_no, "expected at least " + std::to_string(needed) + " fields");

    Timestamp t = 0;
    if (fmt.time_column >= 0 && fmt.time_column < static_cast<int>(fields.size())) {
      auto f = fields[fmt.time_column];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), t);
      if (ec != std::errc() || ptr != f.data() + f.size())
        throw ParseError(line_no, "invalid timestamp '" + std::string(f) + "'");
      if (t < 0) throw ParseError(line_no, "negative timestamp");
    }
    auto a = fields[fmt.source_column];
    auto b = fields[fmt.target_column];
    if (a == b) continue;
    const NodeId u = intern(a);
    const NodeId v = intern(b);
    contacts.push_back({u, v, t});
  }
  if (contacts.empty()) throw EmptyNetworkError("network has no contacts");
  return TemporalNetwork(std::move(labels), std::move(contacts));
}

inline StaticNetwork aggregate(const TemporalNetwork& tn) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(tn.contacts().size());
  for (const auto& c : tn.contacts()) edges.emplace_back(c.u, c.v);
  return StaticNetwork(tn.num_nodes(), std::move(edges));
}

struct NetworkStats {
  std::int64_t n_nodes = 0;
  std::int64_t n_timestamps = 0;
  std::int64_t n_contacts = 0;
  std::int64_t n_edges = 0;
  double link_density = 0.0;
  double avg_degree = 0.0;
  double clustering_coefficient = 0.0;
};

// Average local clustering coefficient; nodes with degree < 2 count as 0.
inline double average_clustering(const StaticNetwork& g) {
  const NodeId n = g.num_nodes();
  if (n == 0) return 0.0;
  double sum = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    auto nb = g.neighbors(i);
    const double k = static_cast<double>(nb.size());
    if (nb.size() < 2) continue;
    std::size_t links = 0;
    for (NodeId a : nb) {
      auto na = g.neighbors(a);
      // count b in nb with b > a and b adjacent to a
      auto first = std::upper_bound(nb.begin(), nb.end(), a);
      auto ia = na.begin();
      for (auto ib = first; ib != nb.end() && ia != na.end();) {
        if (*ia < *ib) {
          ++ia;
        } else if (*ib < *ia) {
          ++ib;
        } else {
          ++links;
          ++ia;
          ++ib;
        }
      }
    }
    sum += 2.0 * static_cast<double>(links) / (k * (k - 1.0));
  }
  return sum / static_cast<double>(n);
}

inline NetworkStats stats(const TemporalNetwork& tn, const StaticNetwork& g) {
  const NodeId n = g.num_nodes();
  if (n < 2) throw DomainError("link density undefined for fewer than 2 nodes");
  NetworkStats s;
  s.n_nodes = n;
  s.n_timestamps = static_cast<std::int64_t>(tn.num_distinct_timestamps());
  s.n_contacts = static_cast<std::int64_t>(tn.contacts().size());
  s.n_edges = static_cast<std::int64_t>(g.num_edges());
  const double e = static_cast<double>(g.num_edges());
  s.link_density = 2.0 * e / (static_cast<double>(n) * (n - 1.0));
  s.avg_degree = 2.0 * e / static_cast<double>(n);
  s.clustering_coefficient = average_clustering(g);
  return s;
}

namespace detail {

// x <- A x over the sparse adjacency.
inline std::vector<std::uint64_t> propagate(const StaticNetwork& g,
                                            const std::vector<std::uint64_t>& x) {
  std::vector<std::uint64_t> y(x.size(), 0);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (x[v] == 0) continue;
    for (NodeId w : g.neighbors(v)) y[w] += x[v];
  }
  return y;
}

inline std::vector<std::uint64_t> walk_counts_from(const StaticNetwork& g, NodeId s, int steps) {
  std::vector<std::uint64_t> x(static_cast<std::size_t>(g.num_nodes()), 0);
  x[s] = 1;
  for (int k = 0; k < steps; ++k) x = propagate(g, x);
  return x;
}

}  // namespace detail

/// Number of length-l walks between i and j, i.e. (A^l)[i][j].
inline std::uint64_t count_l_paths(const StaticNetwork& g, NodeId i, NodeId j, int l) {
  if (l < 2 || l > 4) throw DomainError("path length must be 2, 3 or 4");
  if (i == j) throw DomainError("path endpoints must differ");
  if (l == 2) {
    auto a = g.neighbors(i);
    auto b = g.neighbors(j);
    std::uint64_t common = 0;
    for (auto ia = a.begin(), ib = b.begin(); ia != a.end() && ib != b.end();) {
      if (*ia < *ib) {
        ++ia;
      } else if (*ib < *ia) {
        ++ib;
      } else {
        ++common;
        ++ia;
        ++ib;
      }
    }
    return common;
  }
  // meet in the middle: A^l[i,j] = <A^a e_i, A^b e_j> with a + b = l
  const auto from_i = detail::walk_counts_from(g, i, l / 2);
  const auto from_j = detail::walk_counts_from(g, j, l - l / 2);
  std::uint64_t total = 0;
  for (std::size_t v = 0; v < from_i.size(); ++v) total += from_i[v] * from_j[v];
  return total;
}

}  // namespace sine
