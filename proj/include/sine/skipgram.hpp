#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "sine/common.hpp"
#include "sine/pairs.hpp"

namespace sine {

/// Dense rows x cols matrix stored column-major; column i is node i's vector.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, NodeId cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {}

  int rows() const noexcept { return rows_; }
  NodeId cols() const noexcept { return cols_; }

  std::span<double> col(NodeId i) {
    return {data_.data() + static_cast<std::size_t>(i) * rows_, static_cast<std::size_t>(rows_)};
  }
  std::span<const double> col(NodeId i) const {
    return {data_.data() + static_cast<std::size_t>(i) * rows_, static_cast<std::size_t>(rows_)};
  }
  double& operator()(int r, NodeId c) { return data_[static_cast<std::size_t>(c) * rows_ + r]; }
  double operator()(int r, NodeId c) const { return data_[static_cast<std::size_t>(c) * rows_ + r]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  int rows_ = 0;
  NodeId cols_ = 0;
  std::vector<double> data_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

/// Center (U) and context (V) vectors, both d x N. Link scores use U only.
struct EmbeddingMatrix {
  Matrix U;
  Matrix V;

  EmbeddingMatrix() = default;
  EmbeddingMatrix(int d, NodeId n) : U(d, n), V(d, n) {
    if (d < 1) throw DomainError("embedding dimension must be >= 1");
    if (d >= n) throw DomainError("embedding dimension must be smaller than the node count");
  }

  int dim() const noexcept { return U.rows(); }
  NodeId num_nodes() const noexcept { return U.cols(); }
};

struct TrainConfig {
  int dim = 128;
  int negatives = 5;
  double lr_initial = 0.025;
  double lr_final = 1e-4;
  int epochs = 1;
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (dim < 1) throw DomainError("dimension must be >= 1");
    if (negatives < 1) throw DomainError("negative count must be >= 1");
    if (!(lr_final > 0.0) || !(lr_initial >= lr_final))
      throw DomainError("need 0 < lr_final <= lr_initial");
    if (epochs < 1) throw DomainError("epochs must be >= 1");
  }
};

// ---------------------------------------------------------------------------
// Exact softmax model over a single matrix U (small N only).

inline double log_partition(const Matrix& U, NodeId i) {
  const auto ui = U.col(i);
  double mx = -std::numeric_limits<double>::infinity();
  for (NodeId k = 0; k < U.cols(); ++k) mx = std::max(mx, dot(ui, U.col(k)));
  double s = 0.0;
  for (NodeId k = 0; k < U.cols(); ++k) s += std::exp(dot(ui, U.col(k)) - mx);
  const double z = mx + std::log(s);
  if (!std::isfinite(z)) throw NonFiniteError("non-finite softmax normaliser");
  return z;
}

/// p(j|i) = exp(u_i.u_j) / sum_k exp(u_i.u_k).
inline double softmax_prob(const Matrix& U, NodeId i, NodeId j) {
  return std::exp(dot(U.col(i), U.col(j)) - log_partition(U, i));
}

/// Sum over pairs of log p(context | center).
template <typename Pairs>
double objective(const Matrix& U, const Pairs& pairs) {
  double total = 0.0;
  pairs.for_each([&](NodeId i, NodeId j) { total += dot(U.col(i), U.col(j)) - log_partition(U, i); });
  return total;
}

/// Same objective grouped by center: sum_i (-|N(i)| log Z_i + sum_j u_i.u_j).
template <typename Pairs>
double objective_grouped(const Matrix& U, const Pairs& pairs) {
  const auto counts = pairs.center_counts(U.cols());
  std::vector<double> dots(static_cast<std::size_t>(U.cols()), 0.0);
  pairs.for_each([&](NodeId i, NodeId j) { dots[i] += dot(U.col(i), U.col(j)); });
  double total = 0.0;
  for (NodeId i = 0; i < U.cols(); ++i) {
    if (counts[i] == 0) continue;
    total += -static_cast<double>(counts[i]) * log_partition(U, i) + dots[i];
  }
  return total;
}

/// Gradient of objective() with respect to every entry of U.
template <typename Pairs>
Matrix objective_gradient(const Matrix& U, const Pairs& pairs) {
  const int d = U.rows();
  const NodeId n = U.cols();
  Matrix grad(d, n);
  const auto counts = pairs.center_counts(n);
  pairs.for_each([&](NodeId i, NodeId j) {
    for (int r = 0; r < d; ++r) {
      grad(r, i) += U(r, j);
      grad(r, j) += U(r, i);
    }
  });
  // -c_i * d(log Z_i): p_k u_i on u_k for every k, plus sum_k p_k u_k on u_i
  std::vector<double> p(static_cast<std::size_t>(n));
  for (NodeId i = 0; i < n; ++i) {
    if (counts[i] == 0) continue;
    const double c = static_cast<double>(counts[i]);
    const double lz = log_partition(U, i);
    for (NodeId k = 0; k < n; ++k) p[k] = std::exp(dot(U.col(i), U.col(k)) - lz);
    for (NodeId k = 0; k < n; ++k) {
      for (int r = 0; r < d; ++r) {
        grad(r, k) -= c * p[k] * U(r, i);
        grad(r, i) -= c * p[k] * U(r, k);
      }
    }
  }
  return grad;
}

// ---------------------------------------------------------------------------
// Negative sampling.

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double log_sigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

/// log s(u_i.v_j) + sum_n log s(-u_i.v_n) for one observed pair.
inline double sgns_pair_loss(const EmbeddingMatrix& emb, NodeId i, NodeId j,
                             std::span<const NodeId> negatives) {
  const auto ui = emb.U.col(i);
  double loss = log_sigmoid(dot(ui, emb.V.col(j)));
  for (NodeId n : negatives) loss += log_sigmoid(-dot(ui, emb.V.col(n)));
  return loss;
}

/// One gradient-ascent step on sgns_pair_loss. All coefficients are taken at
/// the current parameters before anything is written, so the applied change
/// is exactly lr times the gradient. Returns false if a value went non-finite.
inline bool sgns_step(EmbeddingMatrix& emb, NodeId i, NodeId j, std::span<const NodeId> negatives,
                      double lr, std::vector<double>& scratch) {
  const int d = emb.dim();
  auto ui = emb.U.col(i);
  const std::size_t m = negatives.size() + 1;
  // scratch = [du (d entries) | coefficient per target (m entries)]
  scratch.assign(static_cast<std::size_t>(d) + m, 0.0);
  auto target = [&](std::size_t k) { return k == 0 ? j : negatives[k - 1]; };

  for (std::size_t k = 0; k < m; ++k) {
    auto vt = emb.V.col(target(k));
    const double f = dot(ui, vt);
    if (!std::isfinite(f)) return false;
    const double g = (k == 0 ? 1.0 : 0.0) - sigmoid(f);
    scratch[d + k] = lr * g;
    for (int r = 0; r < d; ++r) scratch[r] += g * vt[r];
  }
  for (std::size_t k = 0; k < m; ++k) {
    auto vt = emb.V.col(target(k));
    const double g = scratch[d + k];
    for (int r = 0; r < d; ++r) vt[r] += g * ui[r];
  }
  bool finite = true;
  for (int r = 0; r < d; ++r) {
    ui[r] += lr * scratch[r];
    finite = finite && std::isfinite(ui[r]);
  }
  return finite;
}

/// Noise distribution: node frequency raised to the 3/4 power.
class NoiseSampler {
 public:
  explicit NoiseSampler(std::span<const std::uint64_t> counts, double power = 0.75) {
    std::vector<double> w(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k)
      w[k] = std::pow(static_cast<double>(counts[k]), power);
    dist_ = std::discrete_distribution<NodeId>(w.begin(), w.end());
  }

  NodeId operator()(Rng& rng) { return dist_(rng); }

  std::vector<double> probabilities() const { return dist_.probabilities(); }

 private:
  std::discrete_distribution<NodeId> dist_;
};

/// Skip-Gram with negative sampling over a pair sequence on nodes 0..n-1.
///
/// U starts uniform in [-0.5/d, 0.5/d] and V at zero; each pair gets one
/// positive and `negatives` noise updates, with the learning rate decaying
/// linearly over all pairs and epochs. Nodes that never occur as a center
/// end with a zero vector.
template <typename Pairs>
EmbeddingMatrix train(const Pairs& pairs, NodeId n, const TrainConfig& cfg) {
  cfg.validate();
  const std::size_t total_pairs = pairs.size();
  if (total_pairs == 0) throw Error("cannot train on an empty pair stream");
  const int d = cfg.dim;
  EmbeddingMatrix emb(d, n);
  Rng rng(cfg.rng_seed);
  std::uniform_real_distribution<double> init(-0.5 / d, 0.5 / d);
  for (double& x : emb.U.data()) x = init(rng);

  const auto counts = pairs.center_counts(n);
  NoiseSampler noise(counts);

  const double steps = static_cast<double>(total_pairs) * cfg.epochs;
  std::uint64_t step = 0;
  std::vector<double> scratch;
  std::vector<NodeId> negs;
  negs.reserve(static_cast<std::size_t>(cfg.negatives));
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    pairs.for_each([&](NodeId i, NodeId j) {
      const double lr =
          cfg.lr_initial - (cfg.lr_initial - cfg.lr_final) * (static_cast<double>(step) / steps);
      ++step;
      negs.clear();
      for (int k = 0; k < cfg.negatives; ++k) {
        const NodeId x = noise(rng);
        if (x != j) negs.push_back(x);
      }
      if (!sgns_step(emb, i, j, negs, lr, scratch))
        throw NonFiniteError(fmt::format(
            "non-finite embedding at pair {} (center {}, context {}, lr {}); lower the learning rate",
            step, i, j, lr));
    });
  }
  for (NodeId i = 0; i < n; ++i)
    if (counts[i] == 0) std::ranges::fill(emb.U.col(i), 0.0);
  return emb;
}

// First line "N d", then "label v1 ... vd" per node.
inline void write_embedding(std::ostream& out, const Matrix& U,
                            const std::vector<std::string>& labels) {
  out << U.cols() << ' ' << U.rows() << '\n';
  for (NodeId i = 0; i < U.cols(); ++i) {
    out << labels.at(i);
    for (double x : U.col(i)) out << ' ' << fmt::format("{:.9g}", x);
    out << '\n';
  }
}

}  // namespace sine
