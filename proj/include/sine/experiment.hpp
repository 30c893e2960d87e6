#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "json.hpp"
#include "sine/common.hpp"
#include "sine/corpus.hpp"
#include "sine/graph.hpp"
#include "sine/linkpred.hpp"
#include "sine/pairs.hpp"
#include "sine/skipgram.hpp"
#include "sine/spread.hpp"
#include "sine/walk.hpp"

namespace sine {

enum class Algorithm { Sine, Tsine1, Tsine2, Deepwalk, Node2vec, Ctdne, L2, L3, L4, Random };

inline constexpr std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Sine: return "sine";
    case Algorithm::Tsine1: return "tsine1";
    case Algorithm::Tsine2: return "tsine2";
    case Algorithm::Deepwalk: return "deepwalk";
    case Algorithm::Node2vec: return "node2vec";
    case Algorithm::Ctdne: return "ctdne";
    case Algorithm::L2: return "l2";
    case Algorithm::L3: return "l3";
    case Algorithm::L4: return "l4";
    case Algorithm::Random: return "random";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
  for (auto a : {Algorithm::Sine, Algorithm::Tsine1, Algorithm::Tsine2, Algorithm::Deepwalk,
                 Algorithm::Node2vec, Algorithm::Ctdne, Algorithm::L2, Algorithm::L3,
                 Algorithm::L4, Algorithm::Random})
    if (algorithm_name(a) == s) return a;
  throw DomainError("unknown algorithm '" + std::string(s) + "'");
}

inline bool is_spreading(Algorithm a) {
  return a == Algorithm::Sine || a == Algorithm::Tsine1 || a == Algorithm::Tsine2;
}

inline bool is_embedding(Algorithm a) {
  return is_spreading(a) || a == Algorithm::Deepwalk || a == Algorithm::Node2vec ||
         a == Algorithm::Ctdne;
}

inline int lpath_length(Algorithm a) {
  switch (a) {
    case Algorithm::L2: return 2;
    case Algorithm::L3: return 3;
    case Algorithm::L4: return 4;
    default: return 0;
  }
}

/// Everything one realization needs besides the split and its seed.
struct Hyperparams {
  double beta = 0.5;
  std::int64_t x = 10;
  double p = 1.0;
  double q = 1.0;
  int omega = 10;
  int dim = 128;
  std::int64_t m_max = 0;  // 0 = 10 * N
  int l_max = 20;
  int negatives = 5;
  int epochs = 1;
  double lr_initial = 0.025;
  double lr_final = 1e-4;
  TemporalBias ctdne_bias = TemporalBias::Uniform;
};

// Only the axes the algorithm actually uses.
inline std::string describe(Algorithm a, const Hyperparams& hp) {
  if (is_spreading(a)) return fmt::format("beta={:g};x={}", hp.beta, hp.x);
  if (a == Algorithm::Node2vec) return fmt::format("p={:g};q={:g};x={}", hp.p, hp.q, hp.x);
  if (a == Algorithm::Deepwalk || a == Algorithm::Ctdne) return fmt::format("x={}", hp.x);
  return "-";
}

inline nlohmann::json to_json(Algorithm a, const Hyperparams& hp) {
  nlohmann::json j;
  if (is_spreading(a)) {
    j["beta"] = hp.beta;
    j["x"] = hp.x;
  } else if (a == Algorithm::Node2vec) {
    j["p"] = hp.p;
    j["q"] = hp.q;
    j["x"] = hp.x;
  } else if (a == Algorithm::Deepwalk || a == Algorithm::Ctdne) {
    j["x"] = hp.x;
  }
  return j;
}

// Embedding dimension actually used on an n-node network (must stay below n).
inline int effective_dim(const Hyperparams& hp, NodeId n) { return std::min(hp.dim, n - 1); }

/// Sampler output for one realization on the split's training network.
inline TrajectoryCorpus sample_training_corpus(Algorithm a, const EvalSplit& split,
                                               const Hyperparams& hp, std::uint64_t seed) {
  if (is_spreading(a)) {
    SpreadConfig cfg;
    cfg.beta = hp.beta;
    cfg.budget_multiplier = hp.x;
    cfg.m_max = hp.m_max;
    cfg.l_max = hp.l_max;
    cfg.rng_seed = seed;
    if (a == Algorithm::Sine) return sample_corpus(split.train_static, cfg);
    return sample_corpus(split.train_temporal, cfg,
                         a == Algorithm::Tsine1 ? SpreadMode::Tsine1 : SpreadMode::Tsine2);
  }
  WalkConfig cfg;
  cfg.walk_length = hp.l_max;
  cfg.budget_multiplier = hp.x;
  cfg.p = hp.p;
  cfg.q = hp.q;
  cfg.rng_seed = seed;
  cfg.temporal_bias = hp.ctdne_bias;
  switch (a) {
    case Algorithm::Deepwalk: return deepwalk_corpus(split.train_static, cfg);
    case Algorithm::Node2vec: return node2vec_corpus(split.train_static, cfg);
    case Algorithm::Ctdne: return ctdne_corpus(split.train_temporal, cfg);
    default: throw DomainError("algorithm does not sample a corpus");
  }
}

inline EmbeddingMatrix embed(Algorithm a, const EvalSplit& split, const Hyperparams& hp,
                             std::uint64_t run_seed, TrajectoryCorpus* corpus_out = nullptr) {
  const NodeId n = split.train_static.num_nodes();
  auto corpus = sample_training_corpus(a, split, hp, derive_seed(run_seed, 1));
  TrainConfig tc;
  tc.dim = effective_dim(hp, n);
  tc.negatives = hp.negatives;
  tc.epochs = hp.epochs;
  tc.lr_initial = hp.lr_initial;
  tc.lr_final = hp.lr_final;
  tc.rng_seed = derive_seed(run_seed, 2);
  const PairView pairs(corpus, hp.omega);
  // a corpus of single-node paths has no pairs: every node stays cold
  auto emb = pairs.size() == 0 ? EmbeddingMatrix(tc.dim, n) : train(pairs, n, tc);
  if (corpus_out) *corpus_out = std::move(corpus);
  return emb;
}

/// Test-pair scores for one realization.
inline std::vector<double> score_realization(Algorithm a, const EvalSplit& split,
                                             const Hyperparams& hp, std::uint64_t run_seed) {
  if (const int l = lpath_length(a)) return score_lpath(split.train_static, split.test_pairs, l);
  if (a == Algorithm::Random) {
    Rng rng(run_seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> s(split.test_pairs.size());
    for (double& v : s) v = u(rng);
    return s;
  }
  const auto emb = embed(a, split, hp, run_seed);
  return score_dot(emb.U, split.test_pairs);
}

struct Realization {
  int split_index = 0;
  int run_index = 0;
  std::uint64_t split_seed = 0;
  std::uint64_t run_seed = 0;
  double auc = 0.0;
};

struct ScoreReport {
  Algorithm algorithm = Algorithm::Sine;
  Hyperparams hp;
  std::vector<Realization> realizations;  // split-major order
  double mean_auc = 0.0;
  double std_auc = 0.0;  // sample standard deviation

  // Standard deviation over runs within one split.
  double split_std(int split_index) const {
    std::vector<double> v;
    for (const auto& r : realizations)
      if (r.split_index == split_index) v.push_back(r.auc);
    return sample_std(v);
  }

  static double sample_std(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
};

// Seed of split s and of run r within split s under a master seed.
inline std::uint64_t split_seed_for(std::uint64_t master, int s) { return derive_seed(master, 1, s); }
inline std::uint64_t run_seed_for(std::uint64_t master, int s, int r) {
  return derive_seed(master, 2, s, r);
}

inline std::vector<EvalSplit> make_splits(const TemporalNetwork& tn, int n_splits,
                                          std::uint64_t master_seed) {
  std::vector<EvalSplit> splits;
  for (int s = 0; s < n_splits; ++s) splits.push_back(make_split(tn, split_seed_for(master_seed, s)));
  return splits;
}

/// Runs fn(0..count-1) on `workers` threads; the first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k; (k = next.fetch_add(1)) < count;) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = count;
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

/// n_splits x n_runs realizations over precomputed splits. Results do not
/// depend on the worker count.
inline ScoreReport run_experiment(const std::vector<EvalSplit>& splits, Algorithm a,
                                  const Hyperparams& hp, int n_runs, std::uint64_t master_seed,
                                  int workers = 1) {
  ScoreReport rep;
  rep.algorithm = a;
  rep.hp = hp;
  const int n_splits = static_cast<int>(splits.size());
  rep.realizations.resize(static_cast<std::size_t>(n_splits) * n_runs);
  parallel_for(rep.realizations.size(), workers, [&](std::size_t k) {
    const int s = static_cast<int>(k) / n_runs;
    const int r = static_cast<int>(k) % n_runs;
    const auto& split = splits[s];
    Realization& out = rep.realizations[k];
    out.split_index = s;
    out.run_index = r;
    out.split_seed = split.split_seed;
    out.run_seed = run_seed_for(master_seed, s, r);
    const auto scores = score_realization(a, split, hp, out.run_seed);
    out.auc = auc(scores, labels_of(split.test_pairs));
  });
  std::vector<double> aucs;
  for (const auto& r : rep.realizations) aucs.push_back(r.auc);
  double sum = 0.0;
  for (double x : aucs) sum += x;
  rep.mean_auc = aucs.empty() ? 0.0 : sum / static_cast<double>(aucs.size());
  rep.std_auc = ScoreReport::sample_std(aucs);
  return rep;
}

inline ScoreReport run_experiment(const TemporalNetwork& tn, Algorithm a, const Hyperparams& hp,
                                  int n_splits = 5, int n_runs = 10, std::uint64_t master_seed = 0,
                                  int workers = 1) {
  return run_experiment(make_splits(tn, n_splits, master_seed), a, hp, n_runs, master_seed, workers);
}

// ---------------------------------------------------------------------------
// Declarative sweeps.

struct Grid {
  std::vector<double> beta{0.001, 0.01, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<std::int64_t> x{10};
  std::vector<double> p{0.01, 0.25, 0.5, 1, 2, 4};
  std::vector<double> q{0.01, 0.25, 0.5, 1, 2, 4};
};

/// Grid points relevant to the algorithm; other axes keep `base` values.
inline std::vector<Hyperparams> expand_grid(Algorithm a, const Grid& grid, const Hyperparams& base) {
  std::vector<Hyperparams> out;
  auto require = [](const auto& axis, const char* name) {
    if (axis.empty()) throw DomainError(std::string("empty grid axis '") + name + "'");
  };
  if (is_spreading(a)) {
    require(grid.beta, "beta");
    require(grid.x, "x");
    for (double b : grid.beta)
      for (auto x : grid.x) {
        Hyperparams hp = base;
        hp.beta = b;
        hp.x = x;
        out.push_back(hp);
      }
  } else if (a == Algorithm::Node2vec) {
    require(grid.p, "p");
    require(grid.q, "q");
    require(grid.x, "x");
    for (double p : grid.p)
      for (double q : grid.q)
        for (auto x : grid.x) {
          Hyperparams hp = base;
          hp.p = p;
          hp.q = q;
          hp.x = x;
          out.push_back(hp);
        }
  } else if (a == Algorithm::Deepwalk || a == Algorithm::Ctdne) {
    require(grid.x, "x");
    for (auto x : grid.x) {
      Hyperparams hp = base;
      hp.x = x;
      out.push_back(hp);
    }
  } else {
    out.push_back(base);
  }
  return out;
}

// Grid axes the algorithm ignores but that were given more than one value.
inline std::vector<std::string> ignored_axes(Algorithm a, const Grid& grid) {
  std::vector<std::string> out;
  const bool spreads = is_spreading(a);
  const bool n2v = a == Algorithm::Node2vec;
  const bool walks = spreads || n2v || a == Algorithm::Deepwalk || a == Algorithm::Ctdne;
  if (!spreads && grid.beta.size() > 1) out.emplace_back("beta");
  if (!n2v && grid.p.size() > 1) out.emplace_back("p");
  if (!n2v && grid.q.size() > 1) out.emplace_back("q");
  if (!walks && grid.x.size() > 1) out.emplace_back("x");
  return out;
}

struct ExperimentSpec {
  std::string dataset;
  EdgeListFormat format;
  std::vector<Algorithm> algorithms{Algorithm::Sine};
  Grid grid;
  Hyperparams base;
  int n_splits = 5;
  int n_runs = 10;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int workers = 1;
  int histogram_bins = 50;
};

inline std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  for (unsigned int k = 0; k < len; ++k) hex += fmt::format("{:02x}", digest[k]);
  return hex;
}

namespace detail {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, std::string_view content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + p.string());
  out << content;
}

}  // namespace detail

/// Writes every file of an experiment into spec.out_dir:
///   results.csv        one row per realization
///   summary.json       mean/std per grid point and the best point per algorithm
///   <alg>_embedding.txt, <alg>_dot_hist.csv, <alg>_degree_dist.csv
///                      diagnostics at the best grid point (embedding algorithms)
///   manifest.json      sha256 of every emitted file and a completeness flag
/// Returns 0 on success. On failure the files written so far are kept,
/// the manifest is marked incomplete, and the error is rethrown.
inline int run(const ExperimentSpec& spec, const std::function<void(const std::string&)>& warn = {}) {
  namespace fs = std::filesystem;
  const fs::path out = spec.out_dir;
  fs::create_directories(out);
  std::vector<std::string> emitted;
  std::string csv = "dataset,algorithm,hyperparams,split_seed,run_seed,auc\n";
  nlohmann::json summary;
  const std::string dataset_name = fs::path(spec.dataset).filename().string();
  summary["dataset"] = dataset_name;
  summary["splits"] = spec.n_splits;
  summary["runs"] = spec.n_runs;
  summary["seed"] = spec.seed;
  summary["algorithms"] = nlohmann::json::object();

  auto flush = [&](bool complete, const std::string& error) {
    detail::write_file(out / "results.csv", csv);
    summary["complete"] = complete;
    detail::write_file(out / "summary.json", summary.dump(2) + "\n");
    nlohmann::json manifest;
    manifest["complete"] = complete;
    if (!error.empty()) manifest["error"] = error;
    manifest["files"] = nlohmann::json::array();
    std::vector<std::string> names{"results.csv", "summary.json"};
    names.insert(names.end(), emitted.begin(), emitted.end());
    for (const auto& name : names) {
      const auto bytes = detail::read_file(out / name);
      manifest["files"].push_back({{"name", name}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
    }
    detail::write_file(out / "manifest.json", manifest.dump(2) + "\n");
  };

  try {
    std::ifstream in(spec.dataset);
    if (!in) throw Error("cannot open dataset '" + spec.dataset + "'");
    const TemporalNetwork tn = load_temporal(in, spec.format);
    const auto splits = make_splits(tn, spec.n_splits, spec.seed);
    if (warn && spec.base.dim >= tn.num_nodes())
      warn(fmt::format("dimension {} reduced to {} (must be below N={})", spec.base.dim,
                       tn.num_nodes() - 1, tn.num_nodes()));

    for (Algorithm a : spec.algorithms) {
      const std::string name(algorithm_name(a));
      if (warn)
        for (const auto& axis : ignored_axes(a, spec.grid))
          warn(fmt::format("grid axis '{}' is ignored by {}", axis, name));
      auto& entry = summary["algorithms"][name];
      entry["grid"] = nlohmann::json::array();
      std::optional<ScoreReport> best;
      std::size_t best_index = 0;
      const auto points = expand_grid(a, spec.grid, spec.base);
      for (std::size_t g = 0; g < points.size(); ++g) {
        auto rep = run_experiment(splits, a, points[g], spec.n_runs, spec.seed, spec.workers);
        for (const auto& r : rep.realizations)
          csv += fmt::format("{},{},{},{},{},{:.10f}\n", dataset_name, name, describe(a, rep.hp),
                             r.split_seed, r.run_seed, r.auc);
        auto j = to_json(a, rep.hp);
        j["mean_auc"] = rep.mean_auc;
        j["std_auc"] = rep.std_auc;
        j["realizations"] = rep.realizations.size();
        entry["grid"].push_back(j);
        if (!best || rep.mean_auc > best->mean_auc) {
          best = std::move(rep);
          best_index = g;
        }
        flush(false, "");
      }
      entry["best"] = {{"index", best_index},
                       {"hyperparams", to_json(a, best->hp)},
                       {"mean_auc", best->mean_auc},
                       {"std_auc", best->std_auc}};

      if (!is_embedding(a)) continue;
      // diagnostics from split 0, run 0 of the best grid point
      const auto& split = splits.front();
      TrajectoryCorpus corpus;
      const auto emb = embed(a, split, best->hp, run_seed_for(spec.seed, 0, 0), &corpus);
      {
        std::ostringstream s;
        write_embedding(s, emb.U, tn.labels());
        detail::write_file(out / (name + "_embedding.txt"), s.str());
        emitted.push_back(name + "_embedding.txt");
      }
      {
        const auto h = dot_product_histogram(emb.U, split.test_pairs, spec.histogram_bins);
        std::string s = "bin_left,bin_right,positive,negative\n";
        for (std::size_t b = 0; b < h.positive.size(); ++b)
          s += fmt::format("{:.9g},{:.9g},{},{}\n", h.edges[b], h.edges[b + 1], h.positive[b],
                           h.negative[b]);
        detail::write_file(out / (name + "_dot_hist.csv"), s);
        emitted.push_back(name + "_dot_hist.csv");
      }
      {
        const auto gs = sampled_network(PairView(corpus, best->hp.omega), tn.num_nodes());
        std::string s = "network,degree,ccdf\n";
        for (auto [k, f] : cumulative_degree_distribution(split.train_static))
          s += fmt::format("training,{},{:.9g}\n", k, f);
        for (auto [k, f] : cumulative_degree_distribution(gs))
          s += fmt::format("sampled,{},{:.9g}\n", k, f);
        detail::write_file(out / (name + "_degree_dist.csv"), s);
        emitted.push_back(name + "_degree_dist.csv");
      }
      const auto positives = split.positives();
      nlohmann::json pcc = nlohmann::json::object();
      for (int l : {2, 3, 4}) {
        try {
          pcc["l" + std::to_string(l)] = pcc_dot_vs_lpath(emb.U, split.train_static, positives, l);
        } catch (const DomainError&) {
          pcc["l" + std::to_string(l)] = nullptr;
        }
      }
      entry["pcc_dot_vs_lpath"] = pcc;
      flush(false, "");
    }
    flush(true, "");
  } catch (const std::exception& e) {
    flush(false, e.what());
    throw;
  }
  return 0;
}

}  // namespace sine
