// Command-line driver: dataset validation, corpus sampling, pair dumps,
// embedding export and the full link-prediction experiment.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "sine/sine.hpp"

namespace {

using sine::Algorithm;

struct Options {
  std::string config;
  std::string dataset;
  int time_col = 2;
  std::vector<std::string> algorithms;
  std::vector<double> beta;
  std::vector<std::int64_t> x;
  std::vector<double> p;
  std::vector<double> q;
  int omega = 10;
  int dim = 128;
  std::int64_t m_max = 0;
  int l_max = 20;
  int negatives = 5;
  int epochs = 1;
  std::string ctdne_bias = "uniform";
  int splits = 5;
  int runs = 10;
  std::uint64_t seed = 0;
  std::string out = "out";
  int workers = 1;
};

// Registers the shared experiment flags; every flag can also come from SINE_<NAME>.
struct FlagSet {
  std::vector<std::pair<std::string, CLI::Option*>> flags;

  template <typename T>
  CLI::Option* add(CLI::App& app, const std::string& name, T& target, const std::string& help) {
    std::string env = "SINE_" + name;
    for (char& c : env) c = c == '-' ? '_' : static_cast<char>(std::toupper(c));
    auto* opt = app.add_option("--" + name, target, help)->envname(env);
    flags.emplace_back(name, opt);
    return opt;
  }

  bool given(const std::string& name) const {
    for (const auto& [n, opt] : flags)
      if (n == name) return opt->count() > 0;
    return false;
  }
};

void add_experiment_flags(CLI::App& app, Options& o, FlagSet& f) {
  f.add(app, "dataset", o.dataset, "edge list \"i j t\"");
  f.add(app, "time-col", o.time_col, "zero-based timestamp column (default 2)");
  f.add(app, "algorithm", o.algorithms,
        "sine, tsine1, tsine2, deepwalk, node2vec, ctdne, l2, l3, l4, random (comma-separated)")
      ->delimiter(',');
  f.add(app, "beta", o.beta, "infection probabilities")->delimiter(',');
  f.add(app, "x", o.x, "budget multipliers, B = N*X")->delimiter(',');
  f.add(app, "p", o.p, "node2vec return parameters")->delimiter(',');
  f.add(app, "q", o.q, "node2vec in-out parameters")->delimiter(',');
  f.add(app, "omega", o.omega, "context window (default 10)");
  f.add(app, "dim", o.dim, "embedding dimension (default 128)");
  f.add(app, "m-max", o.m_max, "path quota control, 0 = 10*N");
  f.add(app, "l-max", o.l_max, "path / walk length cap (default 20)");
  f.add(app, "negatives", o.negatives, "negative samples per pair (default 5)");
  f.add(app, "epochs", o.epochs, "training epochs (default 1)");
  f.add(app, "ctdne-bias", o.ctdne_bias, "uniform or exponential");
  f.add(app, "splits", o.splits, "train/test splits (default 5)");
  f.add(app, "runs", o.runs, "runs per split (default 10)");
  f.add(app, "seed", o.seed, "master seed");
  f.add(app, "out", o.out, "output directory or file");
  f.add(app, "workers", o.workers, "worker threads, 1 = reference mode");
}

// Values from the JSON config apply only where no flag (or env var) was given.
void apply_config(const std::string& path, Options& o, const FlagSet& f) {
  std::ifstream in(path);
  if (!in) throw sine::Error("cannot open config '" + path + "'");
  const auto j = nlohmann::json::parse(in);
  auto take = [&](const char* key, auto& target) {
    if (j.contains(key) && !f.given(key)) j.at(key).get_to(target);
  };
  take("dataset", o.dataset);
  take("time-col", o.time_col);
  if (j.contains("algorithm") && !f.given("algorithm")) {
    if (j["algorithm"].is_string())
      o.algorithms = {j["algorithm"].get<std::string>()};
    else
      j["algorithm"].get_to(o.algorithms);
  }
  take("beta", o.beta);
  take("x", o.x);
  take("p", o.p);
  take("q", o.q);
  take("omega", o.omega);
  take("dim", o.dim);
  take("m-max", o.m_max);
  take("l-max", o.l_max);
  take("negatives", o.negatives);
  take("epochs", o.epochs);
  take("ctdne-bias", o.ctdne_bias);
  take("splits", o.splits);
  take("runs", o.runs);
  take("seed", o.seed);
  take("out", o.out);
  take("workers", o.workers);
}

sine::ExperimentSpec to_spec(const Options& o) {
  sine::ExperimentSpec spec;
  spec.dataset = o.dataset;
  spec.format.time_column = o.time_col;
  if (!o.algorithms.empty()) {
    spec.algorithms.clear();
    for (const auto& a : o.algorithms) spec.algorithms.push_back(sine::parse_algorithm(a));
  }
  if (!o.beta.empty()) spec.grid.beta = o.beta;
  if (!o.x.empty()) spec.grid.x = o.x;
  if (!o.p.empty()) spec.grid.p = o.p;
  if (!o.q.empty()) spec.grid.q = o.q;
  auto& hp = spec.base;
  hp.omega = o.omega;
  hp.dim = o.dim;
  hp.m_max = o.m_max;
  hp.l_max = o.l_max;
  hp.negatives = o.negatives;
  hp.epochs = o.epochs;
  if (o.ctdne_bias == "exponential")
    hp.ctdne_bias = sine::TemporalBias::Exponential;
  else if (o.ctdne_bias != "uniform")
    throw sine::DomainError("unknown ctdne bias '" + o.ctdne_bias + "'");
  // single-shot commands use the first given value, not the first grid point
  if (!o.beta.empty()) hp.beta = o.beta.front();
  if (!o.x.empty()) hp.x = o.x.front();
  if (!o.p.empty()) hp.p = o.p.front();
  if (!o.q.empty()) hp.q = o.q.front();
  spec.n_splits = o.splits;
  spec.n_runs = o.runs;
  spec.out_dir = o.out;
  spec.seed = o.seed;
  spec.workers = o.workers;
  return spec;
}

sine::TemporalNetwork load(const sine::ExperimentSpec& spec) {
  std::ifstream in(spec.dataset);
  if (!in) throw sine::Error("cannot open dataset '" + spec.dataset + "'");
  return sine::load_temporal(in, spec.format);
}

// Corpus for a single algorithm on the whole network (no split).
sine::TrajectoryCorpus sample_whole(const sine::TemporalNetwork& tn, const sine::ExperimentSpec& spec) {
  const Algorithm a = spec.algorithms.front();
  if (!sine::is_embedding(a))
    throw sine::DomainError(fmt::format("{} does not sample a corpus", sine::algorithm_name(a)));
  sine::EvalSplit whole;
  whole.train_temporal = tn;
  whole.train_static = sine::aggregate(tn);
  return sine::sample_training_corpus(a, whole, spec.base, sine::derive_seed(spec.seed, 1));
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw sine::Error("cannot write '" + path + "'");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SI-spreading network embedding and link-prediction toolkit"};
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "print summary statistics of an edge list");
  validate->add_option("path", o.dataset, "edge list")->required();
  validate->add_option("--time-col", o.time_col, "zero-based timestamp column (default 2)");

  FlagSet run_flags, sample_flags, embed_flags;
  auto* run = app.add_subcommand("run", "run the link-prediction experiment over a grid");
  run->add_option("--config", o.config, "JSON spec; flags override its values");
  add_experiment_flags(*run, o, run_flags);

  auto* sample = app.add_subcommand("sample", "write a trajectory corpus, one path per line");
  add_experiment_flags(*sample, o, sample_flags);

  std::string corpus_path;
  auto* pairs = app.add_subcommand("pairs", "dump center/context pairs of a corpus as TSV");
  pairs->add_option("--dataset", o.dataset, "edge list the corpus labels refer to")->required();
  pairs->add_option("--time-col", o.time_col, "zero-based timestamp column (default 2)");
  pairs->add_option("--corpus", corpus_path, "corpus file")->required();
  pairs->add_option("--omega", o.omega, "context window (default 10)");
  pairs->add_option("--out", o.out, "output file")->required();

  auto* embed = app.add_subcommand("embed", "train an embedding on the whole network");
  add_experiment_flags(*embed, o, embed_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      sine::ExperimentSpec spec;
      spec.dataset = o.dataset;
      spec.format.time_column = o.time_col;
      const auto tn = load(spec);
      const auto s = sine::stats(tn, sine::aggregate(tn));
      std::cout << "N,T,contacts,E,link_density,avg_degree,clustering\n"
                << fmt::format("{},{},{},{},{:.4f},{:.2f},{:.4f}\n", s.n_nodes, s.n_timestamps,
                               s.n_contacts, s.n_edges, s.link_density, s.avg_degree,
                               s.clustering_coefficient);
      return 0;
    }
    if (*pairs) {
      sine::ExperimentSpec spec;
      spec.dataset = o.dataset;
      spec.format.time_column = o.time_col;
      const auto tn = load(spec);
      std::ifstream in(corpus_path);
      if (!in) throw sine::Error("cannot open corpus '" + corpus_path + "'");
      const auto corpus = sine::read_corpus(in, tn);
      auto out = open_out(o.out);
      sine::write_pairs_tsv(out, sine::PairView(corpus, o.omega), tn.labels());
      return 0;
    }
    if (*run) {
      if (!o.config.empty()) apply_config(o.config, o, run_flags);
      if (o.dataset.empty()) throw sine::Error("no dataset given");
      const auto spec = to_spec(o);
      return sine::run(spec, [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; });
    }
    const auto spec = to_spec(o);
    const auto tn = load(spec);
    if (*sample) {
      const auto corpus = sample_whole(tn, spec);
      auto out = open_out(o.out);
      sine::write_corpus(out, corpus, tn.labels());
      return 0;
    }
    if (*embed) {
      const auto corpus = sample_whole(tn, spec);
      sine::TrainConfig tc;
      tc.dim = sine::effective_dim(spec.base, tn.num_nodes());
      tc.negatives = spec.base.negatives;
      tc.epochs = spec.base.epochs;
      tc.rng_seed = sine::derive_seed(spec.seed, 2);
      const auto emb = sine::train(sine::PairView(corpus, spec.base.omega), tn.num_nodes(), tc);
      auto out = open_out(o.out);
      sine::write_embedding(out, emb.U, tn.labels());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
