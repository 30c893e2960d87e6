#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sine/common.hpp"
#include "sine/graph.hpp"

namespace sine {

using Path = std::vector<NodeId>;

// Ordered trajectory paths plus their total length in nodes.
struct TrajectoryCorpus {
  std::vector<Path> paths;
  std::size_t total_length = 0;

  void append(Path p) {
    total_length += p.size();
    paths.push_back(std::move(p));
  }

  friend bool operator==(const TrajectoryCorpus&, const TrajectoryCorpus&) = default;
};

// One path per line, node labels separated by single spaces.
inline void write_corpus(std::ostream& out, const TrajectoryCorpus& corpus,
                         const std::vector<std::string>& labels) {
  for (const auto& p : corpus.paths) {
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) out << ' ';
      out << labels.at(p[k]);
    }
    out << '\n';
  }
}

inline TrajectoryCorpus read_corpus(std::istream& in, const TemporalNetwork& tn) {
  TrajectoryCorpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    Path p;
    std::string label;
    try {
      while (fields >> label) p.push_back(tn.id_of(label));
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
    if (!p.empty()) corpus.append(std::move(p));
  }
  return corpus;
}

}  // namespace sine
