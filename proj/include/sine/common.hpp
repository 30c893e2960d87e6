#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace sine {

using NodeId = std::int32_t;
using Timestamp = std::int64_t;
using Rng = std::mt19937_64;

inline constexpr NodeId kNoNode = -1;

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyNetworkError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NoContactError : public Error {
 public:
  using Error::Error;
};

class InsufficientNegativesError : public Error {
 public:
  using Error::Error;
};

class NonFiniteError : public Error {
 public:
  using Error::Error;
};

// splitmix64 finalizer, used for counter-based seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Derives an independent seed from a master seed and a sequence of counters.
// derive_seed(m, a, b) == derive_seed(derive_seed(m, a), b).
constexpr std::uint64_t derive_seed(std::uint64_t master) noexcept { return master; }

template <typename... Rest>
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t first,
                                    Rest... rest) noexcept {
  return derive_seed(mix64(master ^ mix64(first + 0x632BE59BD9B4E019ULL)), rest...);
}

// Uniform integer in [0, n).
template <typename Int>
Int uniform_index(Rng& rng, Int n) {
  return std::uniform_int_distribution<Int>(0, n - 1)(rng);
}

inline bool bernoulli(Rng& rng, double p) {
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

}  // namespace sine
