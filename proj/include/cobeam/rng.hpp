#pragma once

// Seeded random source with pinned transforms.  mt19937_64 gives a portable
// u64 stream; uniform and normal variates are derived from it with fixed
// arithmetic (53-bit mantissa scaling, Box-Muller) instead of the standard
// library distributions, whose output is implementation-defined.  Regression
// fixtures and byte-reproducible experiment output depend on this.

#include <cstdint>
#include <random>

#include "cobeam/model.hpp"

namespace cobeam {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Decorrelated child seed for a named stream (splitmix64 mixing); used to
  // give every trial/topology/channel draw its own independent generator.
  static std::uint64_t derive(std::uint64_t master, std::uint64_t stream);

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal (Box-Muller, caches the second variate).
  double normal();

  // Circularly symmetric complex normal; variance split evenly between the
  // real and imaginary parts.
  cxd cnormal(double variance);
  Vec cnormal_vec(int n, double variance);

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cobeam
