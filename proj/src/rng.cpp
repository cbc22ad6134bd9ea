#include "cobeam/rng.hpp"

#include <cmath>

namespace cobeam {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t Rng::derive(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(splitmix64(master) ^
                    splitmix64(stream * 0x9E3779B97F4A7C15ull + 1));
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = kTwoPi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

cxd Rng::cnormal(double variance) {
  const double s = std::sqrt(0.5 * variance);
  const double re = s * normal();
  const double im = s * normal();
  return {re, im};
}

Vec Rng::cnormal_vec(int n, double variance) {
  Vec v(n);
  for (int k = 0; k < n; ++k) {
    v(k) = cnormal(variance);
  }
  return v;
}

}  // namespace cobeam
