#pragma once
// Deterministic random streams.  Every stochastic routine takes an explicit
// stream object; stream seeds are derived from a master seed plus integer
// coordinates (scenario, batch size, trial index, ...) via splitmix64, so a
// given draw does not depend on worker count or on what ran before it.
//
// Normal variates use an explicit Box-Muller transform instead of
// std::normal_distribution: the standard leaves that distribution's algorithm
// unspecified, and byte-identical outputs across library versions are part of
// the reproducibility contract.

#include <cmath>
#include <cstdint>
#include <random>

namespace qrs {

// splitmix64: the standard 64-bit finalizer-based generator step.  Used only
// for seed derivation (it decorrelates consecutive/related inputs well).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Mix a master seed with up to three stream coordinates.  Feeding each
// coordinate through a separate splitmix64 round keeps distinct tuples
// distinct with overwhelming probability.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = splitmix64(master ^ 0x243f6a8885a308d3ULL);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ b);
  s = splitmix64(s ^ c);
  return s;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the second variate of each pair is
  // cached, so draws come in deterministic (cos, sin) pairs.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();  // log(0) guard
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Bernoulli(p) as uniform() < p.
  bool bernoulli(double p) { return uniform() < p; }

  // Index sampled from a normalized weight vector by inversion.
  template <class Vec>
  std::size_t categorical(const Vec& weights) {
    double u = uniform();
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) return i;
    }
    return weights.size() - 1;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qrs
