#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace nlop {

/// Compensated accumulator. Deterministic: the value depends only on the
/// order of add() calls.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double v) {
    double y = v - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

/// Normalization constant of the direction integral: chosen so that the
/// standard fractional-Laplacian angular density gives direction constant 1
/// in every dimension.  Z(s) = Gamma(s) Gamma(1-s) / Gamma(1+2s).
inline double direction_normalization(double s) {
  return std::tgamma(s) * std::tgamma(1.0 - s) / std::tgamma(1.0 + 2.0 * s);
}

/// Constant c(n,s) of the fractional Laplacian written as a principal-value
/// integral against c(n,s)|h|^{-n-2s}.
inline double frac_laplacian_constant(int n, double s) {
  // |Gamma(-s)| = Gamma(1-s)/s
  double num = std::pow(4.0, s) * std::tgamma(0.5 * n + s) * s;
  double den = std::pow(M_PI, 0.5 * n) * std::tgamma(1.0 - s);
  return num / den;
}

/// 15-point Gauss-Legendre on [a,b].
double gauss15(const std::function<double(double)>& f, double a, double b);

/// Adaptive bisection quadrature built on gauss15; absolute tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth = 18);

/// Counter-based 64-bit generator (splitmix64 over seed+counter); a fixed
/// (seed, counter) pair always yields the same stream.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed ^ (stream * 0x9e3779b97f4a7c15ull)) {}

  std::uint64_t next_u64() {
    std::uint64_t z = seed_ + (++counter_) * 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0,1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [a,b).
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

}  // namespace nlop
