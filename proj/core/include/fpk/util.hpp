#ifndef FPK_UTIL_HPP
#define FPK_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fpk/errors.hpp"

namespace fpk {

/// A point in R^d, d in {1,2}. Unused components stay zero.
struct Vec {
  double c[2]{0.0, 0.0};
  int d{1};

  Vec() = default;
  explicit Vec(double x) : d(1) { c[0] = x; }
  Vec(double x, double y) : d(2) {
    c[0] = x;
    c[1] = y;
  }

  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }

  double dot(const Vec& o) const {
    double s = c[0] * o.c[0];
    if (d == 2) s += c[1] * o.c[1];
    return s;
  }
  double norm_sq() const { return dot(*this); }
  double norm() const { return std::sqrt(norm_sq()); }
};

inline Vec operator+(Vec a, const Vec& b) {
  a.c[0] += b.c[0];
  a.c[1] += b.c[1];
  return a;
}
inline Vec operator*(double s, Vec a) {
  a.c[0] *= s;
  a.c[1] *= s;
  return a;
}

/// Deterministic random numbers. The generator state and the mappings to
/// uniform/normal variates are pinned here (not delegated to the standard
/// library distributions, whose output is implementation-defined), so a seed
/// reproduces byte-identical streams on any platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Standard normal via polar Box-Muller (deterministic, no cached spare).
  double normal() {
    for (;;) {
      const double u = 2.0 * uniform01() - 1.0;
      const double v = 2.0 * uniform01() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

private:
  std::uint64_t state_;
};

/// Pairwise (tree) summation: deterministic shape independent of any
/// partitioning of the outer loop, and more accurate than naive accumulation.
double pairwise_sum(std::span<const double> v);

/// Sum of f(i) for i in [0, n), accumulated pairwise over fixed-size blocks.
double indexed_sum(std::size_t n, const std::function<double(std::size_t)>& f);

/// Worker cap from FPK_THREADS (>= 1); defaults to 1 when unset or invalid.
int worker_count();

/// Minimize a 1-d continuous function over [lo, hi] by iterated grid zoom
/// around a coarse argmin. Deterministic; refines to machine resolution for
/// smooth objectives. Returns the located minimizer through `arg`.
double refine_min(const std::function<double(double)>& f, double coarse_arg, double lo,
                  double hi, double step, double* arg = nullptr);

}  // namespace fpk

#endif
