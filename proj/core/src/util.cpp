#include "fpk/util.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace fpk {

double pairwise_sum(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

double indexed_sum(std::size_t n, const std::function<double(std::size_t)>& f) {
  std::vector<double> buf(n);
  for (std::size_t i = 0; i < n; ++i) buf[i] = f(i);
  return pairwise_sum(buf);
}

int worker_count() {
  const char* env = std::getenv("FPK_THREADS");
  if (!env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || v < 1) return 1;
  return static_cast<int>(std::min<long>(v, 256));
}

double refine_min(const std::function<double(double)>& f, double coarse_arg, double lo,
                  double hi, double step, double* arg) {
  double best_x = coarse_arg;
  double best = f(coarse_arg);
  double s = step;
  for (int round = 0; round < 80 && s > 0.0; ++round) {
    const double a = std::max(lo, best_x - s);
    const double b = std::min(hi, best_x + s);
    constexpr int kPoints = 9;
    for (int i = 0; i <= kPoints; ++i) {
      const double x = a + (b - a) * static_cast<double>(i) / kPoints;
      const double y = f(x);
      if (y < best) {
        best = y;
        best_x = x;
      }
    }
    s *= 0.5;
  }
  if (arg) *arg = best_x;
  return best;
}

}  // namespace fpk
