#include "momspace/rng.hpp"

#include <cmath>

namespace momspace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t chain, std::uint64_t purpose) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (chain + 1) + 0xbf58476d1ce4e5b9ULL * (purpose + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double RngStream::u01() {
  // 53-bit mantissa, strictly inside (0,1)
  const std::uint64_t r = eng_() >> 11;
  return (static_cast<double>(r) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2 * u01() - 1;
    v = 2 * u01() - 1;
    s = u * u + v * v;
  } while (s >= 1 || s == 0);
  const double f = std::sqrt(-2 * std::log(s) / s);
  spare_ = v * f;
  have_spare_ = true;
  return u * f;
}

double RngStream::gamma(double shape) {
  if (shape < 1) {
    // boost via gamma(shape+1) * U^{1/shape}
    const double g = gamma(shape + 1);
    return g * std::pow(u01(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3;
  const double c = 1 / std::sqrt(9 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1 + c * x;
    } while (v <= 0);
    v = v * v * v;
    const double u = u01();
    if (u < 1 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1 - v + std::log(v))) return d * v;
  }
}

double RngStream::beta(double a, double b) {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

}  // namespace momspace
