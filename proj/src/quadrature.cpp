#include "momspace/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace momspace {

static QuadRule compute_gl(int n) {
  QuadRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const Real pi = std::acos(Real(-1));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real x = std::cos(pi * (Real(i) + 0.75L) / (Real(n) + 0.5L));
    Real dp = 0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence for P_n(x) and P'_n(x)
      Real p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      Real dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    Real w = 2 / ((1 - x * x) * dp * dp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

const QuadRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gl(n)).first;
  return it->second;
}

Real integrate_gl(const std::function<Real(Real)>& f, Real a, Real b, int n) {
  const QuadRule& r = gauss_legendre(n);
  const Real mid = (a + b) / 2, half = (b - a) / 2;
  Real s = 0;
  for (int i = 0; i < n; ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
  return s * half;
}

Real integrate_chebyshev(const std::function<Real(Real)>& g, Real a, Real b, int n) {
  const Real pi = std::acos(Real(-1));
  const Real mid = (a + b) / 2, half = (b - a) / 2;
  Real s = 0;
  for (int i = 0; i < n; ++i) {
    Real t = std::cos(pi * (2 * i + 1) / (2 * n));
    s += g(mid + half * t);
  }
  return s * pi / n;
}

}  // namespace momspace
