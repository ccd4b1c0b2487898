#include "momspace/optimize.hpp"

#include <algorithm>
#include <cmath>

namespace momspace {

Vec fd_gradient(const ObjectiveFn& f, const Vec& x, Real base) {
  const int n = static_cast<int>(x.size());
  Vec g(n);
  Vec xp = x;
  for (int i = 0; i < n; ++i) {
    const Real h = base * std::max<Real>(1, std::fabs(x[i]));
    xp[i] = x[i] + h;
    const Real fp = f(xp);
    xp[i] = x[i] - h;
    const Real fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2 * h);
  }
  return g;
}

Mat fd_hessian(const ObjectiveFn& f, const Vec& x, Real base) {
  const int n = static_cast<int>(x.size());
  Mat H(n, n);
  Vec xp = x;
  const Real f0 = f(x);
  std::vector<Real> h(n);
  for (int i = 0; i < n; ++i) h[i] = base * std::max<Real>(1, std::fabs(x[i]));
  for (int i = 0; i < n; ++i) {
    xp[i] = x[i] + h[i];
    const Real fp = f(xp);
    xp[i] = x[i] - h[i];
    const Real fm = f(xp);
    xp[i] = x[i];
    H(i, i) = (fp - 2 * f0 + fm) / (h[i] * h[i]);
    for (int j = i + 1; j < n; ++j) {
      xp[i] = x[i] + h[i];
      xp[j] = x[j] + h[j];
      const Real fpp = f(xp);
      xp[j] = x[j] - h[j];
      const Real fpm = f(xp);
      xp[i] = x[i] - h[i];
      const Real fmm = f(xp);
      xp[j] = x[j] + h[j];
      const Real fmp = f(xp);
      xp[i] = x[i];
      xp[j] = x[j];
      const Real v = (fpp - fpm - fmp + fmm) / (4 * h[i] * h[j]);
      H(i, j) = v;
      H(j, i) = v;
    }
  }
  return H;
}

MinimizeResult nelder_mead(const ObjectiveFn& f, const Vec& x0, Real scale, int max_iter,
                           Real tol) {
  const int n = static_cast<int>(x0.size());
  MinimizeResult res;
  if (n == 0) {
    res.x = x0;
    res.value = f(x0);
    res.converged = true;
    return res;
  }
  std::vector<Vec> pts(n + 1, x0);
  std::vector<Real> val(n + 1);
  for (int i = 0; i < n; ++i)
    pts[i + 1][i] += scale * std::max<Real>(1, std::fabs(x0[i]));
  for (int i = 0; i <= n; ++i) val[i] = f(pts[i]);

  auto order = [&] {
    for (int i = 1; i <= n; ++i)
      for (int j = i; j > 0 && val[j] < val[j - 1]; --j) {
        std::swap(val[j], val[j - 1]);
        std::swap(pts[j], pts[j - 1]);
      }
  };
  order();
  for (int it = 0; it < max_iter; ++it) {
    if (std::isfinite(val[n]) &&
        val[n] - val[0] <= tol * (std::fabs(val[0]) + tol) &&
        (pts[n] - pts[0]).cwiseAbs().maxCoeff() <= tol * (1 + pts[0].cwiseAbs().maxCoeff()))
      break;
    Vec centroid = Vec::Zero(n);
    for (int i = 0; i < n; ++i) centroid += pts[i];
    centroid /= Real(n);
    Vec xr = centroid + (centroid - pts[n]);
    Real fr = f(xr);
    if (fr < val[0]) {
      Vec xe = centroid + 2 * (centroid - pts[n]);
      Real fe = f(xe);
      if (fe < fr) {
        pts[n] = xe;
        val[n] = fe;
      } else {
        pts[n] = xr;
        val[n] = fr;
      }
    } else if (fr < val[n - 1]) {
      pts[n] = xr;
      val[n] = fr;
    } else {
      Vec xc = centroid + 0.5L * (pts[n] - centroid);
      Real fc = f(xc);
      if (fc < val[n]) {
        pts[n] = xc;
        val[n] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          pts[i] = pts[0] + 0.5L * (pts[i] - pts[0]);
          val[i] = f(pts[i]);
        }
      }
    }
    order();
  }
  res.x = pts[0];
  res.value = val[0];
  res.converged = std::isfinite(val[0]);
  return res;
}

MinimizeResult newton_minimize(const ObjectiveFn& f, const Vec& x0, int max_iter, Real grad_tol,
                               Real step_tol) {
  MinimizeResult res;
  res.x = x0;
  res.value = f(x0);
  if (x0.size() == 0 || !std::isfinite(res.value)) {
    res.converged = x0.size() == 0 && std::isfinite(res.value);
    return res;
  }
  for (int it = 0; it < max_iter; ++it) {
    Vec g = fd_gradient(f, res.x);
    if (g.cwiseAbs().maxCoeff() < grad_tol) {
      res.converged = true;
      break;
    }
    Mat H = fd_hessian(f, res.x);
    Vec dir;
    Eigen::LDLT<Mat> ldlt(H);
    bool usable = ldlt.info() == Eigen::Success && ldlt.isPositive();
    if (usable) {
      dir = -ldlt.solve(g);
      if (dir.dot(g) >= 0) usable = false;  // not a descent direction
    }
    if (!usable) dir = -g;
    // backtracking line search; infinity outside the feasible region simply
    // rejects the step
    Real t = 1;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls, t /= 2) {
      Vec xn = res.x + t * dir;
      Real fn = f(xn);
      if (std::isfinite(fn) && fn < res.value - 1e-4L * t * std::fabs(dir.dot(g))) {
        res.x = xn;
        res.value = fn;
        moved = true;
        break;
      }
      if (std::isfinite(fn) && fn < res.value) {
        res.x = xn;
        res.value = fn;
        moved = true;
        break;
      }
    }
    if (!moved || t * dir.cwiseAbs().maxCoeff() < step_tol * (1 + res.x.cwiseAbs().maxCoeff())) {
      res.converged = true;
      break;
    }
  }
  return res;
}

Brent1DResult brent_min(const std::function<Real(Real)>& f, Real a, Real b, Real tol) {
  const Real gold = 0.3819660112501051L;
  Real x = a + gold * (b - a), w = x, v = x;
  Real fx = f(x), fw = fx, fv = fx;
  Real d = 0, e = 0;
  for (int it = 0; it < 200; ++it) {
    const Real m = (a + b) / 2;
    const Real tol1 = tol * std::fabs(x) + 1e-18L;
    const Real tol2 = 2 * tol1;
    if (std::fabs(x - m) <= tol2 - (b - a) / 2) break;
    bool parabolic = false;
    if (std::fabs(e) > tol1) {
      Real r = (x - w) * (fx - fv);
      Real q = (x - v) * (fx - fw);
      Real p = (x - v) * q - (x - w) * r;
      q = 2 * (q - r);
      if (q > 0) p = -p;
      q = std::fabs(q);
      if (std::fabs(p) < std::fabs(q * e / 2) && p > q * (a - x) && p < q * (b - x)) {
        e = d;
        d = p / q;
        parabolic = true;
      }
    }
    if (!parabolic) {
      e = (x < m) ? b - x : a - x;
      d = gold * e;
    }
    Real u = (std::fabs(d) >= tol1) ? x + d : x + (d > 0 ? tol1 : -tol1);
    Real fu = f(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return {x, fx};
}

std::vector<Brent1DResult> grid_minimize(const std::function<Real(Real)>& f, Real a, Real b,
                                         int grid, Real value_tol) {
  std::vector<Real> xs(grid + 1), vs(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    xs[i] = a + (b - a) * Real(i) / grid;
    vs[i] = f(xs[i]);
  }
  std::vector<Brent1DResult> minima;
  for (int i = 1; i < grid; ++i) {
    if (std::isfinite(vs[i]) && vs[i] <= vs[i - 1] && vs[i] <= vs[i + 1]) {
      auto r = brent_min(f, xs[i - 1], xs[i + 1]);
      minima.push_back(r);
    }
  }
  if (minima.empty()) return minima;
  Real best = kInf;
  for (const auto& m : minima) best = std::min(best, m.value);
  std::vector<Brent1DResult> global;
  for (const auto& m : minima)
    if (m.value <= best + value_tol * std::max<Real>(1, std::fabs(best))) global.push_back(m);
  std::sort(global.begin(), global.end(), [](auto& l, auto& r) { return l.x < r.x; });
  // merge refinements that converged to the same point
  std::vector<Brent1DResult> out;
  for (const auto& m : global)
    if (out.empty() || std::fabs(m.x - out.back().x) > 1e-7L * (1 + std::fabs(m.x)))
      out.push_back(m);
  return out;
}

std::vector<Real> halton_point(int i, int dim) {
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  std::vector<Real> p(dim);
  for (int d = 0; d < dim; ++d) {
    const int base = primes[d % 16];
    Real f = 1, r = 0;
    for (int k = i + 1; k > 0; k /= base) {
      f /= base;
      r += f * (k % base);
    }
    p[d] = r;
  }
  return p;
}

}  // namespace momspace
