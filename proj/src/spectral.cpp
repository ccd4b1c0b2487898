#include "momspace/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace momspace {

JacobiMatrix jacobi_matrix(const RecurrenceCoefficients& rec, int size) {
  if (size < 1) throw Error("jacobi_matrix: size must be >= 1");
  if (static_cast<int>(rec.alphas.size()) < size ||
      static_cast<int>(rec.betas.size()) < size - 1)
    throw Error("jacobi_matrix: not enough recurrence coefficients");
  JacobiMatrix J;
  J.diagonal.assign(rec.alphas.begin(), rec.alphas.begin() + size);
  J.offdiagonal.resize(size - 1);
  for (int i = 0; i < size - 1; ++i) {
    if (!(rec.betas[i] > 0)) throw Error("jacobi_matrix: beta_" + std::to_string(i + 1) + " <= 0");
    J.offdiagonal[i] = std::sqrt(rec.betas[i]);
  }
  return J;
}

// QL with implicit shifts; z accumulates the first row of the eigenvector
// product, so weights come out as z_i^2 without forming the full basis.
Measure spectral_measure(const JacobiMatrix& J) {
  const int n = J.size();
  std::vector<Real> d = J.diagonal;
  std::vector<Real> e(n, 0);
  for (int i = 0; i < n - 1; ++i) e[i] = J.offdiagonal[i];
  std::vector<Real> z(n, 0);
  z[0] = 1;

  const Real eps = std::numeric_limits<Real>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const Real dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 100) throw Error("spectral_measure: QL did not converge");
        Real g = (d[l + 1] - d[l]) / (2 * e[l]);
        Real r = std::hypot(g, Real(1));
        g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::fabs(r) : -std::fabs(r)));
        Real s = 1, c = 1, p = 0;
        int i = m - 1;
        bool underflow = false;
        for (; i >= l; --i) {
          Real f = s * e[i];
          Real b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0) {
            d[i + 1] -= p;
            e[m] = 0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          f = z[i + 1];
          z[i + 1] = s * z[i] + c * f;
          z[i] = c * z[i] - s * f;
        }
        if (underflow && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0;
      }
    } while (m != l);
  }

  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] < d[b]; });
  Measure mu;
  mu.atoms.reserve(n);
  for (int i : idx) mu.atoms.push_back({d[i], z[i] * z[i]});
  return mu;
}

std::vector<Real> moments_from_recurrence(const RecurrenceCoefficients& rec, int l_max) {
  // Transfer-matrix form (superdiagonal 1, subdiagonal beta): diagonally
  // similar to the symmetric J, so the (1,1) entries of powers agree and no
  // square roots enter.
  const int nb = static_cast<int>(rec.betas.size());
  const int N = nb + 1;
  std::vector<Real> alpha_pad(N, 0);
  for (int i = 0; i < N && i < static_cast<int>(rec.alphas.size()); ++i)
    alpha_pad[i] = rec.alphas[i];
  std::vector<Real> v(N, 0), w(N, 0), m(l_max);
  v[0] = 1;
  for (int step = 1; step <= l_max; ++step) {
    for (int i = 0; i < N; ++i) {
      Real acc = alpha_pad[i] * v[i];
      if (i > 0) acc += rec.betas[i - 1] * v[i - 1];
      if (i + 1 < N) acc += v[i + 1];
      w[i] = acc;
    }
    std::swap(v, w);
    m[step - 1] = v[0];
  }
  return m;
}

}  // namespace momspace
