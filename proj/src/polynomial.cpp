#include "momspace/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace momspace {

int Polynomial::degree() const {
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i)
    if (coeffs[i] != 0) return i;
  return -1;
}

Real Polynomial::leading() const {
  int d = degree();
  return d < 0 ? 0 : coeffs[d];
}

Real Polynomial::operator()(Real x) const {
  Real v = 0;
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) v = v * x + coeffs[i];
  return v;
}

std::complex<Real> Polynomial::operator()(std::complex<Real> x) const {
  std::complex<Real> v = 0;
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) v = v * x + coeffs[i];
  return v;
}

Polynomial Polynomial::derivative() const {
  if (coeffs.size() <= 1) return Polynomial();
  std::vector<Real> d(coeffs.size() - 1);
  for (std::size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = Real(i) * coeffs[i];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::trimmed(Real tol) const {
  Real m = 0;
  for (Real c : coeffs) m = std::max(m, std::fabs(c));
  std::vector<Real> c = coeffs;
  while (c.size() > 1 && std::fabs(c.back()) <= tol * m) c.pop_back();
  return Polynomial(std::move(c));
}

Polynomial Polynomial::deflate(Real r, Real* remainder) const {
  int d = degree();
  if (d < 1) {
    if (remainder) *remainder = d == 0 ? coeffs[0] : 0;
    return Polynomial();
  }
  std::vector<Real> q(d);
  Real carry = coeffs[d];
  for (int i = d - 1; i >= 0; --i) {
    q[i] = carry;
    carry = coeffs[i] + r * carry;
  }
  if (remainder) *remainder = carry;
  return Polynomial(std::move(q));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Real> c(std::max(a.coeffs.size(), b.coeffs.size()), 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) c[i] += b.coeffs[i];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<Real> c(std::max(a.coeffs.size(), b.coeffs.size()), 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i) c[i] += a.coeffs[i];
  for (std::size_t i = 0; i < b.coeffs.size(); ++i) c[i] -= b.coeffs[i];
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  std::vector<Real> c(a.coeffs.size() + b.coeffs.size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs.size(); ++j) c[i + j] += a.coeffs[i] * b.coeffs[j];
  return Polynomial(std::move(c));
}

Polynomial operator*(Real s, const Polynomial& a) {
  std::vector<Real> c = a.coeffs;
  for (Real& x : c) x *= s;
  return Polynomial(std::move(c));
}

std::vector<std::complex<Real>> polynomial_roots(const Polynomial& p) {
  const Polynomial q = p.trimmed(1e-14L);
  const int d = q.degree();
  std::vector<std::complex<Real>> roots;
  if (d < 1) return roots;
  if (d == 1) {
    roots.push_back(std::complex<Real>(-q.coeffs[0] / q.coeffs[1], 0));
    return roots;
  }

  // Companion matrix in double precision; the eigenvalues only seed Newton.
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(d, d);
  const Real lead = q.coeffs[d];
  for (int i = 0; i < d; ++i) C(i, d - 1) = static_cast<double>(-q.coeffs[i] / lead);
  for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(C, /*computeEigenvectors=*/false);

  const Polynomial dq = q.derivative();
  for (int i = 0; i < d; ++i) {
    std::complex<Real> z(es.eigenvalues()(i).real(), es.eigenvalues()(i).imag());
    for (int it = 0; it < 60; ++it) {
      std::complex<Real> f = q(z);
      std::complex<Real> df = dq(z);
      if (std::abs(df) == 0) break;
      std::complex<Real> step = f / df;
      z -= step;
      if (std::abs(step) <= 1e-20L * (Real(1) + std::abs(z))) break;
    }
    roots.push_back(z);
  }
  std::sort(roots.begin(), roots.end(), [](auto a, auto b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

std::vector<Real> real_roots(const Polynomial& p, Real im_tol) {
  const auto roots = polynomial_roots(p);
  Real scale = 1;
  for (auto z : roots) scale = std::max(scale, std::abs(z));
  std::vector<Real> out;
  for (auto z : roots)
    if (std::fabs(z.imag()) < im_tol * scale) out.push_back(z.real());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace momspace
