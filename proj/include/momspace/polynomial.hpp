#ifndef MOMSPACE_POLYNOMIAL_HPP
#define MOMSPACE_POLYNOMIAL_HPP

#include <complex>
#include <vector>

#include "momspace/common.hpp"

namespace momspace {

// Dense polynomial, coefficients in ascending degree. The zero polynomial is
// represented by {0} (or an empty vector, treated the same).
struct Polynomial {
  std::vector<Real> coeffs;

  Polynomial() : coeffs{0} {}
  explicit Polynomial(std::vector<Real> c) : coeffs(std::move(c)) {
    if (coeffs.empty()) coeffs.push_back(0);
  }
  static Polynomial constant(Real c) { return Polynomial({c}); }
  // x - r
  static Polynomial linear(Real r) { return Polynomial({-r, 1}); }

  int degree() const;  // -1 for the zero polynomial
  bool is_zero() const { return degree() < 0; }
  Real leading() const;

  Real operator()(Real x) const;
  std::complex<Real> operator()(std::complex<Real> x) const;

  Polynomial derivative() const;
  // Drop trailing coefficients below |tol| * max|coeff|.
  Polynomial trimmed(Real tol = 0) const;

  // Synthetic division by (x - r). Returns quotient, stores the remainder.
  Polynomial deflate(Real r, Real* remainder = nullptr) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Real s, const Polynomial& a);
};

// All complex roots via balanced companion-matrix eigenvalues followed by a
// few Newton polishing steps in extended precision.
std::vector<std::complex<Real>> polynomial_roots(const Polynomial& p);

// Real roots only; eigenvalues with |Im| < im_tol * scale count as real.
std::vector<Real> real_roots(const Polynomial& p, Real im_tol = 1e-8L);

}  // namespace momspace

#endif
