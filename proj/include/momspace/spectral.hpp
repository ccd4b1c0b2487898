#ifndef MOMSPACE_SPECTRAL_HPP
#define MOMSPACE_SPECTRAL_HPP

#include "momspace/canonical.hpp"
#include "momspace/measures.hpp"

namespace momspace {

// Symmetric tridiagonal Jacobi matrix: diagonal alpha_1..alpha_N,
// off-diagonal sqrt(beta_1)..sqrt(beta_{N-1}).
struct JacobiMatrix {
  std::vector<Real> diagonal;
  std::vector<Real> offdiagonal;

  int size() const { return static_cast<int>(diagonal.size()); }
};

JacobiMatrix jacobi_matrix(const RecurrenceCoefficients& rec, int size);

// Purely atomic spectral measure: atoms at the eigenvalues of J, weights the
// squared first components of the orthonormal eigenvectors. Implemented with
// a symmetric tridiagonal QL sweep with implicit shifts that accumulates only
// the first row of the rotation product.
Measure spectral_measure(const JacobiMatrix& J);

// m_l = (J^l)_{1,1}, l = 1..l_max, by iterated tridiagonal application.
std::vector<Real> moments_from_recurrence(const RecurrenceCoefficients& rec, int l_max);

}  // namespace momspace

#endif
