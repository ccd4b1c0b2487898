#ifndef MOMSPACE_QUADRATURE_HPP
#define MOMSPACE_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "momspace/common.hpp"

namespace momspace {

struct QuadRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};

// Gauss-Legendre on [-1,1]; nodes by Newton on P_n, cached per n.
const QuadRule& gauss_legendre(int n);

// integral of f over [a,b] with an n-point Gauss-Legendre rule
Real integrate_gl(const std::function<Real(Real)>& f, Real a, Real b, int n = 256);

// integral of g(x)/sqrt((x-a)(b-x)) over [a,b] (Gauss-Chebyshev, first kind)
Real integrate_chebyshev(const std::function<Real(Real)>& g, Real a, Real b, int n = 256);

}  // namespace momspace

#endif
