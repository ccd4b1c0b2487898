#ifndef MOMSPACE_OPTIMIZE_HPP
#define MOMSPACE_OPTIMIZE_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "momspace/common.hpp"

namespace momspace {

using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

using ObjectiveFn = std::function<Real(const Vec&)>;

// Central finite differences, step h = base * max(1,|x_i|) per coordinate.
Vec fd_gradient(const ObjectiveFn& f, const Vec& x, Real base = 1e-5L);
// Nested central differences; result symmetrized.
Mat fd_hessian(const ObjectiveFn& f, const Vec& x, Real base = 1e-4L);

struct MinimizeResult {
  Vec x;
  Real value = kInf;
  bool converged = false;
};

// Derivative-free Nelder-Mead; infeasible points may return +inf.
MinimizeResult nelder_mead(const ObjectiveFn& f, const Vec& x0, Real scale = 0.1L,
                           int max_iter = 4000, Real tol = 1e-12L);

// Newton with backtracking line search on an FD gradient/Hessian; falls back
// to steepest descent when the Hessian is not positive definite. The
// objective may be +inf outside the feasible set.
MinimizeResult newton_minimize(const ObjectiveFn& f, const Vec& x0, int max_iter = 200,
                               Real grad_tol = 1e-8L, Real step_tol = 1e-10L);

// Brent minimization on [a,b].
struct Brent1DResult {
  Real x = 0;
  Real value = kInf;
};
Brent1DResult brent_min(const std::function<Real(Real)>& f, Real a, Real b, Real tol = 1e-14L);

// Grid scan followed by Brent refinement; returns all local minima found on
// the grid whose value ties the global minimum within value_tol, sorted by x.
std::vector<Brent1DResult> grid_minimize(const std::function<Real(Real)>& f, Real a, Real b,
                                         int grid = 1024, Real value_tol = 1e-9L);

// Halton low-discrepancy sequence point (index i >= 0) in [0,1]^dim.
std::vector<Real> halton_point(int i, int dim);

}  // namespace momspace

#endif
