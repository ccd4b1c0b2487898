#ifndef MOMSPACE_LIMITS_HPP
#define MOMSPACE_LIMITS_HPP

#include <functional>
#include <optional>
#include <vector>

#include "momspace/canonical.hpp"
#include "momspace/measures.hpp"
#include "momspace/optimize.hpp"

namespace momspace {

// Potentials V_1..V_m acting on canonical coordinates. For indices beyond the
// list, functions repeat with matching parity (the usual two-function setup
// V_odd, V_even is the m = 2 case).
struct PotentialSpec {
  Domain domain = Domain::RealLine;
  std::vector<std::function<Real(Real)>> functions;
  bool growth_ok = false;

  const std::function<Real(Real)>& function_for(int j) const;
  Real V(int j, Real y) const { return function_for(j)(y); }
  // W_j = V_j - log(domain factor): log(y(1-y)) on [0,1], log y on the half
  // line and at even real-line indices, nothing at odd real-line indices.
  Real W(int j, Real y) const;
};

// Integrability check: V(y) >= (2+eps) log|y| (resp. (1+eps) for odd
// real-line indices) sampled at |y| in {1e2,1e3,1e4}, eps = 0.01.
// Interval01 has nothing to check.
bool check_growth(Domain domain, const std::vector<std::function<Real(Real)>>& functions);

PotentialSpec make_potential(Domain domain, std::vector<std::function<Real(Real)>> functions);

struct Minimizer {
  CanonicalCoordinates head;  // y_1..y_{i_k}, constrained entries filled
  Real weight = 1;
  Measure measure;
};

struct LimitResult {
  Domain domain = Domain::Interval01;
  Constraint constraint;
  std::vector<Minimizer> minimizers;
  Real tail_odd = 0.5L;   // limiting coordinate at odd indices > i_k
  Real tail_even = 0.5L;  // limiting coordinate at even indices > i_k
  std::optional<Mat> covariance;  // Sigma_l, filled on request
};

// K(mu^0 | mu) = -sum log(4 p_i (1-p_i))  (sum rule).
Real kl_arcsine(const std::vector<Real>& p);

// sum log(4 p_j q_j) = log(4^n (m_{n+1}^+ - m_{n+1}^-)); -inf on boundary or
// outside the moment space.
Real range_objective(const MomentVector& m);

// Barycenter of the uniform distribution on M_n^C([0,1]): the KL minimizer,
// a Bernstein-Szego measure with head coordinates maximizing the feasible
// range and tail 1/2.
LimitResult solve_uniform_limit(const Constraint& constraint);

// Concentration points of P^C_{n,E,V} for generic potentials: multistart
// minimization of sum W_j over the feasible head block, Laplace weights
// R(theta) det Hess^{-1/2}, measures with eventually constant coefficients.
LimitResult solve_general_limits(const PotentialSpec& potential, const Constraint& constraint,
                                 Domain domain);

// Asymptotic covariance of sqrt(n)(m_1..m_l - m(mu^C)); rows/columns at
// constrained indices are zero, rank l-k.
Mat clt_covariance_uniform(const LimitResult& limit, int l, const Constraint& constraint);
Mat clt_covariance_general(const LimitResult& limit, int l, const Constraint& constraint,
                           const PotentialSpec& potential, int minimizer_index = 0);

// LDP rate functions, shifted to vanish at the barycenter; +inf outside the
// constrained moment space.
Real rate_eval_uniform(const MomentVector& m, const Constraint& constraint);
Real rate_eval_general(const MomentVector& m, const PotentialSpec& potential,
                       const Constraint& constraint);

// MDP rate: 1/2 x^t Sigma_l x on {x_{i_j} = 0}, +inf off the subspace.
Real mdp_rate(const Vec& x, const Constraint& constraint, const Mat& sigma_l);

enum class VolumeRegime { Exponential, Polynomial };

struct VolumeRatioResult {
  Real asymptotic = 0;  // leading-order value of vol(M_n^C)/vol(M_n) at this n
  VolumeRegime regime = VolumeRegime::Exponential;
};

// Leading-order relative volume of the constrained moment space; regime is
// Polynomial iff the constraint pins arcsine moments.
VolumeRatioResult volume_ratio(const Constraint& constraint, int n);

// vol(M_n([0,1])) = prod_{m=1}^n B(m,m).
Real volume_unconstrained(int n);

// l-th moment of the arcsine law: (2l-1)!!/(2l)!!.
Real arcsine_moment(int l);

}  // namespace momspace

#endif
