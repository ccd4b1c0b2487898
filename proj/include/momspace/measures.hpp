#ifndef MOMSPACE_MEASURES_HPP
#define MOMSPACE_MEASURES_HPP

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "momspace/canonical.hpp"
#include "momspace/polynomial.hpp"

namespace momspace {

// Reference density families of the absolutely continuous part:
//   ArcsineLike:          1 / sqrt((x-a)(b-x))
//   SemicircleLike:       sqrt((x-a)(b-x))
//   MarchenkoPasturLike:  sqrt((x-a)(b-x)) / x
// density(x) = prefactor * reference(x) / denominator(x) on (a,b).
enum class RefKind { ArcsineLike, SemicircleLike, MarchenkoPasturLike };

struct AbsContPart {
  RefKind reference = RefKind::ArcsineLike;
  Real support_lo = 0;
  Real support_hi = 1;
  Real prefactor = 1;
  Polynomial denominator = Polynomial::constant(1);
};

struct Atom {
  Real location = 0;
  Real weight = 0;
};

struct Measure {
  std::optional<AbsContPart> ac;
  std::vector<Atom> atoms;

  Real ac_mass(int quad_nodes = 256) const;
  Real atom_mass() const;
  Real total_mass(int quad_nodes = 256) const { return ac_mass(quad_nodes) + atom_mass(); }
};

// Eventually constant recurrence coefficients: alpha_l = tail_alpha and
// beta_{l-1} = tail_beta for every l > head.alphas.size().
struct TailSpec {
  RecurrenceCoefficients head;
  Real tail_alpha = 0;
  Real tail_beta = 0.25L;

  int head_length() const { return static_cast<int>(head.alphas.size()); }
  // alpha_j / beta_j of the padded sequence (1-based)
  Real alpha(int j) const;
  Real beta(int j) const;
};

// Measure with the given eventually constant coefficients: semicircle-type
// density h_{j-1} sqrt(4b-(x-a)^2) / (2 pi D(x)) on [a-2sqrt(b), a+2sqrt(b)]
// plus atoms |f(x_i)/D'(x_i)| at the real roots of D outside the interval.
Measure build_tail_constant_measure(const TailSpec& spec);

// Bernstein-Szego measure on [0,1] with canonical moments p_1..p_r, 1/2, ...:
// density prod p_i q_i / (pi R_r(x) sqrt(x-x^2)), no atoms.
Measure build_bs01_measure(const std::vector<Real>& p);

// The polynomial R_r of the [0,1] representation (unit constant for r = 0).
Polynomial bs01_denominator(const std::vector<Real>& p);

// D(x) = P_j^2 - P_{j+1} P_{j-1} of the padded sequence.
Polynomial tail_denominator(const TailSpec& spec);

// Finite continued fraction terminated by the closed-form constant-tail
// transform S_{a,b}(z) = (z - a - sqrt((z-a)^2 - 4b)) / (2b); Im z > 0.
std::complex<Real> stieltjes_transform(const TailSpec& spec, std::complex<Real> z);

// k-th moment: quadrature of the ac part + atom sum.
Real measure_moment(const Measure& mu, int k, int quad_nodes = 256);

// Integral of an arbitrary complex-valued kernel against the measure
// (used for Stieltjes quadrature cross-checks).
std::complex<Real> integrate_kernel(const Measure& mu,
                                    const std::function<std::complex<Real>(Real)>& f,
                                    int quad_nodes = 512);

// Density of the ac part at x; throws OutsideSupportError off the open support.
Real density_at(const Measure& mu, Real x);

}  // namespace momspace

#endif
