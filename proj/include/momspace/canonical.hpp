#ifndef MOMSPACE_CANONICAL_HPP
#define MOMSPACE_CANONICAL_HPP

#include <optional>
#include <utility>
#include <vector>

#include "momspace/common.hpp"

namespace momspace {

// Ordinary moments (m_1,...,m_n) of a probability measure on the domain.
struct MomentVector {
  Domain domain = Domain::Interval01;
  std::vector<Real> values;

  int size() const { return static_cast<int>(values.size()); }
};

// Canonical coordinates (y_1,...,y_n):
//   Interval01: p_j in (0,1);  HalfLine: z_j > 0;
//   RealLine:   alpha_1, beta_1, alpha_2, ... interleaved, beta > 0.
struct CanonicalCoordinates {
  Domain domain = Domain::Interval01;
  std::vector<Real> values;

  int size() const { return static_cast<int>(values.size()); }
  bool valid() const;
};

// Three-term recurrence P_j(x) = (x - alpha_j) P_{j-1}(x) - beta_{j-1} P_{j-2}(x).
// betas has length alphas.size()-1 or alphas.size(), depending on how many
// coefficients the source prefix determines.
struct RecurrenceCoefficients {
  std::vector<Real> alphas;
  std::vector<Real> betas;
};

// moments_to_recurrence stops at the first beta_j <= tol and reports the
// coefficients found so far.
struct BoundaryError : IndexedError {
  RecurrenceCoefficients partial;
  BoundaryError(const std::string& what, int idx, RecurrenceCoefficients p)
      : IndexedError(what, idx), partial(std::move(p)) {}
};

enum class MomentClass { Interior, Boundary, NotAMomentVector };

struct MomentClassification {
  MomentClass cls = MomentClass::Interior;
  int index = 0;  // first failing beta index (Boundary / NotAMomentVector)
};

// ---- transforms ----

RecurrenceCoefficients canonical_to_recurrence(const CanonicalCoordinates& coords);

CanonicalCoordinates recurrence_to_canonical(const RecurrenceCoefficients& rec, Domain domain);

// Classical moments -> recurrence via Gram-Schmidt on the monomial basis.
// Hankel conditioning degrades exponentially with depth; the kernel runs in
// __float128, which keeps the full depth n <= 12 reliable. Boundary tolerance:
// beta_j <= 1e-12 * max(1, |m|_inf^2).
RecurrenceCoefficients moments_to_recurrence(const MomentVector& m);
MomentClassification classify_moments(const MomentVector& m);

// Forward map via the Jacobi matrix: m_l = (J^l)_{1,1}.
MomentVector canonical_to_moments(const CanonicalCoordinates& coords);
CanonicalCoordinates moments_to_canonical(const MomentVector& m);

// Range [m_{n+1}^-, m_{n+1}^+] of the next moment given m interior.
// HalfLine: m_plus = +inf. RealLine: both infinite.
std::pair<Real, Real> moment_range(const MomentVector& m);

// Feasible width m_{n+1}^+ - m_{n+1}^- on Interval01, as the product
// prod p_j(1-p_j) over the coordinate prefix.
Real range_width(const CanonicalCoordinates& coords);

// Insert the constrained coordinates into an unconstrained block: y_{i_j} is
// solved from the affine relation m_{i_j} = c_{i_j}; throws InfeasibleError
// when a solved coordinate leaves its admissible set.
CanonicalCoordinates constrained_fill(const std::vector<Real>& partial,
                                      const Constraint& constraint, Domain domain);

// log of |det d m^C / d y^C| for the constrained parametrization:
//   Interval01: sum (n-j-d_{j,C}) log(p_j q_j)
//   HalfLine:   sum (n-j-d_{j,C}) log(z_j)
//   RealLine:   sum over even j of (n-j-d_{j,C}) log(beta_{j/2})
// Returns -inf on boundary coordinates.
Real log_jacobian(const CanonicalCoordinates& coords, int n, const Constraint& constraint);

// True iff the constrained slice meets the interior of the moment space;
// decided by maximizing the interiority margin over the unconstrained block
// (16 deterministic low-discrepancy starts, Nelder-Mead).
bool is_admissible(const Constraint& constraint, Domain domain);

// Margin-maximizing interior point of the head block (y_1..y_{i_k}), used to
// seed optimizers and samplers. Throws NotAdmissibleError.
CanonicalCoordinates admissible_interior_point(const Constraint& constraint, Domain domain);

}  // namespace momspace

#endif
