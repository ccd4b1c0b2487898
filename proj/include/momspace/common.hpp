#ifndef MOMSPACE_COMMON_HPP
#define MOMSPACE_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace momspace {

// Working scalar of the numeric core. Moment coordinates at depth ~12 carry
// more information than a 53-bit mantissa can hold (the feasible width of
// m_12 shrinks below 1e-9), so the library stores and transports moments in
// extended precision. Conversion kernels that are cancellation-prone run in
// __float128 internally (see canonical.cpp).
using Real = long double;

constexpr Real kInf = std::numeric_limits<Real>::infinity();

enum class Domain { Interval01, HalfLine, RealLine };

std::string to_string(Domain d);
Domain domain_from_string(const std::string& s);

// Admissible set D_j for the j-th canonical coordinate.
// Interval01: (0,1); HalfLine: (0,inf); RealLine: R for odd j, (0,inf) even.
bool coordinate_in_domain(Domain d, int j, Real y);

// Signed distance of y_j from the boundary of D_j (RealLine odd -> +inf).
Real coordinate_margin(Domain d, int j, Real y);

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IndexedError : Error {
  int index;
  IndexedError(const std::string& what, int idx) : Error(what), index(idx) {}
};

struct OutOfRangeError : IndexedError {
  using IndexedError::IndexedError;
};
struct NotAMomentVectorError : IndexedError {
  using IndexedError::IndexedError;
};
struct InfeasibleError : IndexedError {
  using IndexedError::IndexedError;
};
struct NotAdmissibleError : Error {
  using Error::Error;
};
struct NonIntegrableError : Error {
  using Error::Error;
};
struct DegenerateMinimizerError : Error {
  using Error::Error;
};
struct ChainNotConvergedError : Error {
  using Error::Error;
};
struct DegenerateRootError : Error {
  using Error::Error;
};
struct OutsideSupportError : Error {
  using Error::Error;
};

// Moment constraint {m_{i_1}=c_{i_1}, ..., m_{i_k}=c_{i_k}}, indices strictly
// increasing. k = 0 is the unconstrained case.
struct Constraint {
  struct Entry {
    int index = 0;
    Real value = 0;
  };
  std::vector<Entry> entries;

  Constraint() = default;
  explicit Constraint(std::vector<Entry> e);

  int k() const { return static_cast<int>(entries.size()); }
  // Largest constrained index i_k (0 when empty).
  int max_index() const { return entries.empty() ? 0 : entries.back().index; }
  bool constrains(int j) const;
  // Constrained value at moment index j; throws if j is unconstrained.
  Real value_at(int j) const;
  // d_{j,C} = #{l : i_l > j}.
  int deficiency(int j) const;
};

inline bool near(Real a, Real b, Real tol) {
  return std::fabs(a - b) <= tol * std::max<Real>(Real(1), std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace momspace

#endif
