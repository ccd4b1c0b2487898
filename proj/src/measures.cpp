#include "momspace/measures.hpp"

#include <algorithm>
#include <cmath>

#include "momspace/quadrature.hpp"

namespace momspace {

namespace {

const Real kPi = std::acos(Real(-1));

struct PolyPair {
  std::vector<Polynomial> P;  // monic orthogonal polynomials
  std::vector<Polynomial> Q;  // secondary polynomials (shifted recursion)
};

// P and Q up to order `up_to` for the padded coefficient sequence.
PolyPair orthogonal_system(const TailSpec& spec, int up_to) {
  PolyPair s;
  s.P.resize(up_to + 1);
  s.Q.resize(up_to + 1);
  s.P[0] = Polynomial::constant(1);
  s.Q[0] = Polynomial::constant(0);
  for (int i = 1; i <= up_to; ++i) {
    const Polynomial x_minus_a({-spec.alpha(i), 1});
    const Polynomial& P1 = s.P[i - 1];
    const Polynomial& Q1 = s.Q[i - 1];
    if (i == 1) {
      s.P[1] = x_minus_a;  // (x - alpha_1) * 1
      s.Q[1] = Polynomial::constant(1);
      continue;
    }
    const Real b = spec.beta(i - 1);
    s.P[i] = x_minus_a * P1 - b * s.P[i - 2];
    s.Q[i] = x_minus_a * Q1 - b * s.Q[i - 2];
  }
  return s;
}

Real head_beta_product(const TailSpec& spec) {
  Real h = 1;
  for (int i = 1; i < spec.head_length(); ++i) h *= spec.beta(i);
  return h;
}

}  // namespace

Real TailSpec::alpha(int j) const {
  if (j <= static_cast<int>(head.alphas.size())) return head.alphas[j - 1];
  return tail_alpha;
}

Real TailSpec::beta(int j) const {
  if (j <= static_cast<int>(head.betas.size())) return head.betas[j - 1];
  return tail_beta;
}

Polynomial tail_denominator(const TailSpec& spec) {
  const int j = spec.head_length();
  if (j < 1) throw Error("tail_denominator: head must contain alpha_1");
  const PolyPair s = orthogonal_system(spec, j + 1);
  return (s.P[j] * s.P[j] - s.P[j + 1] * s.P[j - 1]).trimmed(1e-14L);
}

Real Measure::atom_mass() const {
  Real s = 0;
  for (const Atom& a : atoms) s += a.weight;
  return s;
}

Real Measure::ac_mass(int quad_nodes) const {
  if (!ac) return 0;
  return measure_moment(Measure{ac, {}}, 0, quad_nodes);
}

namespace {

// Quadrature of g against the reference part (reference(x) dx on the support,
// denominator excluded; callers put 1/denominator inside g). After the
// substitution x = mid + half*cos(theta) the integrand extends to an even
// 2pi-periodic function, so the midpoint rule converges geometrically and a
// rule of any size costs only its evaluations.
Real reference_integral_fixed(const AbsContPart& ac, const std::function<Real(Real)>& g,
                              int quad_nodes) {
  const Real a = ac.support_lo, b = ac.support_hi;
  if (ac.reference == RefKind::ArcsineLike) return integrate_chebyshev(g, a, b, quad_nodes);
  const Real mid = (a + b) / 2, half = (b - a) / 2;
  auto f = [&](Real th) {
    const Real c = std::cos(th);
    const Real x = mid + half * c;
    const Real s2 = (1 - c) * (1 + c);  // sin^2
    switch (ac.reference) {
      case RefKind::SemicircleLike: return half * half * s2 * g(x);
      case RefKind::MarchenkoPasturLike:
        if (a == 0) return half * (1 - c) * g(x);  // sin^2/x is removable
        return half * half * s2 / x * g(x);
      default: return Real(0);
    }
  };
  Real s = 0;
  for (int i = 0; i < quad_nodes; ++i) s += f(kPi * (2 * i + 1) / (2 * quad_nodes));
  return s * kPi / quad_nodes;
}

// The trig substitutions converge geometrically, but denominator roots close
// to the support slow them down; double the node count until two consecutive
// levels agree.
Real reference_integral(const AbsContPart& ac, const std::function<Real(Real)>& g,
                        int quad_nodes) {
  Real prev = reference_integral_fixed(ac, g, quad_nodes);
  for (int n = 2 * quad_nodes; n <= 65536; n *= 2) {
    const Real cur = reference_integral_fixed(ac, g, n);
    if (std::fabs(cur - prev) <= 1e-12L * std::max<Real>(1, std::fabs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace

Real measure_moment(const Measure& mu, int k, int quad_nodes) {
  if (k < 0) throw Error("measure_moment: k must be >= 0");
  Real s = 0;
  if (mu.ac) {
    const AbsContPart& ac = *mu.ac;
    auto g = [&](Real x) {
      Real xk = 1;
      for (int i = 0; i < k; ++i) xk *= x;
      return xk / ac.denominator(x);
    };
    s += ac.prefactor * reference_integral(ac, g, quad_nodes);
  }
  for (const Atom& a : mu.atoms) {
    Real xk = 1;
    for (int i = 0; i < k; ++i) xk *= a.location;
    s += a.weight * xk;
  }
  return s;
}

std::complex<Real> integrate_kernel(const Measure& mu,
                                    const std::function<std::complex<Real>(Real)>& f,
                                    int quad_nodes) {
  std::complex<Real> s = 0;
  if (mu.ac) {
    const AbsContPart& ac = *mu.ac;
    auto part = [&](auto proj) {
      return reference_integral(
          ac, [&](Real x) { return proj(f(x)) / ac.denominator(x); }, quad_nodes);
    };
    s += ac.prefactor * std::complex<Real>(part([](std::complex<Real> v) { return v.real(); }),
                                           part([](std::complex<Real> v) { return v.imag(); }));
  }
  for (const Atom& a : mu.atoms) s += a.weight * f(a.location);
  return s;
}

Real density_at(const Measure& mu, Real x) {
  if (!mu.ac) throw OutsideSupportError("measure has no absolutely continuous part");
  const AbsContPart& ac = *mu.ac;
  if (!(x > ac.support_lo && x < ac.support_hi))
    throw OutsideSupportError("x outside the open support");
  Real ref = 0;
  const Real root = std::sqrt((x - ac.support_lo) * (ac.support_hi - x));
  switch (ac.reference) {
    case RefKind::ArcsineLike: ref = 1 / root; break;
    case RefKind::SemicircleLike: ref = root; break;
    case RefKind::MarchenkoPasturLike: ref = root / x; break;
  }
  return ac.prefactor * ref / ac.denominator(x);
}

Measure build_tail_constant_measure(const TailSpec& spec) {
  const int j = spec.head_length();
  if (j < 1) throw Error("build_tail_constant_measure: head length must be >= 1");
  if (!(spec.tail_beta > 0)) throw Error("build_tail_constant_measure: tail beta must be > 0");
  const Real alpha = spec.tail_alpha;
  const Real beta = spec.tail_beta;
  const Real lo = alpha - 2 * std::sqrt(beta);
  const Real hi = alpha + 2 * std::sqrt(beta);
  const Real h = head_beta_product(spec);

  const PolyPair sys = orthogonal_system(spec, j + 1);
  const Polynomial D = (sys.P[j] * sys.P[j] - sys.P[j + 1] * sys.P[j - 1]).trimmed(1e-14L);

  Measure mu;
  mu.ac = AbsContPart{RefKind::SemicircleLike, lo, hi, h / (2 * kPi), D};

  // f(x) = Q_j P_j - Q_{j+1} P_{j-1} + h/2 ((x-alpha) - z(x) sqrt((x-alpha)^2 - 4 beta))
  auto f_at = [&](Real x) {
    const Real zx = x > alpha ? 1 : -1;
    const Real rad = std::sqrt(std::max<Real>(0, (x - alpha) * (x - alpha) - 4 * beta));
    return sys.Q[j](x) * sys.P[j](x) - sys.Q[j + 1](x) * sys.P[j - 1](x) +
           h / 2 * ((x - alpha) - zx * rad);
  };

  Real root_scale = std::max<Real>(1, std::max(std::fabs(lo), std::fabs(hi)));
  const auto roots = real_roots(D);
  for (Real r : roots) root_scale = std::max(root_scale, std::fabs(r));
  const Real boundary_tol = 1e-9L * root_scale;
  const Real cluster_tol = 1e-6L * root_scale;
  const Polynomial Dp = D.derivative();

  for (std::size_t i = 0; i < roots.size();) {
    // cluster nearby roots: their multiplicity decides the weight formula
    std::size_t e = i + 1;
    while (e < roots.size() && roots[e] - roots[e - 1] <= cluster_tol) ++e;
    Real x0 = 0;
    for (std::size_t u = i; u < e; ++u) x0 += roots[u];
    x0 /= Real(e - i);
    const std::size_t multiplicity = e - i;
    i = e;

    if (x0 >= lo - boundary_tol && x0 <= hi + boundary_tol) continue;  // boundary or interior
    Real weight;
    if (multiplicity == 1 && std::fabs(Dp(x0)) > 1e-10L * root_scale) {
      weight = std::fabs(f_at(x0) / Dp(x0));
    } else {
      // limit along a shrinking sequence on the side away from the support
      const Real dir = x0 < lo ? -1 : 1;
      Real prev = kInf, cur = kInf;
      for (int expo = 3; expo <= 7; ++expo) {
        const Real d = std::pow(Real(10), -Real(expo)) * root_scale;
        const Real x = x0 + dir * d;
        prev = cur;
        cur = std::fabs(d * f_at(x) / D(x));
      }
      if (!(std::fabs(cur - prev) <= 1e-6L * std::max<Real>(1, cur)))
        throw DegenerateRootError("atom weight limit did not stabilize at a multiple root");
      weight = cur;
    }
    if (weight >= 1e-10L) mu.atoms.push_back({x0, weight});
  }
  std::sort(mu.atoms.begin(), mu.atoms.end(),
            [](const Atom& a, const Atom& b) { return a.location < b.location; });
  return mu;
}

Polynomial bs01_denominator(const std::vector<Real>& p) {
  const int r = static_cast<int>(p.size());
  if (r == 0) return Polynomial::constant(1);
  const int j = (r + 4) / 2;
  // pad the canonical prefix with 1/2 far enough for P_j
  std::vector<Real> padded = p;
  padded.resize(2 * j - 1, 0.5L);
  const CanonicalCoordinates coords{Domain::Interval01, padded};
  const RecurrenceCoefficients rec = canonical_to_recurrence(coords);
  TailSpec spec{rec, 0.5L, 1.0L / 16};
  const PolyPair sys = orthogonal_system(spec, j);

  const Polynomial x_shift({-0.5L, 1});  // x - 1/2
  const Polynomial lhs = sys.P[j] - 0.5L * (x_shift * sys.P[j - 1]);
  const Polynomial x1mx({0, 1, -1});  // x(1-x)
  Polynomial D = lhs * lhs + 0.25L * (x1mx * (sys.P[j - 1] * sys.P[j - 1]));

  // D has simple zeros at 0 and 1; factor out x(1-x)
  Real max_c = 0;
  for (Real c : D.coeffs) max_c = std::max(max_c, std::fabs(c));
  Real rem0 = 0, rem1 = 0;
  Polynomial R = D.deflate(0, &rem0).deflate(1, &rem1);
  if (std::fabs(rem0) > 1e-12L * max_c || std::fabs(rem1) > 1e-12L * max_c)
    throw Error("bs01_denominator: D(0)/D(1) do not vanish");
  // deflation divided by x(x-1) = -x(1-x)
  R = (r % 2 == 0 ? Real(-16) : Real(-4)) * R;
  // degree(R_r) <= r; anything above is numerical dust
  std::vector<Real> c = R.coeffs;
  for (std::size_t i = r + 1; i < c.size(); ++i) {
    if (std::fabs(c[i]) > 1e-9L * std::max<Real>(1, max_c))
      throw Error("bs01_denominator: unexpected degree");
  }
  c.resize(r + 1, 0);
  return Polynomial(std::move(c));
}

Measure build_bs01_measure(const std::vector<Real>& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!(p[i] > 0 && p[i] < 1))
      throw OutOfRangeError("canonical moment outside (0,1)", static_cast<int>(i) + 1);
  Real prod = 1;
  for (Real v : p) prod *= v * (1 - v);
  Measure mu;
  mu.ac = AbsContPart{RefKind::ArcsineLike, 0, 1, prod / kPi, bs01_denominator(p)};
  return mu;
}

std::complex<Real> stieltjes_transform(const TailSpec& spec, std::complex<Real> z) {
  if (!(z.imag() > 0)) throw Error("stieltjes_transform: Im z must be > 0");
  const Real alpha = spec.tail_alpha;
  const Real beta = spec.tail_beta;
  // sqrt branch with positive imaginary part
  std::complex<Real> w = (z - alpha) * (z - alpha) - 4 * beta;
  std::complex<Real> rad = std::sqrt(w);
  if (rad.imag() < 0) rad = -rad;
  const std::complex<Real> s_tail = (z - alpha - rad) / (2 * beta);
  const int j = spec.head_length();
  std::complex<Real> t = z - spec.alpha(j) - beta * s_tail;
  for (int i = j - 1; i >= 1; --i) t = z - spec.alpha(i) - spec.beta(i) / t;
  return Real(1) / t;
}

}  // namespace momspace
