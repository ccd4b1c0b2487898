#include "momspace/canonical.hpp"

#include <algorithm>
#include <cmath>

#include "momspace/optimize.hpp"

namespace momspace {

namespace {

// Cancellation-prone kernels run in quadruple precision: the Hankel map m ->
// (alpha, beta) at depth 12 loses ~11 digits to conditioning, which would eat
// the whole long double mantissa but leaves __float128 with plenty of room.
using Quad = __float128;

inline Real to_real(Quad x) { return static_cast<Real>(x); }

// ---- zeta chain ----
// Interval01: zeta_1 = p_1, zeta_j = (1-p_{j-1}) p_j; HalfLine: zeta_j = z_j.
// alpha_j = zeta_{2j-2} + zeta_{2j-1} (zeta_0 = 0), beta_j = zeta_{2j-1} zeta_{2j}.

template <typename T>
std::vector<T> zeta_chain(Domain domain, const std::vector<T>& y) {
  const int n = static_cast<int>(y.size());
  std::vector<T> zeta(n + 1);
  zeta[0] = 0;
  T q_prev = 1;
  for (int j = 1; j <= n; ++j) {
    if (domain == Domain::Interval01) {
      zeta[j] = q_prev * y[j - 1];
      q_prev = T(1) - y[j - 1];
    } else {
      zeta[j] = y[j - 1];
    }
  }
  return zeta;
}

template <typename T>
void recurrence_from_coords(Domain domain, const std::vector<T>& y, std::vector<T>& alphas,
                            std::vector<T>& betas) {
  const int n = static_cast<int>(y.size());
  alphas.clear();
  betas.clear();
  if (domain == Domain::RealLine) {
    for (int j = 0; j < n; ++j)
      (j % 2 == 0 ? alphas : betas).push_back(y[j]);
    return;
  }
  const std::vector<T> zeta = zeta_chain(domain, y);
  for (int j = 1; 2 * j - 1 <= n; ++j) alphas.push_back((2 * j - 2 >= 1 ? zeta[2 * j - 2] : T(0)) + zeta[2 * j - 1]);
  for (int j = 1; 2 * j <= n; ++j) betas.push_back(zeta[2 * j - 1] * zeta[2 * j]);
}

// Inverse chain; throws OutOfRangeError when a solved coordinate leaves D_j.
template <typename T>
std::vector<T> coords_from_recurrence(Domain domain, const std::vector<T>& alphas,
                                      const std::vector<T>& betas) {
  const int na = static_cast<int>(alphas.size());
  const int nb = static_cast<int>(betas.size());
  std::vector<T> y;
  if (domain == Domain::RealLine) {
    for (int j = 0; j < na || j < nb; ++j) {
      if (j < na) y.push_back(alphas[j]);
      if (j < nb) {
        if (!(betas[j] > 0)) throw OutOfRangeError("beta out of range", 2 * (j + 1));
        y.push_back(betas[j]);
      }
    }
    return y;
  }
  // zeta_{2j-1} = alpha_j - zeta_{2j-2}; zeta_{2j} = beta_j / zeta_{2j-1}
  std::vector<T> zeta{T(0)};
  const int n_coords = std::max(2 * nb, 2 * na - 1);
  T q_prev = 1;  // 1 - p_{m-1} on Interval01
  for (int m = 1; m <= n_coords; ++m) {
    T zm;
    if (m % 2 == 1) {
      const int j = (m + 1) / 2;
      zm = alphas[j - 1] - zeta[m - 1];
    } else {
      const int j = m / 2;
      if (!(zeta[m - 1] > 0)) throw OutOfRangeError("coordinate out of range", m - 1);
      zm = betas[j - 1] / zeta[m - 1];
    }
    zeta.push_back(zm);
    if (domain == Domain::HalfLine) {
      if (!(zm > 0)) throw OutOfRangeError("coordinate out of range", m);
      y.push_back(zm);
    } else {
      if (!(q_prev > 0)) throw OutOfRangeError("coordinate out of range", m);
      T pm = zm / q_prev;
      if (!(pm > 0 && pm < 1)) throw OutOfRangeError("coordinate out of range", m);
      y.push_back(pm);
      q_prev = T(1) - pm;
    }
  }
  return y;
}

// m_l = (J^l)_{1,1} by iterated tridiagonal application of J to e_1, using
// beta directly (J acts as the transfer matrix of the monic recurrence, so no
// square roots are needed: J~ = D J D^{-1} with the same (1,1) powers).
template <typename T>
std::vector<T> jacobi_moments(const std::vector<T>& alphas, const std::vector<T>& betas, int l) {
  // v_{k+1} = J v_k with J_{i,i} = alpha_{i+1}, J_{i,i+1} = 1, J_{i+1,i} = beta_{i+1}
  // (similarity-transformed Jacobi matrix; (J^l)_{11} is unchanged).
  const int nb = static_cast<int>(betas.size());
  const int N = nb + 1;
  std::vector<T> alpha_pad(N, T(0));
  for (int i = 0; i < N && i < static_cast<int>(alphas.size()); ++i) alpha_pad[i] = alphas[i];
  std::vector<T> v(N, T(0)), w(N, T(0));
  v[0] = 1;
  std::vector<T> m(l);
  for (int step = 1; step <= l; ++step) {
    for (int i = 0; i < N; ++i) {
      T acc = alpha_pad[i] * v[i];
      if (i > 0) acc += betas[i - 1] * v[i - 1];
      if (i + 1 < N) acc += v[i + 1];
      w[i] = acc;
    }
    std::swap(v, w);
    m[step - 1] = v[0];
  }
  return m;
}

// Gram-Schmidt on the monomial basis: recurrence from power moments.
// Returns coefficients up to the first beta at/below the boundary tolerance.
struct GsResult {
  std::vector<Quad> alphas;
  std::vector<Quad> betas;
  int stop_index = 0;      // j of first offending beta, 0 = none
  bool negative = false;   // offending beta below -tol
  Quad offending = 0;
};

GsResult moments_gs(const std::vector<Quad>& m_in, Real tol_scaled) {
  const int n = static_cast<int>(m_in.size());
  std::vector<Quad> m(n + 1);
  m[0] = 1;
  for (int i = 0; i < n; ++i) m[i + 1] = m_in[i];

  auto dot = [&](const std::vector<Quad>& a, const std::vector<Quad>& b, int shift) {
    // <x^shift a, b> under the moment functional
    Quad s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) {
        const std::size_t u = i + j + shift;
        if (u <= std::size_t(n)) s += a[i] * b[j] * m[u];
      }
    return s;
  };

  GsResult out;
  std::vector<Quad> P_prev;         // P_{s-1}
  std::vector<Quad> P_cur{Quad(1)}; // P_0
  Quad h_cur = 1;  // h_0 = m_0 = 1
  for (int s = 0;; ++s) {
    if (2 * s > n) break;
    if (s > 0) {
      const Quad h = dot(P_cur, P_cur, 0);
      const Quad beta = h / h_cur;
      if (to_real(beta) <= tol_scaled) {
        out.stop_index = s;
        out.negative = to_real(beta) < -tol_scaled;
        out.offending = beta;
        return out;
      }
      out.betas.push_back(beta);
      h_cur = h;
    }
    if (2 * s + 1 > n) break;
    const Quad alpha = dot(P_cur, P_cur, 1) / h_cur;
    out.alphas.push_back(alpha);
    // P_{s+1} = (x - alpha) P_s - beta_s P_{s-1}
    std::vector<Quad> next(P_cur.size() + 1, Quad(0));
    for (std::size_t i = 0; i < P_cur.size(); ++i) {
      next[i + 1] += P_cur[i];
      next[i] -= alpha * P_cur[i];
    }
    if (s > 0) {
      const Quad beta = out.betas.back();
      for (std::size_t i = 0; i < P_prev.size(); ++i) next[i] -= beta * P_prev[i];
    }
    P_prev = P_cur;
    P_cur = next;
  }
  return out;
}

std::vector<Quad> to_quad(const std::vector<Real>& v) {
  std::vector<Quad> q(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) q[i] = v[i];
  return q;
}

std::vector<Real> to_real_vec(const std::vector<Quad>& v) {
  std::vector<Real> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = to_real(v[i]);
  return r;
}

// Boundary tolerance for beta, which carries the dimension of m_2. Scaling by
// the largest moment would blow up on unbounded domains (m_12 ~ lambda^12),
// so the scale is the second moment itself.
Real boundary_tol(const MomentVector& m) {
  Real scale = 1;
  if (m.size() >= 2) scale = std::max<Real>(1, std::fabs(m.values[1]));
  else if (m.size() == 1) scale = std::max<Real>(1, m.values[0] * m.values[0]);
  return 1e-12L * scale;
}

Real coordinate_factor(Domain d, int j, Real y) {
  switch (d) {
    case Domain::Interval01: return y * (1 - y);
    case Domain::HalfLine: return y;
    case Domain::RealLine: return (j % 2 != 0) ? Real(1) : y;
  }
  return 0;
}

}  // namespace

bool CanonicalCoordinates::valid() const {
  for (int j = 1; j <= size(); ++j)
    if (!coordinate_in_domain(domain, j, values[j - 1])) return false;
  return true;
}

RecurrenceCoefficients canonical_to_recurrence(const CanonicalCoordinates& coords) {
  std::vector<Real> a, b;
  recurrence_from_coords<Real>(coords.domain, coords.values, a, b);
  return {std::move(a), std::move(b)};
}

CanonicalCoordinates recurrence_to_canonical(const RecurrenceCoefficients& rec, Domain domain) {
  if (!rec.betas.empty() &&
      (rec.betas.size() + 1 < rec.alphas.size() || rec.betas.size() > rec.alphas.size()))
    throw Error("inconsistent recurrence coefficient counts");
  const auto y = coords_from_recurrence<Quad>(domain, to_quad(rec.alphas), to_quad(rec.betas));
  return {domain, to_real_vec(y)};
}

RecurrenceCoefficients moments_to_recurrence(const MomentVector& m) {
  const auto gs = moments_gs(to_quad(m.values), boundary_tol(m));
  RecurrenceCoefficients rec{to_real_vec(gs.alphas), to_real_vec(gs.betas)};
  if (gs.stop_index > 0) {
    if (gs.negative)
      throw NotAMomentVectorError("beta_" + std::to_string(gs.stop_index) + " < 0: not a moment vector",
                                  gs.stop_index);
    throw BoundaryError("beta_" + std::to_string(gs.stop_index) + " ~ 0: boundary moment vector",
                        gs.stop_index, std::move(rec));
  }
  return rec;
}

MomentClassification classify_moments(const MomentVector& m) {
  const auto gs = moments_gs(to_quad(m.values), boundary_tol(m));
  if (gs.stop_index == 0) return {MomentClass::Interior, 0};
  return {gs.negative ? MomentClass::NotAMomentVector : MomentClass::Boundary, gs.stop_index};
}

MomentVector canonical_to_moments(const CanonicalCoordinates& coords) {
  const int n = coords.size();
  std::vector<Quad> a, b;
  recurrence_from_coords<Quad>(coords.domain, to_quad(coords.values), a, b);
  if (b.empty()) b.push_back(0);  // n = 1: a 1x1 Jacobi block padded to 2x2
  return {coords.domain, to_real_vec(jacobi_moments<Quad>(a, b, n))};
}

CanonicalCoordinates moments_to_canonical(const MomentVector& m) {
  return recurrence_to_canonical(moments_to_recurrence(m), m.domain);
}

std::pair<Real, Real> moment_range(const MomentVector& m) {
  if (m.domain == Domain::RealLine) return {-kInf, kInf};
  const int n = m.size();
  CanonicalCoordinates coords{m.domain, {}};
  if (n > 0) {
    coords = moments_to_canonical(m);  // throws Boundary / NotAMomentVector
  }
  auto extended = [&](Real boundary_value) {
    CanonicalCoordinates ext = coords;
    ext.values.push_back(boundary_value);
    MomentVector full = canonical_to_moments(ext);
    return full.values.back();
  };
  const Real lo = extended(0);
  if (m.domain == Domain::HalfLine) return {lo, kInf};
  return {lo, extended(1)};
}

Real range_width(const CanonicalCoordinates& coords) {
  if (coords.domain != Domain::Interval01)
    throw Error("range_width is defined for Interval01 coordinates");
  Real w = 1;
  for (Real p : coords.values) w *= p * (1 - p);
  return w;
}

CanonicalCoordinates constrained_fill(const std::vector<Real>& partial,
                                      const Constraint& constraint, Domain domain) {
  const int n = static_cast<int>(partial.size()) + constraint.k();
  if (constraint.max_index() > n)
    throw Error("constraint index exceeds coordinate length");
  CanonicalCoordinates coords{domain, {}};
  coords.values.reserve(n);
  std::size_t next_free = 0;
  for (int j = 1; j <= n; ++j) {
    if (!constraint.constrains(j)) {
      coords.values.push_back(partial[next_free++]);
      continue;
    }
    const Real target = constraint.value_at(j);
    // m_j is affine in y_j with slope prod_{i<j} factor_i
    Real slope = 1;
    for (int i = 1; i < j; ++i)
      slope *= coordinate_factor(domain, i, coords.values[i - 1]);
    const Real probe = domain == Domain::Interval01 ? 0.5L
                     : domain == Domain::HalfLine   ? 1.0L
                     : (j % 2 != 0 ? 0.0L : 1.0L);
    CanonicalCoordinates prefix{domain, coords.values};
    prefix.values.push_back(probe);
    const Real m_probe = canonical_to_moments(prefix).values.back();
    if (slope == 0) throw InfeasibleError("degenerate slope at index " + std::to_string(j), j);
    const Real y = probe + (target - m_probe) / slope;
    if (!coordinate_in_domain(domain, j, y))
      throw InfeasibleError("solved coordinate y_" + std::to_string(j) + " outside its domain", j);
    coords.values.push_back(y);
  }
  return coords;
}

Real log_jacobian(const CanonicalCoordinates& coords, int n, const Constraint& constraint) {
  if (coords.size() < n - 1)
    throw Error("log_jacobian needs at least n-1 coordinates");
  Real s = 0;
  for (int j = 1; j <= std::min(n, coords.size()); ++j) {
    if (coords.domain == Domain::RealLine && j % 2 != 0) continue;
    const int expo = n - j - constraint.deficiency(j);
    if (expo == 0) continue;
    const Real f = coordinate_factor(coords.domain, j, coords.values[j - 1]);
    if (f <= 0) return -kInf;
    s += Real(expo) * std::log(f);
  }
  return s;
}

namespace {

// Free coordinates live in transformed (unbounded) variables.
Real transform_to_domain(Domain d, int j, Real t) {
  switch (d) {
    case Domain::Interval01: return 1 / (1 + std::exp(-t));
    case Domain::HalfLine: return std::exp(t);
    case Domain::RealLine: return (j % 2 != 0) ? t : std::exp(t);
  }
  return t;
}

struct MarginEval {
  Real margin = -kInf;
  std::vector<Real> full;  // filled head coordinates when finite
};

// Interiority margin of the filled head block; margins are capped so that
// unbounded coordinates do not dominate the min.
MarginEval head_margin(const Vec& t, const Constraint& constraint, Domain domain) {
  const int i_k = constraint.max_index();
  std::vector<int> free_idx;
  for (int j = 1; j <= i_k; ++j)
    if (!constraint.constrains(j)) free_idx.push_back(j);
  std::vector<Real> partial(free_idx.size());
  for (std::size_t i = 0; i < free_idx.size(); ++i)
    partial[i] = transform_to_domain(domain, free_idx[i], t[static_cast<int>(i)]);

  // Non-throwing fill: walk and record the worst signed margin.
  MarginEval ev;
  CanonicalCoordinates coords{domain, {}};
  std::size_t next_free = 0;
  Real worst = kInf;
  for (int j = 1; j <= i_k; ++j) {
    Real y;
    if (!constraint.constrains(j)) {
      y = partial[next_free++];
    } else {
      Real slope = 1;
      for (int i = 1; i < j; ++i)
        slope *= coordinate_factor(domain, i, coords.values[i - 1]);
      const Real probe = domain == Domain::Interval01 ? 0.5L
                       : domain == Domain::HalfLine   ? 1.0L
                       : (j % 2 != 0 ? 0.0L : 1.0L);
      CanonicalCoordinates prefix{domain, coords.values};
      prefix.values.push_back(probe);
      const Real m_probe = canonical_to_moments(prefix).values.back();
      if (slope == 0 || !std::isfinite(m_probe)) return ev;
      y = probe + (constraint.value_at(j) - m_probe) / slope;
      if (!std::isfinite(y)) return ev;
    }
    worst = std::min(worst, std::min<Real>(coordinate_margin(domain, j, y), Real(10)));
    coords.values.push_back(y);
    if (worst <= -1) break;  // hopeless; keep the signal bounded
  }
  ev.margin = worst;
  ev.full = coords.values;
  return ev;
}

}  // namespace

bool is_admissible(const Constraint& constraint, Domain domain) {
  try {
    admissible_interior_point(constraint, domain);
    return true;
  } catch (const NotAdmissibleError&) {
    return false;
  }
}

CanonicalCoordinates admissible_interior_point(const Constraint& constraint, Domain domain) {
  const int i_k = constraint.max_index();
  if (i_k == 0) return {domain, {}};
  const int dim = i_k - constraint.k();

  auto objective = [&](const Vec& t) { return -head_margin(t, constraint, domain).margin; };

  Vec best_t = Vec::Zero(dim);
  Real best = -kInf;
  const int starts = dim == 0 ? 1 : 16;
  for (int s = 0; s < starts; ++s) {
    Vec t0(dim);
    const auto h = halton_point(s, std::max(dim, 1));
    for (int i = 0; i < dim; ++i) t0[i] = 6 * (h[i] - 0.5L);
    const auto r = nelder_mead(objective, t0, 0.5L, 2000, 1e-13L);
    if (-r.value > best) {
      best = -r.value;
      best_t = r.x;
    }
  }
  if (!(best > 1e-9L)) throw NotAdmissibleError("constraint slice does not meet the interior");
  return {domain, head_margin(best_t, constraint, domain).full};
}

}  // namespace momspace
