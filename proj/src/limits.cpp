#include "momspace/limits.hpp"

#include <algorithm>
#include <cmath>

namespace momspace {

namespace {

Real coordinate_factor(Domain d, int j, Real y) {
  switch (d) {
    case Domain::Interval01: return y * (1 - y);
    case Domain::HalfLine: return y;
    case Domain::RealLine: return (j % 2 != 0) ? Real(1) : y;
  }
  return 0;
}

Real transform_to_domain(Domain d, int j, Real t) {
  switch (d) {
    case Domain::Interval01: return 1 / (1 + std::exp(-t));
    case Domain::HalfLine: return std::exp(t);
    case Domain::RealLine: return (j % 2 != 0) ? t : std::exp(t);
  }
  return t;
}

Real transform_from_domain(Domain d, int j, Real y) {
  switch (d) {
    case Domain::Interval01: return std::log(y / (1 - y));
    case Domain::HalfLine: return std::log(y);
    case Domain::RealLine: return (j % 2 != 0) ? y : std::log(y);
  }
  return y;
}

std::vector<int> free_indices(const Constraint& c, int up_to) {
  std::vector<int> idx;
  for (int j = 1; j <= up_to; ++j)
    if (!c.constrains(j)) idx.push_back(j);
  return idx;
}

// Moments of the full coordinate vector (head plus alternating tail), first l.
MomentVector limit_moments(const LimitResult& limit, const CanonicalCoordinates& head, int l) {
  CanonicalCoordinates coords = head;
  for (int j = head.size() + 1; j <= l; ++j)
    coords.values.push_back(j % 2 != 0 ? limit.tail_odd : limit.tail_even);
  coords.values.resize(l);
  return canonical_to_moments(coords);
}

// Assemble the full moment vector from the unconstrained block.
std::vector<Real> insert_constrained(const std::vector<Real>& x, const Constraint& c, int n) {
  std::vector<Real> m(n);
  std::size_t next = 0;
  for (int j = 1; j <= n; ++j)
    m[j - 1] = c.constrains(j) ? c.value_at(j) : x[next++];
  return m;
}

std::vector<Real> extract_unconstrained(const std::vector<Real>& m, const Constraint& c) {
  std::vector<Real> x;
  for (int j = 1; j <= static_cast<int>(m.size()); ++j)
    if (!c.constrains(j)) x.push_back(m[j - 1]);
  return x;
}

// Insert zero rows/columns at the constrained indices.
Mat pad_constrained(const Mat& S, const Constraint& c, int l) {
  Mat out = Mat::Zero(l, l);
  std::vector<int> keep = free_indices(c, l);
  for (std::size_t a = 0; a < keep.size(); ++a)
    for (std::size_t b = 0; b < keep.size(); ++b)
      out(keep[a] - 1, keep[b] - 1) = S(a, b);
  return out;
}

}  // namespace

const std::function<Real(Real)>& PotentialSpec::function_for(int j) const {
  const int m = static_cast<int>(functions.size());
  if (m < 2) throw Error("potential needs at least two functions");
  if (j <= m) return functions[j - 1];
  return (j % 2 == m % 2) ? functions[m - 1] : functions[m - 2];
}

Real PotentialSpec::W(int j, Real y) const {
  const Real v = V(j, y);
  switch (domain) {
    case Domain::Interval01: return v - std::log(y * (1 - y));
    case Domain::HalfLine: return v - std::log(y);
    case Domain::RealLine: return (j % 2 != 0) ? v : v - std::log(y);
  }
  return v;
}

bool check_growth(Domain domain, const std::vector<std::function<Real(Real)>>& functions) {
  if (domain == Domain::Interval01) return true;
  const Real eps = 0.01L;
  for (int j = 1; j <= static_cast<int>(functions.size()); ++j) {
    const bool odd = j % 2 != 0;
    const Real needed = (domain == Domain::RealLine && odd) ? 1 + eps : 2 + eps;
    for (Real y : {1e2L, 1e3L, 1e4L}) {
      if (functions[j - 1](y) < needed * std::log(y)) return false;
      if (domain == Domain::RealLine && odd && functions[j - 1](-y) < needed * std::log(y))
        return false;
    }
  }
  return true;
}

PotentialSpec make_potential(Domain domain, std::vector<std::function<Real(Real)>> functions) {
  PotentialSpec p;
  p.domain = domain;
  p.functions = std::move(functions);
  p.growth_ok = check_growth(domain, p.functions);
  return p;
}

Real kl_arcsine(const std::vector<Real>& p) {
  Real s = 0;
  for (Real v : p) {
    if (!(v > 0 && v < 1)) return kInf;
    s -= std::log(4 * v * (1 - v));
  }
  return s;
}

Real range_objective(const MomentVector& m) {
  try {
    const CanonicalCoordinates coords = moments_to_canonical(m);
    Real s = 0;
    for (Real p : coords.values) s += std::log(4 * p * (1 - p));
    return s;
  } catch (const Error&) {
    return -kInf;
  }
}

namespace {

// -sum_{j<=i_k} log(4 p_j q_j) over the head block as a function of the
// unconstrained moments; +inf outside the feasible region.
Real head_kl_objective(const std::vector<Real>& x, const Constraint& c, int i_k) {
  MomentVector m{Domain::Interval01, insert_constrained(x, c, i_k)};
  const Real v = range_objective(m);
  return std::isfinite(v) ? -v : kInf;
}

}  // namespace

LimitResult solve_uniform_limit(const Constraint& constraint) {
  LimitResult res;
  res.domain = Domain::Interval01;
  res.constraint = constraint;
  const int i_k = constraint.max_index();
  if (i_k == 0) {
    res.minimizers.push_back({CanonicalCoordinates{Domain::Interval01, {}}, 1, build_bs01_measure({})});
    return res;
  }
  // throws NotAdmissibleError when the slice misses the interior
  const CanonicalCoordinates seed = admissible_interior_point(constraint, Domain::Interval01);
  const int d = i_k - constraint.k();

  CanonicalCoordinates head{Domain::Interval01, {}};
  if (d == 0) {
    head = constrained_fill({}, constraint, Domain::Interval01);
  } else {
    const std::vector<Real> m_seed = canonical_to_moments(seed).values;
    Vec x0 = Vec::Zero(d);
    {
      const auto xs = extract_unconstrained(m_seed, constraint);
      for (int i = 0; i < d; ++i) x0[i] = xs[i];
    }
    auto objective = [&](const Vec& x) {
      std::vector<Real> xs(x.data(), x.data() + x.size());
      return head_kl_objective(xs, constraint, i_k);
    };
    // The range objective is strictly concave in the moment block: Newton from
    // an interior seed converges to the unique maximizer; Nelder-Mead mops up
    // if the seed sits too close to the boundary.
    MinimizeResult opt = newton_minimize(objective, x0);
    const MinimizeResult nm = nelder_mead(objective, opt.x, 0.05L);
    if (nm.value < opt.value) opt = newton_minimize(objective, nm.x);

    // Damped Newton polish with width-scaled differencing. The feasible width
    // of m_j shrinks like prod p_i q_i, so fixed finite-difference steps lose
    // the stiff directions for deeper constraints; steps proportional to the
    // local width keep gradient and Hessian resolvable.
    const std::vector<int> free_idx = free_indices(constraint, i_k);
    auto scaled_steps = [&](const Vec& x) {
      std::vector<Real> m_cur(x.data(), x.data() + x.size());
      const MomentVector mv{Domain::Interval01, insert_constrained(m_cur, constraint, i_k)};
      std::vector<Real> h(d, 1e-9L);
      try {
        const auto p = moments_to_canonical(mv).values;
        for (int i = 0; i < d; ++i) {
          Real w = 1;
          for (int u = 1; u < free_idx[i]; ++u) w *= p[u - 1] * (1 - p[u - 1]);
          h[i] = 1e-6L * w;
        }
      } catch (const Error&) {
      }
      return h;
    };
    auto grad_at = [&](const Vec& x, const std::vector<Real>& h) {
      Vec g(d);
      Vec xp = x;
      for (int i = 0; i < d; ++i) {
        xp[i] = x[i] + h[i];
        const Real fp = objective(xp);
        xp[i] = x[i] - h[i];
        const Real fm = objective(xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2 * h[i]);
      }
      return g;
    };
    for (int it = 0; it < 40; ++it) {
      const auto h = scaled_steps(opt.x);
      const Vec g = grad_at(opt.x, h);
      if (!g.allFinite() || g.cwiseAbs().maxCoeff() < 1e-10L) break;
      Mat H(d, d);
      const Real f0 = opt.value;
      Vec xp = opt.x;
      for (int i = 0; i < d; ++i) {
        xp[i] = opt.x[i] + h[i];
        const Real fp = objective(xp);
        xp[i] = opt.x[i] - h[i];
        const Real fm = objective(xp);
        xp[i] = opt.x[i];
        H(i, i) = (fp - 2 * f0 + fm) / (h[i] * h[i]);
        for (int j = i + 1; j < d; ++j) {
          xp[i] = opt.x[i] + h[i];
          xp[j] = opt.x[j] + h[j];
          const Real fpp = objective(xp);
          xp[j] = opt.x[j] - h[j];
          const Real fpm = objective(xp);
          xp[i] = opt.x[i] - h[i];
          const Real fmm = objective(xp);
          xp[j] = opt.x[j] + h[j];
          const Real fmp = objective(xp);
          xp[i] = opt.x[i];
          xp[j] = opt.x[j];
          H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4 * h[i] * h[j]);
        }
      }
      if (!H.allFinite()) break;
      const Vec dx = -Eigen::LDLT<Mat>(H).solve(g);
      Real t = 1;
      bool moved = false;
      for (int ls = 0; ls < 30; ++ls, t /= 2) {
        const Vec xn = opt.x + t * dx;
        const Real fn = objective(xn);
        if (std::isfinite(fn) && fn < opt.value) {
          opt.x = xn;
          opt.value = fn;
          moved = true;
          break;
        }
      }
      if (!moved) {
        // near the optimum the improvement drops below the evaluation noise;
        // take the full Newton step as long as it shrinks the gradient
        const Vec xn = opt.x + dx;
        const Real fn = objective(xn);
        if (std::isfinite(fn)) {
          const Vec gn = grad_at(xn, scaled_steps(xn));
          if (gn.allFinite() && gn.cwiseAbs().maxCoeff() < 0.9L * g.cwiseAbs().maxCoeff()) {
            opt.x = xn;
            opt.value = fn;
            moved = true;
          }
        }
      }
      if (!moved) break;
    }
    std::vector<Real> m_opt(opt.x.data(), opt.x.data() + opt.x.size());
    MomentVector m_full{Domain::Interval01, insert_constrained(m_opt, constraint, i_k)};
    head = moments_to_canonical(m_full);
  }
  res.minimizers.push_back({head, 1, build_bs01_measure(head.values)});
  return res;
}

namespace {

struct TailMinimizer {
  Real y = 0;
  Real value = 0;
};

// Unique interior minimizer of W_j on D_j; throws DegenerateMinimizerError
// when the curvature at the minimum vanishes. Ties across separated global
// minima break deterministically toward the smaller coordinate.
TailMinimizer minimize_tail(const PotentialSpec& pot, int j) {
  auto w_of_t = [&](Real t) { return pot.W(j, transform_to_domain(pot.domain, j, t)); };
  std::vector<Brent1DResult> cands;
  if (pot.domain == Domain::RealLine && j % 2 != 0) {
    cands = grid_minimize(w_of_t, -1e4L, 1e4L, 8192);
    auto fine = grid_minimize(w_of_t, -32, 32, 4096);
    cands.insert(cands.end(), fine.begin(), fine.end());
  } else {
    // exp/logit transformed coordinate
    cands = grid_minimize(w_of_t, -25, 12, 4096);
  }
  if (cands.empty()) throw DegenerateMinimizerError("tail potential has no interior minimum");
  Real best = kInf;
  for (auto& c : cands) best = std::min(best, c.value);
  Brent1DResult pick{kInf, kInf};
  for (auto& c : cands)
    if (c.value <= best + 1e-9L * std::max<Real>(1, std::fabs(best)) && c.x < pick.x) pick = c;
  const Real y = transform_to_domain(pot.domain, j, pick.x);
  // curvature in the natural coordinate
  const Real h = 1e-5L * std::max<Real>(1, std::fabs(y));
  const Real w2 = (pot.W(j, y + h) - 2 * pot.W(j, y) + pot.W(j, y - h)) / (h * h);
  if (!(w2 > 1e-8L))
    throw DegenerateMinimizerError("tail minimizer has vanishing curvature (non-generic)");
  return {y, pick.value};
}

}  // namespace

LimitResult solve_general_limits(const PotentialSpec& potential, const Constraint& constraint,
                                 Domain domain) {
  if (domain != potential.domain) throw Error("potential/domain mismatch");
  if (domain != Domain::Interval01 && !potential.growth_ok)
    throw NonIntegrableError("potential violates the integrability conditions");
  const int i_k = constraint.max_index();
  const CanonicalCoordinates seed = admissible_interior_point(constraint, domain);

  LimitResult res;
  res.domain = domain;
  res.constraint = constraint;
  {
    const TailMinimizer t1 = minimize_tail(potential, i_k + 1);
    const TailMinimizer t2 = minimize_tail(potential, i_k + 2);
    if ((i_k + 1) % 2 != 0) {
      res.tail_odd = t1.y;
      res.tail_even = t2.y;
    } else {
      res.tail_odd = t2.y;
      res.tail_even = t1.y;
    }
  }

  const int d = i_k - constraint.k();
  const std::vector<int> free_idx = free_indices(constraint, i_k);

  auto fill_from_free = [&](const std::vector<Real>& yfree) {
    return constrained_fill(yfree, constraint, domain);
  };
  auto head_value = [&](const CanonicalCoordinates& coords) {
    Real s = 0;
    for (int j = 1; j <= i_k; ++j) s += potential.W(j, coords.values[j - 1]);
    return s;
  };
  auto objective_y = [&](const Vec& yv) {
    std::vector<Real> yfree(yv.data(), yv.data() + yv.size());
    for (int i = 0; i < static_cast<int>(yfree.size()); ++i)
      if (!coordinate_in_domain(domain, free_idx[i], yfree[i])) return kInf;
    try {
      return head_value(fill_from_free(yfree));
    } catch (const Error&) {
      return kInf;
    }
  };
  auto objective_t = [&](const Vec& tv) {
    Vec yv(tv.size());
    for (int i = 0; i < tv.size(); ++i)
      yv[i] = transform_to_domain(domain, free_idx[i], tv[i]);
    return objective_y(yv);
  };

  struct Opt {
    std::vector<Real> yfree;
    Real value;
  };
  std::vector<Opt> found;
  if (d == 0) {
    found.push_back({{}, head_value(fill_from_free({}))});
  } else {
    std::vector<Vec> starts;
    {
      Vec t0(d);
      const auto yseed = extract_unconstrained(seed.values, constraint);
      for (int i = 0; i < d; ++i) t0[i] = transform_from_domain(domain, free_idx[i], yseed[i]);
      starts.push_back(t0);
    }
    for (int s = 0; s < 32; ++s) {
      Vec t0(d);
      const auto h = halton_point(s, d);
      for (int i = 0; i < d; ++i) t0[i] = 12 * (h[i] - 0.5L);
      starts.push_back(t0);
    }
    for (const Vec& t0 : starts) {
      MinimizeResult r = nelder_mead(objective_t, t0, 0.4L);
      if (!std::isfinite(r.value)) continue;
      r = newton_minimize(objective_t, r.x);
      if (!std::isfinite(r.value)) continue;
      Opt o;
      o.value = r.value;
      o.yfree.resize(d);
      for (int i = 0; i < d; ++i) o.yfree[i] = transform_to_domain(domain, free_idx[i], r.x[i]);
      found.push_back(std::move(o));
    }
    if (found.empty()) throw DegenerateMinimizerError("no finite head minimizer found");
  }

  // keep global minima, clustered in coordinate space
  Real best = kInf;
  for (auto& o : found) best = std::min(best, o.value);
  std::sort(found.begin(), found.end(), [](const Opt& a, const Opt& b) {
    return a.yfree < b.yfree;
  });
  std::vector<Opt> minima;
  for (auto& o : found) {
    if (o.value > best + 1e-8L * std::max<Real>(1, std::fabs(best))) continue;
    bool dup = false;
    for (auto& m : minima) {
      Real dist = 0;
      for (int i = 0; i < d; ++i) dist = std::max(dist, std::fabs(m.yfree[i] - o.yfree[i]));
      if (dist <= 1e-5L) dup = true;
    }
    if (!dup) minima.push_back(o);
  }

  // Laplace weights: R(theta) det(Hess^C)^{-1/2}
  std::vector<Real> log_weight(minima.size(), 0);
  std::vector<CanonicalCoordinates> heads;
  for (std::size_t q = 0; q < minima.size(); ++q) {
    const auto& o = minima[q];
    CanonicalCoordinates head = fill_from_free(o.yfree);
    Real log_det = 0;
    if (d > 0) {
      Vec y0(d);
      for (int i = 0; i < d; ++i) y0[i] = o.yfree[i];
      const Mat H = fd_hessian(objective_y, y0);
      const Real det = H.determinant();
      if (!(det > 1e-8L))
        throw DegenerateMinimizerError("head minimizer has singular Hessian (non-generic)");
      log_det = std::log(det);
    }
    Real log_r = 0;
    for (int j = 1; j <= i_k; ++j) {
      const Real f = coordinate_factor(domain, j, head.values[j - 1]);
      log_r -= Real(j + constraint.deficiency(j)) * std::log(f);
    }
    log_weight[q] = log_r - log_det / 2;
    heads.push_back(std::move(head));
  }
  Real wmax = -kInf;
  for (Real lw : log_weight) wmax = std::max(wmax, lw);
  Real wsum = 0;
  for (Real& lw : log_weight) {
    lw = std::exp(lw - wmax);
    wsum += lw;
  }

  // measures: head coordinates followed by the alternating tail
  for (std::size_t q = 0; q < minima.size(); ++q) {
    CanonicalCoordinates coords = heads[q];
    const int L = i_k + 12;
    for (int j = i_k + 1; j <= L; ++j)
      coords.values.push_back(j % 2 != 0 ? res.tail_odd : res.tail_even);
    const RecurrenceCoefficients rec = canonical_to_recurrence(coords);
    const int jh = i_k / 2 + 3;
    TailSpec spec;
    spec.head.alphas.assign(rec.alphas.begin(), rec.alphas.begin() + jh);
    spec.head.betas.assign(rec.betas.begin(), rec.betas.begin() + jh - 1);
    spec.tail_alpha = rec.alphas[jh];
    spec.tail_beta = rec.betas[jh - 1];
    res.minimizers.push_back({heads[q], log_weight[q] / wsum, build_tail_constant_measure(spec)});
  }
  return res;
}

Mat clt_covariance_uniform(const LimitResult& limit, int l, const Constraint& constraint) {
  const int i_k = constraint.max_index();
  if (l < i_k) throw Error("clt_covariance: l must be >= i_k");
  const int k = constraint.k();
  const int d = i_k - k;
  const CanonicalCoordinates& head = limit.minimizers.at(0).head;
  const std::vector<Real> m_head =
      i_k > 0 ? canonical_to_moments(head).values : std::vector<Real>{};

  // covariance of the head moment block: inverse of -Hess of the range map
  Mat head_cov(d, d);
  if (d > 0) {
    auto obj = [&](const Vec& x) {
      std::vector<Real> xs(x.data(), x.data() + x.size());
      return head_kl_objective(xs, constraint, i_k);  // = -sum log(4 p q)
    };
    Vec x0(d);
    const auto xs = extract_unconstrained(m_head, constraint);
    for (int i = 0; i < d; ++i) x0[i] = xs[i];
    const Mat H = fd_hessian(obj, x0);
    head_cov = H.inverse();
  }

  // Jacobian of (unconstrained head moments, tail p) -> unconstrained m_1..m_l
  const int q = l - k;
  auto phi = [&](const Vec& v) {
    std::vector<Real> xs(v.data(), v.data() + d);
    MomentVector m_full{Domain::Interval01, insert_constrained(xs, constraint, i_k)};
    CanonicalCoordinates coords = i_k > 0 ? moments_to_canonical(m_full)
                                          : CanonicalCoordinates{Domain::Interval01, {}};
    for (int i = d; i < q; ++i) coords.values.push_back(v[i]);
    const MomentVector out = canonical_to_moments(coords);
    return extract_unconstrained(out.values, constraint);
  };
  Vec center(q);
  {
    const auto xs = extract_unconstrained(m_head, constraint);
    for (int i = 0; i < d; ++i) center[i] = xs[i];
    for (int i = d; i < q; ++i) center[i] = 0.5L;
  }
  Mat D(q, q);
  for (int c = 0; c < q; ++c) {
    const Real h = 1e-6L * std::max<Real>(1, std::fabs(center[c]));
    Vec vp = center, vm = center;
    vp[c] += h;
    vm[c] -= h;
    const auto fp = phi(vp), fm = phi(vm);
    for (int r = 0; r < q; ++r) D(r, c) = (fp[r] - fm[r]) / (2 * h);
  }

  Mat mid = Mat::Zero(q, q);
  if (d > 0) mid.topLeftCorner(d, d) = head_cov;
  for (int i = d; i < q; ++i) mid(i, i) = 0.125L;
  const Mat cov = D * mid * D.transpose();
  return pad_constrained(cov, constraint, l);
}

Mat clt_covariance_general(const LimitResult& limit, int l, const Constraint& constraint,
                           const PotentialSpec& potential, int minimizer_index) {
  const int i_k = constraint.max_index();
  if (l < i_k) throw Error("clt_covariance: l must be >= i_k");
  const int k = constraint.k();
  const int q = l - k;
  const Domain domain = limit.domain;
  const std::vector<int> idx = free_indices(constraint, l);

  CanonicalCoordinates star = limit.minimizers.at(minimizer_index).head;
  for (int j = i_k + 1; j <= l; ++j)
    star.values.push_back(j % 2 != 0 ? limit.tail_odd : limit.tail_even);
  const MomentVector m_star = canonical_to_moments(star);

  // Hessian of sum_{j<=l} W_j over the unconstrained canonical block
  auto w_sum = [&](const Vec& yv) {
    std::vector<Real> yfree(yv.data(), yv.data() + yv.size());
    for (int i = 0; i < q; ++i)
      if (!coordinate_in_domain(domain, idx[i], yfree[i])) return kInf;
    try {
      const CanonicalCoordinates coords = constrained_fill(yfree, constraint, domain);
      Real s = 0;
      for (int j = 1; j <= l; ++j) s += potential.W(j, coords.values[j - 1]);
      return s;
    } catch (const Error&) {
      return kInf;
    }
  };
  Vec y0(q);
  {
    const auto ys = extract_unconstrained(star.values, constraint);
    for (int i = 0; i < q; ++i) y0[i] = ys[i];
  }
  const Mat H = fd_hessian(w_sum, y0);

  // Jacobian of m^C -> y^C at the minimizer moments
  auto y_of_m = [&](const Vec& mv) {
    std::vector<Real> xs(mv.data(), mv.data() + mv.size());
    MomentVector m_full{domain, insert_constrained(xs, constraint, l)};
    return extract_unconstrained(moments_to_canonical(m_full).values, constraint);
  };
  Vec m0(q);
  {
    const auto ms = extract_unconstrained(m_star.values, constraint);
    for (int i = 0; i < q; ++i) m0[i] = ms[i];
  }
  Mat J(q, q);
  for (int c = 0; c < q; ++c) {
    const Real h = 1e-6L * std::max<Real>(1, std::fabs(m0[c]));
    Vec vp = m0, vm = m0;
    vp[c] += h;
    vm[c] -= h;
    const auto fp = y_of_m(vp), fm = y_of_m(vm);
    for (int r = 0; r < q; ++r) J(r, c) = (fp[r] - fm[r]) / (2 * h);
  }

  const Mat prec = J.transpose() * H * J;
  return pad_constrained(prec.inverse(), constraint, l);
}

namespace {

Real raw_uniform_rate(const MomentVector& m, const Constraint& constraint) {
  for (const auto& e : constraint.entries) {
    if (e.index > m.size()) continue;
    if (std::fabs(m.values[e.index - 1] - e.value) >
        1e-12L * std::max<Real>(1, std::fabs(e.value)))
      return kInf;
  }
  try {
    const CanonicalCoordinates coords = moments_to_canonical(m);
    Real s = 0;
    for (Real p : coords.values) s -= std::log(p * (1 - p));
    return s;
  } catch (const Error&) {
    return kInf;
  }
}

}  // namespace

Real rate_eval_uniform(const MomentVector& m, const Constraint& constraint) {
  const Real raw = raw_uniform_rate(m, constraint);
  if (!std::isfinite(raw)) return kInf;
  const LimitResult limit = solve_uniform_limit(constraint);
  const MomentVector m_star = limit_moments(limit, limit.minimizers[0].head, m.size());
  return raw - raw_uniform_rate(m_star, constraint);
}

Real rate_eval_general(const MomentVector& m, const PotentialSpec& potential,
                       const Constraint& constraint) {
  auto raw = [&](const MomentVector& mv) {
    for (const auto& e : constraint.entries) {
      if (e.index > mv.size()) continue;
      if (std::fabs(mv.values[e.index - 1] - e.value) >
          1e-12L * std::max<Real>(1, std::fabs(e.value)))
        return kInf;
    }
    try {
      const CanonicalCoordinates coords = moments_to_canonical(mv);
      Real s = 0;
      for (int j = 1; j <= coords.size(); ++j) s += potential.W(j, coords.values[j - 1]);
      return s;
    } catch (const Error&) {
      return kInf;
    }
  };
  const Real value = raw(m);
  if (!std::isfinite(value)) return kInf;
  const LimitResult limit = solve_general_limits(potential, constraint, potential.domain);
  Real shift = kInf;
  for (const auto& q : limit.minimizers)
    shift = std::min(shift, raw(limit_moments(limit, q.head, m.size())));
  return value - shift;
}

Real mdp_rate(const Vec& x, const Constraint& constraint, const Mat& sigma_l) {
  for (const auto& e : constraint.entries)
    if (e.index <= x.size() && x[e.index - 1] != 0) return kInf;
  return 0.5L * x.dot(sigma_l * x);
}

VolumeRatioResult volume_ratio(const Constraint& constraint, int n) {
  const LimitResult limit = solve_uniform_limit(constraint);  // NotAdmissible propagates
  const int i_k = constraint.max_index();
  const int k = constraint.k();
  const int d = i_k - k;
  const CanonicalCoordinates& head = limit.minimizers[0].head;

  Real width = 1;
  for (Real p : head.values) width *= p * (1 - p);

  Real det = 1;
  if (d > 0) {
    // -log(m^+ - m^-) of the unconstrained head moments up to an additive
    // constant, which the Hessian ignores
    auto obj = [&](const Vec& x) {
      std::vector<Real> xs(x.data(), x.data() + x.size());
      return head_kl_objective(xs, constraint, i_k);
    };
    const std::vector<Real> m_head = canonical_to_moments(head).values;
    Vec x0(d);
    const auto xs = extract_unconstrained(m_head, constraint);
    for (int i = 0; i < d; ++i) x0[i] = xs[i];
    det = fd_hessian(obj, x0).determinant();
  }

  VolumeRatioResult out;
  const Real pi = std::acos(Real(-1));
  out.asymptotic = std::pow(Real(n), Real(k) / 2) *
                   std::pow(std::pow(Real(4), i_k) * width, Real(n - i_k)) *
                   std::pow(Real(2), Real(i_k) * i_k + Real(i_k - k) / 2) /
                   (std::sqrt(det) * std::pow(pi, Real(k) / 2));
  out.regime = VolumeRegime::Polynomial;
  for (const auto& e : constraint.entries)
    if (std::fabs(e.value - arcsine_moment(e.index)) > 1e-10L) out.regime = VolumeRegime::Exponential;
  return out;
}

Real volume_unconstrained(int n) {
  // vol(M_n) = prod_{m=1}^n B(m,m), B(m,m) = ((m-1)!)^2 / (2m-1)!
  Real v = 1;
  for (int m = 1; m <= n; ++m) {
    Real b = 1;
    for (int i = 1; i <= m - 1; ++i) b *= Real(i) / Real(m - 1 + i);
    b /= Real(2 * m - 1);
    v *= b;
  }
  return v;
}

Real arcsine_moment(int l) {
  Real v = 1;
  for (int i = 1; i <= l; ++i) v *= Real(2 * i - 1) / Real(2 * i);
  return v;
}

}  // namespace momspace
