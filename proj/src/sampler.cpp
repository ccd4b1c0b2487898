#include "momspace/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "momspace/optimize.hpp"
#include "momspace/stats.hpp"

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

// dy/dt of the transform above
Real transform_jacobian(Domain d, int j, Real t) {
  switch (d) {
    case Domain::Interval01: {
      const Real y = 1 / (1 + std::exp(-t));
      return y * (1 - y);
    }
    case Domain::HalfLine: return std::exp(t);
    case Domain::RealLine: return (j % 2 != 0) ? Real(1) : std::exp(t);
  }
  return 1;
}

// Tabulated inverse CDF of a tail coordinate density
//   exp(-n V_j(y)) * factor(y)^{n-j}  on D_j,
// built on a uniform grid in the transformed variable and truncated where the
// integrand falls ~300 decades below its maximum.
struct InverseCdfTable {
  std::vector<Real> t_grid;
  std::vector<Real> cdf;  // normalized, cdf.front() = 0, cdf.back() = 1

  Real sample(double u) const {
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), Real(u));
    std::size_t hi = std::min<std::size_t>(cdf.size() - 1,
                                           std::max<std::size_t>(1, it - cdf.begin()));
    const Real c0 = cdf[hi - 1], c1 = cdf[hi];
    const Real w = c1 > c0 ? (Real(u) - c0) / (c1 - c0) : Real(0.5);
    return t_grid[hi - 1] + w * (t_grid[hi] - t_grid[hi - 1]);
  }
};

InverseCdfTable build_tail_table(const PotentialSpec& pot, int n, int j) {
  const Domain domain = pot.domain;
  auto log_density_t = [&](Real t) {
    const Real y = transform_to_domain(domain, j, t);
    const Real f = coordinate_factor(domain, j, y);
    Real g = -Real(n) * pot.V(j, y);
    if (f > 0 && n - j != 0) g += Real(n - j) * std::log(f);
    return g + std::log(transform_jacobian(domain, j, t));
  };

  // locate the mode on a coarse scan, then truncate both sides
  const bool real_odd = domain == Domain::RealLine && j % 2 != 0;
  const Real lo0 = real_odd ? Real(-1e4) : Real(-40);
  const Real hi0 = real_odd ? Real(1e4) : Real(12);
  const int coarse = 8192;
  Real gmax = -kInf, tmax = 0;
  for (int i = 0; i <= coarse; ++i) {
    const Real t = lo0 + (hi0 - lo0) * Real(i) / coarse;
    const Real g = log_density_t(t);
    if (g > gmax) {
      gmax = g;
      tmax = t;
    }
  }
  const Real cutoff = gmax - 691;  // exp(-691) ~ 1e-300
  auto walk = [&](Real dir) {
    Real t = tmax, step = real_odd ? Real(0.25) : Real(0.01);
    while (true) {
      const Real tn = t + dir * step;
      if (tn < lo0 || tn > hi0) return dir < 0 ? lo0 : hi0;
      if (log_density_t(tn) < cutoff) return tn;
      t = tn;
      step *= 1.5;
    }
  };
  const Real t_lo = walk(-1), t_hi = walk(1);

  const int m = 4096;
  InverseCdfTable table;
  table.t_grid.resize(m + 1);
  table.cdf.resize(m + 1);
  std::vector<Real> q(m + 1);
  for (int i = 0; i <= m; ++i) {
    table.t_grid[i] = t_lo + (t_hi - t_lo) * Real(i) / m;
    q[i] = std::exp(log_density_t(table.t_grid[i]) - gmax);
  }
  table.cdf[0] = 0;
  for (int i = 1; i <= m; ++i) table.cdf[i] = table.cdf[i - 1] + (q[i - 1] + q[i]) / 2;
  const Real total = table.cdf[m];
  if (!(total > 0)) throw NonIntegrableError("tail coordinate density is degenerate");
  for (int i = 0; i <= m; ++i) table.cdf[i] /= total;
  return table;
}

}  // namespace

struct MomentSampler::Impl {
  bool uniform_mode = true;
  int n = 1;
  int i_k = 0;
  int head_dim = 0;
  Domain domain = Domain::Interval01;
  Constraint constraint;
  std::optional<PotentialSpec> potential;
  McmcOptions mcmc;

  std::vector<int> free_idx;  // unconstrained moment indices in the head block

  struct Chain {
    std::vector<Real> state;  // unconstrained head moments
    Real log_target = 0;
    double step = 0.1;
    RngStream rng{0};
    long accepted = 0;
    long proposed = 0;
  };
  std::vector<Chain> chains;
  long emitted = 0;
  // proposal shape: lower-triangular factor of the inverse log-target Hessian
  // at the mode, so the random walk matches the local geometry
  Mat proposal_chol;

  std::vector<InverseCdfTable> tail_tables;  // per coordinate j = i_k+1..n (general mode)

  // ---- head target ----
  Real log_target(const std::vector<Real>& x) const {
    std::vector<Real> m(i_k);
    std::size_t next = 0;
    for (int j = 1; j <= i_k; ++j)
      m[j - 1] = constraint.constrains(j) ? constraint.value_at(j) : x[next++];
    CanonicalCoordinates coords;
    try {
      coords = moments_to_canonical(MomentVector{domain, m});
    } catch (const Error&) {
      return -kInf;
    }
    Real lt = 0;
    for (int j = 1; j <= i_k; ++j) {
      const Real f = coordinate_factor(domain, j, coords.values[j - 1]);
      if (!(f > 0) && domain != Domain::RealLine) return -kInf;
      if (f > 0) lt += Real(n - i_k) * std::log(f);
      if (!uniform_mode) lt -= Real(n) * potential->V(j, coords.values[j - 1]);
    }
    return lt;
  }

  void metropolis_step(Chain& c, bool adapt, long t) {
    ++c.proposed;
    std::vector<Real> prop(c.state);
    Vec z(head_dim);
    for (int i = 0; i < head_dim; ++i) z[i] = c.rng.normal();
    const Vec dir = proposal_chol * z;
    for (int i = 0; i < head_dim; ++i) prop[i] += c.step * dir[i];
    const Real lt = log_target(prop);
    bool accept = false;
    if (lt > -kInf) {
      const Real log_ratio = lt - c.log_target;
      accept = log_ratio >= 0 || std::log(c.rng.u01()) < log_ratio;
    }
    if (accept) {
      c.state = prop;
      c.log_target = lt;
      ++c.accepted;
    }
    if (adapt) {
      const double rate = 1.0 / std::sqrt(double(t) + 1);
      c.step *= std::exp(rate * ((accept ? 1.0 : 0.0) - mcmc.target_acceptance));
      c.step = std::min(std::max(c.step, 1e-8), 1e4);
    }
  }

  std::vector<Real> head_coords(const Chain& c) const {
    if (i_k == 0) return {};
    std::vector<Real> m(i_k);
    std::size_t next = 0;
    for (int j = 1; j <= i_k; ++j)
      m[j - 1] = constraint.constrains(j) ? constraint.value_at(j) : c.state[next++];
    return moments_to_canonical(MomentVector{domain, m}).values;
  }
};

MomentSampler::MomentSampler(const SamplerConfig& config, bool uniform_mode)
    : impl_(new Impl), config_(config) {
  Impl& im = *impl_;
  im.uniform_mode = uniform_mode;
  im.n = config.n;
  im.domain = uniform_mode ? Domain::Interval01 : config.domain;
  im.constraint = config.constraint;
  im.potential = config.potential;
  im.mcmc = config.mcmc;
  im.i_k = config.constraint.max_index();
  if (im.i_k > im.n) throw Error("sampler: n must be >= the largest constrained index");
  im.head_dim = im.i_k - config.constraint.k();
  for (int j = 1; j <= im.i_k; ++j)
    if (!config.constraint.constrains(j)) im.free_idx.push_back(j);

  if (!uniform_mode) {
    if (!im.potential) throw Error("sampler: general mode needs a potential");
    if (im.domain != Domain::Interval01 && !im.potential->growth_ok)
      throw NonIntegrableError("potential violates the integrability conditions");
  }

  // mode of the head block as the starting state (NotAdmissible propagates)
  std::vector<Real> start_head;
  if (im.i_k > 0) {
    const LimitResult limit = uniform_mode
                                  ? solve_uniform_limit(config.constraint)
                                  : solve_general_limits(*im.potential, config.constraint, im.domain);
    const std::vector<Real> m_head =
        canonical_to_moments(limit.minimizers.front().head).values;
    for (int j : im.free_idx) start_head.push_back(m_head[j - 1]);
  } else if (!uniform_mode) {
    if (!is_admissible(config.constraint, im.domain))
      throw NotAdmissibleError("constraint is not admissible");
  }

  // tail tables (general mode only; uniform tails are exact Beta draws)
  if (!uniform_mode) {
    im.tail_tables.reserve(im.n - im.i_k);
    for (int j = im.i_k + 1; j <= im.n; ++j)
      im.tail_tables.push_back(build_tail_table(*im.potential, im.n, j));
  }

  // proposal preconditioner: Cholesky factor of the inverse curvature of the
  // log-target at the mode; falls back to the identity off a clean factorization
  if (im.head_dim > 0) {
    im.proposal_chol = Mat::Identity(im.head_dim, im.head_dim);
    auto neg_log_target = [&](const Vec& x) {
      std::vector<Real> xs(x.data(), x.data() + x.size());
      const Real lt = im.log_target(xs);
      return std::isfinite(lt) ? -lt : kInf;
    };
    Vec x0(im.head_dim);
    for (int i = 0; i < im.head_dim; ++i) x0[i] = start_head[i];
    const Mat H = fd_hessian(neg_log_target, x0);
    Eigen::LLT<Mat> llt(H.inverse());
    if (llt.info() == Eigen::Success) im.proposal_chol = llt.matrixL();
  }

  // chains: burn-in with step adaptation, then a frozen diagnostic window
  const int n_chains = std::max(1, im.mcmc.chains);
  im.chains.resize(n_chains);
  for (int c = 0; c < n_chains; ++c) {
    Impl::Chain& ch = im.chains[c];
    ch.rng = RngStream(mix_seed(config.seed, c, 0x1));
    ch.state = start_head;
    ch.step = 2.38 / std::sqrt(double(std::max(1, im.head_dim)));
    if (im.head_dim > 0) {
      ch.log_target = im.log_target(ch.state);
      for (long t = 0; t < im.mcmc.burn_in; ++t) im.metropolis_step(ch, true, t);
      ch.accepted = 0;
      ch.proposed = 0;
    }
  }

  if (im.head_dim > 0) {
    const int window = std::max(512, im.mcmc.burn_in);
    std::vector<std::vector<std::vector<double>>> series(
        im.head_dim, std::vector<std::vector<double>>(n_chains));
    for (int c = 0; c < n_chains; ++c) {
      Impl::Chain& ch = im.chains[c];
      for (int t = 0; t < window; ++t) {
        im.metropolis_step(ch, false, 0);
        for (int d = 0; d < im.head_dim; ++d)
          series[d][c].push_back(static_cast<double>(ch.state[d]));
      }
    }
    for (int d = 0; d < im.head_dim; ++d) diag_.rhat.push_back(split_rhat(series[d]));
    for (const auto& ch : im.chains) {
      diag_.acceptance_rate.push_back(ch.proposed ? double(ch.accepted) / ch.proposed : 1.0);
      diag_.step_size.push_back(ch.step);
    }
    for (double r : diag_.rhat)
      if (!(r <= im.mcmc.rhat_threshold))
        throw ChainNotConvergedError("split-Rhat " + std::to_string(r) + " above threshold");
  } else {
    for (int c = 0; c < n_chains; ++c) {
      diag_.acceptance_rate.push_back(1.0);
      diag_.step_size.push_back(0);
    }
  }
}

MomentSampler MomentSampler::uniform(const SamplerConfig& config) {
  return MomentSampler(config, true);
}

MomentSampler MomentSampler::general(const SamplerConfig& config) {
  if (!config.potential) throw Error("sampler: general mode needs a potential");
  return MomentSampler(config, false);
}

MomentSampler::~MomentSampler() = default;
MomentSampler::MomentSampler(MomentSampler&&) noexcept = default;
MomentSampler& MomentSampler::operator=(MomentSampler&&) noexcept = default;

CanonicalCoordinates MomentSampler::next_coordinates() {
  Impl& im = *impl_;
  const int c = static_cast<int>(im.emitted % im.chains.size());
  ++im.emitted;
  Impl::Chain& ch = im.chains[c];
  if (im.head_dim > 0)
    for (int t = 0; t < std::max(1, im.mcmc.thinning); ++t) im.metropolis_step(ch, false, 0);

  CanonicalCoordinates coords{im.domain, im.head_coords(ch)};
  coords.values.reserve(im.n);
  for (int j = im.i_k + 1; j <= im.n; ++j) {
    if (im.uniform_mode) {
      const double a = im.n - j + 1;
      coords.values.push_back(ch.rng.beta(a, a));
    } else {
      const Real t = im.tail_tables[j - im.i_k - 1].sample(ch.rng.u01());
      coords.values.push_back(transform_to_domain(im.domain, j, t));
    }
  }
  return coords;
}

MomentVector MomentSampler::next(int l) {
  if (l <= 0) l = impl_->n;
  return moments_of(next_coordinates(), l);
}

MomentVector moments_of(const CanonicalCoordinates& coords, int l) {
  if (l > coords.size()) throw Error("moments_of: l exceeds the coordinate length");
  CanonicalCoordinates head = coords;
  if (head.size() > l) head.values.resize(l);
  return canonical_to_moments(head);
}

}  // namespace momspace
