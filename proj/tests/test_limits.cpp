#include <doctest.h>

#include <cmath>
#include <random>

#include "momspace/limits.hpp"
#include "momspace/quadrature.hpp"
#include "oracles.hpp"

using namespace momspace;

namespace {
const Real kPi = std::acos(Real(-1));

PotentialSpec example_r_potential() {
  return make_potential(Domain::RealLine, {[](Real a) { return (a - 1) * (a - 1); },
                                           [](Real b) { return 8 * b * b; }});
}
}  // namespace

TEST_CASE("kl_arcsine") {
  SUBCASE("all p = 1/2") { CHECK(kl_arcsine({0.5L, 0.5L, 0.5L}) == 0); }
  SUBCASE("one displaced coordinate") {
    CHECK(kl_arcsine({0.3L}) == doctest::Approx((double)-std::log(0.84L)).epsilon(1e-15));
  }
  SUBCASE("matches the numeric KL quadrature") {
    std::mt19937_64 eng(3);
    std::uniform_real_distribution<double> U(0.15, 0.85);
    for (int rep = 0; rep < 10; ++rep) {
      const int r = 1 + int(U(eng) * 4);
      std::vector<Real> p(r);
      for (auto& v : p) v = U(eng);
      // K(mu0 | mu) = int log(d mu0 / d mu) d mu0; with mu the BS measure of p,
      // d mu0 / d mu = R_r(x) / prod p q
      const auto R = bs01_denominator(p);
      Real prod = 1;
      for (Real v : p) prod *= v * (1 - v);
      const Real quad = integrate_chebyshev(
                            [&](Real x) { return std::log(R(x) / prod); }, 0, 1, 4096) /
                        kPi;
      CHECK(std::fabs(quad - kl_arcsine(p)) < 1e-6L);
    }
  }
}

TEST_CASE("range_objective") {
  SUBCASE("arcsine prefix gives zero") {
    CHECK(std::fabs(range_objective({Domain::Interval01, {0.5L, 0.375L}})) < 1e-13L);
  }
  SUBCASE("single moment") {
    CHECK(range_objective({Domain::Interval01, {0.3L}}) ==
          doctest::Approx((double)std::log(0.84L)).epsilon(1e-14));
  }
  SUBCASE("boundary and infeasible vectors give -inf") {
    CHECK(std::isinf((double)range_objective({Domain::Interval01, {0.5L, 0.25L}})));
    CHECK(std::isinf((double)range_objective({Domain::Interval01, {0.5L, 0.1L}})));
  }
  SUBCASE("equals -kl_arcsine through the conversion chain") {
    std::mt19937_64 eng(10);
    std::uniform_real_distribution<double> U(0.2, 0.8);
    for (int rep = 0; rep < 30; ++rep) {
      std::vector<Real> p(6);
      for (auto& v : p) v = U(eng);
      const auto m = canonical_to_moments({Domain::Interval01, p});
      CHECK(std::fabs(range_objective(m) + kl_arcsine(p)) < 1e-10L);
    }
  }
  SUBCASE("strict concavity probe in moment coordinates") {
    std::mt19937_64 eng(11);
    std::uniform_real_distribution<double> U(0.3, 0.7);
    int tested = 0;
    for (int rep = 0; rep < 500 && tested < 100; ++rep) {
      std::vector<Real> pa(4), pb(4);
      for (auto& v : pa) v = U(eng);
      for (auto& v : pb) v = U(eng);
      const auto ma = canonical_to_moments({Domain::Interval01, pa});
      const auto mb = canonical_to_moments({Domain::Interval01, pb});
      MomentVector mid{Domain::Interval01, {}};
      Real dist2 = 0;
      for (int i = 0; i < 4; ++i) {
        mid.values.push_back((ma.values[i] + mb.values[i]) / 2);
        dist2 += (ma.values[i] - mb.values[i]) * (ma.values[i] - mb.values[i]);
      }
      if (dist2 < 1e-6L) continue;
      ++tested;
      const Real gain =
          range_objective(mid) - (range_objective(ma) + range_objective(mb)) / 2;
      CHECK(gain >= 0);
      // strong concavity: gain at least c * ||a-b||^2 for some positive c
      CHECK(gain > 1e-4L * dist2);
    }
    CHECK(tested == 100);
  }
}

TEST_CASE("solve_uniform_limit") {
  SUBCASE("fixed mean reproduces mu^{C1}") {
    const auto lim = solve_uniform_limit(Constraint({{1, 0.3L}}));
    REQUIRE(lim.minimizers.size() == 1);
    CHECK(lim.minimizers[0].weight == 1);
    CHECK(lim.minimizers[0].head.values[0] == doctest::Approx(0.3).epsilon(1e-14));
    const auto& mu = lim.minimizers[0].measure;
    CHECK(mu.ac->denominator.coeffs[0] == doctest::Approx(0.09).epsilon(1e-13));
    CHECK(mu.ac->denominator.coeffs[1] == doctest::Approx(0.4).epsilon(1e-13));
  }
  SUBCASE("m_1 = 1/2 gives back the arcsine measure") {
    const auto lim = solve_uniform_limit(Constraint({{1, 0.5L}}));
    CHECK(lim.minimizers[0].head.values[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(kl_arcsine(lim.minimizers[0].head.values) < 1e-20L);
  }
  SUBCASE("empty constraint gives the arcsine measure") {
    const auto lim = solve_uniform_limit(Constraint{});
    CHECK(lim.minimizers[0].head.size() == 0);
    CHECK(measure_moment(lim.minimizers[0].measure, 3) == doctest::Approx(0.3125).epsilon(1e-10));
  }
  SUBCASE("fixed second moment against the golden-section oracle") {
    const Real c2 = 0.3L;
    const auto lim = solve_uniform_limit(Constraint({{2, c2}}));
    // oracle: c_1 maximizes (c2 - c1^2)(c1 - c2)/(c1(1-c1)) on [c2, sqrt(c2)]
    const Real c1_star = oracles::golden_section_max(
        [&](Real c1) { return (c2 - c1 * c1) * (c1 - c2) / (c1 * (1 - c1)); }, c2,
        std::sqrt(c2));
    CHECK(lim.minimizers[0].head.values[0] == doctest::Approx((double)c1_star).epsilon(1e-7));
    CHECK(measure_moment(lim.minimizers[0].measure, 2) == doctest::Approx(0.3).epsilon(1e-9));
  }
  SUBCASE("not admissible") {
    CHECK_THROWS_AS(solve_uniform_limit(Constraint({{1, 0.3L}, {2, 0.5L}})), NotAdmissibleError);
  }
  SUBCASE("deep constraints keep the optimality certificate") {
    // the feasible width of m_j shrinks like 4^{-j}, so the gradient is
    // measured with width-scaled central differences
    for (const Constraint& c :
         {Constraint({{5, 0.22L}}), Constraint({{6, 0.2L}}), Constraint({{2, 0.3L}, {5, 0.17L}})}) {
      const auto lim = solve_uniform_limit(c);
      const auto& head = lim.minimizers[0].head;
      const auto m = canonical_to_moments(head);
      const int i_k = c.max_index();
      std::vector<int> free_idx;
      for (int j = 1; j <= i_k; ++j)
        if (!c.constrains(j)) free_idx.push_back(j);
      auto obj = [&](const std::vector<Real>& x) {
        std::vector<Real> mm(i_k);
        std::size_t nx = 0;
        for (int j = 1; j <= i_k; ++j)
          mm[j - 1] = c.constrains(j) ? c.value_at(j) : x[nx++];
        const Real v = range_objective({Domain::Interval01, mm});
        return std::isfinite(v) ? -v : kInf;
      };
      std::vector<Real> x0;
      for (int j : free_idx) x0.push_back(m.values[j - 1]);
      Real gmax = 0;
      for (std::size_t i = 0; i < x0.size(); ++i) {
        Real w = 1;
        for (int u = 1; u < free_idx[i]; ++u) w *= head.values[u - 1] * (1 - head.values[u - 1]);
        const Real h = 1e-6L * w;
        auto xp = x0, xm = x0;
        xp[i] += h;
        xm[i] -= h;
        gmax = std::max(gmax, std::fabs((obj(xp) - obj(xm)) / (2 * h)));
      }
      CHECK(gmax < 1e-7L);
      CHECK(std::fabs(measure_moment(lim.minimizers[0].measure, i_k) - c.entries.back().value) <
            1e-8L);
    }
  }
  SUBCASE("optimality certificate and start independence") {
    const Constraint c({{3, 0.28L}});
    const auto lim = solve_uniform_limit(c);
    const auto m_head = canonical_to_moments(lim.minimizers[0].head);
    // projected gradient over the unconstrained moment block
    auto obj = [&](const Vec& x) {
      MomentVector m{Domain::Interval01, {x[0], x[1], 0.28L}};
      const Real v = range_objective(m);
      return std::isfinite(v) ? -v : kInf;
    };
    Vec x0(2);
    x0 << m_head.values[0], m_head.values[1];
    // h = 1e-6 keeps the finite-difference truncation below the certificate
    const Vec g = fd_gradient(obj, x0, 1e-6L);
    CHECK(g.cwiseAbs().maxCoeff() < 1e-7L);
    // independent restart from a different interior point lands on the same max
    Vec alt(2);
    alt << 0.55L, 0.36L;
    const auto r = nelder_mead(obj, alt, 0.1L, 8000, 1e-16L);
    CHECK(std::fabs(r.x[0] - x0[0]) < 1e-8L);
    CHECK(std::fabs(r.x[1] - x0[1]) < 1e-8L);
    // measure satisfies its constraint
    CHECK(measure_moment(lim.minimizers[0].measure, 3) == doctest::Approx(0.28).epsilon(1e-9));
  }
}

TEST_CASE("solve_general_limits") {
  SUBCASE("real-line example: tail, atom, support") {
    const auto lim = solve_general_limits(example_r_potential(), Constraint({{1, 0.0L}}),
                                          Domain::RealLine);
    REQUIRE(lim.minimizers.size() == 1);
    CHECK(lim.tail_odd == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(lim.tail_even == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(lim.minimizers[0].head.values[0] == doctest::Approx(0.0).epsilon(1e-12));
    const auto& mu = lim.minimizers[0].measure;
    CHECK(mu.ac->support_lo == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(mu.ac->support_hi == doctest::Approx(2.0).epsilon(1e-9));
    REQUIRE(mu.atoms.size() == 1);
    CHECK(mu.atoms[0].location == doctest::Approx(-0.25).epsilon(1e-9));
    CHECK(mu.atoms[0].weight == doctest::Approx(0.75).epsilon(1e-7));
  }
  SUBCASE("V = 0 on interval01 reduces to the uniform limit") {
    const auto pot = make_potential(Domain::Interval01,
                                    {[](Real) { return Real(0); }, [](Real) { return Real(0); }});
    const Constraint c({{2, 0.3L}});
    const auto lg = solve_general_limits(pot, c, Domain::Interval01);
    const auto lu = solve_uniform_limit(c);
    REQUIRE(lg.minimizers.size() == 1);
    CHECK(std::fabs(lg.tail_odd - 0.5L) < 1e-10L);
    CHECK(std::fabs(lg.tail_even - 0.5L) < 1e-10L);
    for (int i = 0; i < 2; ++i)
      CHECK(std::fabs(lg.minimizers[0].head.values[i] - lu.minimizers[0].head.values[i]) < 1e-7L);
    for (int k = 1; k <= 4; ++k)
      CHECK(std::fabs(measure_moment(lg.minimizers[0].measure, k) -
                      measure_moment(lu.minimizers[0].measure, k)) < 1e-7L);
  }
  SUBCASE("double well: two mirror minimizers with equal weights") {
    const auto pot = make_potential(Domain::RealLine, {[](Real a) {
                                                         const Real t = a * a - 1;
                                                         return t * t;
                                                       },
                                                       [](Real b) { return b * b; }});
    const auto lim = solve_general_limits(pot, Constraint({{2, 1.0L}}), Domain::RealLine);
    REQUIRE(lim.minimizers.size() == 2);
    CHECK(lim.minimizers[0].weight == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(lim.minimizers[1].weight == doctest::Approx(0.5).epsilon(1e-10));
    const Real a0 = lim.minimizers[0].head.values[0];
    const Real a1 = lim.minimizers[1].head.values[0];
    CHECK(std::fabs(a0 + a1) < 1e-8L);  // mirror symmetric
    CHECK(std::fabs(std::fabs(a0) - std::sqrt(0.5L)) < 1e-8L);
    // beta_1 = 1 - alpha_1^2 from the constraint m_2 = 1
    CHECK(lim.minimizers[0].head.values[1] == doctest::Approx(0.5).epsilon(1e-8));
    // every minimizer measure satisfies the constraint
    for (const auto& m : lim.minimizers)
      CHECK(measure_moment(m.measure, 2) == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("unconstrained quadratic potentials give a centered semicircle") {
    const auto pot = make_potential(Domain::RealLine, {[](Real a) { return a * a; },
                                                       [](Real b) { return b * b; }});
    const auto lim = solve_general_limits(pot, Constraint{}, Domain::RealLine);
    REQUIRE(lim.minimizers.size() == 1);
    CHECK(lim.minimizers[0].weight == 1);
    CHECK(std::fabs(lim.tail_odd) < 1e-9L);
    // beta* minimizes beta^2 - log(beta): beta* = 1/sqrt(2)
    CHECK(lim.tail_even == doctest::Approx((double)(1 / std::sqrt(2.0L))).epsilon(1e-9));
    const auto& mu = lim.minimizers[0].measure;
    CHECK(mu.atoms.empty());
    CHECK(mu.ac->support_hi == doctest::Approx((double)(2 * std::sqrt(lim.tail_even))).epsilon(1e-10));
    CHECK(std::fabs(measure_moment(mu, 1)) < 1e-10L);
    CHECK(measure_moment(mu, 2) == doctest::Approx((double)lim.tail_even).epsilon(1e-9));
  }
  SUBCASE("weight normalization") {
    const auto pot = make_potential(Domain::RealLine, {[](Real a) {
                                                         const Real t = a * a - 1;
                                                         return t * t + 0.05L * a;
                                                       },
                                                       [](Real b) { return b * b; }});
    const auto lim = solve_general_limits(pot, Constraint({{2, 1.0L}}), Domain::RealLine);
    Real total = 0;
    for (const auto& m : lim.minimizers) total += m.weight;
    CHECK(std::fabs(total - 1) < 1e-10L);
  }
  SUBCASE("halfline linear potentials give a marchenko-pastur-type limit") {
    // W_j(z) = z - log z has its minimum at z = 1, so the tail coordinates are
    // (1,1): support [0,4] and a simple zero-weight root of D at the origin
    const auto pot = make_potential(Domain::HalfLine,
                                    {[](Real z) { return z; }, [](Real z) { return z; }});
    REQUIRE(pot.growth_ok);
    const auto lim = solve_general_limits(pot, Constraint({{1, 1.5L}}), Domain::HalfLine);
    REQUIRE(lim.minimizers.size() == 1);
    CHECK(lim.tail_odd == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(lim.tail_even == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(lim.minimizers[0].head.values[0] == doctest::Approx(1.5).epsilon(1e-12));
    const auto& mu = lim.minimizers[0].measure;
    CHECK(mu.ac->support_lo == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(mu.ac->support_hi == doctest::Approx(4.0).epsilon(1e-9));
    // the boundary root at 0 carries no mass (z_1* = z_2*)
    for (const auto& a : mu.atoms) CHECK(std::fabs(a.location) > 1e-6L);
    CHECK(std::fabs(mu.total_mass() - 1) < 1e-8L);
    CHECK(measure_moment(mu, 1) == doctest::Approx(1.5).epsilon(1e-8));
  }
  SUBCASE("general clt covariance matches the analytic curvature (real line)") {
    const auto pot = example_r_potential();
    const Constraint c({{1, 0.0L}});
    const auto lim = solve_general_limits(pot, c, Domain::RealLine);
    const auto S = clt_covariance_general(lim, 2, c, pot);
    // m_1 pinned: zero row/column; m_2 = beta_1 with W_2'' (1/4) = 16 + 16
    CHECK(S(0, 0) == 0);
    CHECK(S(0, 1) == 0);
    CHECK(S(1, 1) == doctest::Approx(1.0 / 32).epsilon(1e-6));
  }
  SUBCASE("non-integrable potential") {
    const auto pot = make_potential(Domain::HalfLine,
                                    {[](Real) { return Real(0); }, [](Real) { return Real(0); }});
    CHECK_FALSE(pot.growth_ok);
    CHECK_THROWS_AS(solve_general_limits(pot, Constraint{}, Domain::HalfLine),
                    NonIntegrableError);
  }
  SUBCASE("growth check examples") {
    CHECK(example_r_potential().growth_ok);
    // linear growth on the half line is not enough
    const auto weak = make_potential(Domain::HalfLine, {[](Real z) { return std::log(1 + z); },
                                                        [](Real z) { return std::log(1 + z); }});
    CHECK_FALSE(weak.growth_ok);
  }
}

TEST_CASE("clt_covariance") {
  SUBCASE("unconstrained l=1: asymptotic variance 1/8") {
    const auto lim = solve_uniform_limit(Constraint{});
    const auto S = clt_covariance_uniform(lim, 1, Constraint{});
    CHECK(S(0, 0) == doctest::Approx(0.125).epsilon(1e-9));
  }
  SUBCASE("unconstrained l=2 matches the hand computation") {
    const auto lim = solve_uniform_limit(Constraint{});
    const auto S = clt_covariance_uniform(lim, 2, Constraint{});
    CHECK(S(0, 0) == doctest::Approx(0.125).epsilon(1e-8));
    CHECK(S(0, 1) == doctest::Approx(0.125).epsilon(1e-8));
    CHECK(S(1, 1) == doctest::Approx(0.1328125).epsilon(1e-8));
  }
  SUBCASE("constrained rows and columns vanish; rank l-k") {
    const Constraint c({{1, 0.3L}});
    const auto lim = solve_uniform_limit(c);
    const int l = 3;
    const auto S = clt_covariance_uniform(lim, l, c);
    for (int i = 0; i < l; ++i) {
      CHECK(S(0, i) == 0);
      CHECK(S(i, 0) == 0);
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(S);
    int positive = 0;
    for (int i = 0; i < l; ++i)
      if (es.eigenvalues()(i) > 1e-12L) ++positive;
    CHECK(positive == l - c.k());
    for (int i = 0; i < l; ++i) CHECK(es.eigenvalues()(i) > -1e-14L);  // PSD
  }
  SUBCASE("general-case covariance agrees with the uniform one for V = 0") {
    const auto pot = make_potential(Domain::Interval01,
                                    {[](Real) { return Real(0); }, [](Real) { return Real(0); }});
    const Constraint c({{2, 0.3L}});
    const auto lg = solve_general_limits(pot, c, Domain::Interval01);
    const auto lu = solve_uniform_limit(c);
    const auto Sg = clt_covariance_general(lg, 3, c, pot);
    const auto Su = clt_covariance_uniform(lu, 3, c);
    CHECK((Sg - Su).cwiseAbs().maxCoeff() < 1e-5L);
  }
  SUBCASE("hessian asymmetry before symmetrization stays small") {
    // independently recompute H(i,j) and H(j,i) by nested one-sided gradients
    const Constraint c;
    auto obj = [&](const Vec& x) {
      MomentVector m{Domain::Interval01, {x[0], x[1]}};
      const Real v = range_objective(m);
      return std::isfinite(v) ? -v : kInf;
    };
    Vec x(2);
    x << 0.5L, 0.375L;
    const Real h = 1e-5L;
    auto d_i = [&](int i, const Vec& y) {
      Vec yp = y, ym = y;
      yp[i] += h;
      ym[i] -= h;
      return (obj(yp) - obj(ym)) / (2 * h);
    };
    auto second = [&](int i, int j) {
      Vec xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      return (d_i(i, xp) - d_i(i, xm)) / (2 * h);
    };
    const Real h01 = second(0, 1), h10 = second(1, 0);
    CHECK(std::fabs(h01 - h10) < 1e-5L * std::max<Real>(1, std::fabs(h01)));
  }
}

TEST_CASE("rate functions") {
  SUBCASE("uniform rate vanishes exactly at the barycenter") {
    const Constraint c({{1, 0.3L}});
    const auto lim = solve_uniform_limit(c);
    CanonicalCoordinates full = lim.minimizers[0].head;
    for (int j = full.size() + 1; j <= 4; ++j) full.values.push_back(0.5L);
    const auto m_star = canonical_to_moments(full);
    CHECK(rate_eval_uniform(m_star, c) == 0);
  }
  SUBCASE("infeasible point gives +inf") {
    const Constraint c({{1, 0.3L}});
    CHECK(std::isinf((double)rate_eval_uniform({Domain::Interval01, {0.4L}}, c)));
    CHECK(std::isinf(
        (double)rate_eval_uniform({Domain::Interval01, {0.3L, 0.05L}}, c)));  // outside
  }
  SUBCASE("unconstrained rate matches kl_arcsine") {
    CHECK(rate_eval_uniform({Domain::Interval01, {0.3L}}, Constraint{}) ==
          doctest::Approx((double)kl_arcsine({0.3L})).epsilon(1e-12));
  }
  SUBCASE("rate >= 0 and equals -range_objective + shift") {
    std::mt19937_64 eng(17);
    std::uniform_real_distribution<double> U(0.25, 0.75);
    const Constraint c;
    for (int rep = 0; rep < 50; ++rep) {
      std::vector<Real> p(4);
      for (auto& v : p) v = U(eng);
      const auto m = canonical_to_moments({Domain::Interval01, p});
      const Real rate = rate_eval_uniform(m, c);
      CHECK(rate >= 0);
      // unconstrained: the shift is -log(width) at the arcsine point, so the
      // rate collapses to -range_objective = kl_arcsine
      CHECK(std::fabs(rate + range_objective(m)) < 1e-10L);
      CHECK(std::fabs(rate - kl_arcsine(p)) < 1e-10L);
    }
  }
  SUBCASE("general rate: zero at the minimizer, reduces to uniform for V = 0") {
    const auto pot = make_potential(Domain::Interval01,
                                    {[](Real) { return Real(0); }, [](Real) { return Real(0); }});
    const Constraint c({{1, 0.3L}});
    const auto lim = solve_general_limits(pot, c, Domain::Interval01);
    CanonicalCoordinates full = lim.minimizers[0].head;
    for (int j = full.size() + 1; j <= 3; ++j)
      full.values.push_back(j % 2 ? lim.tail_odd : lim.tail_even);
    const auto m_star = canonical_to_moments(full);
    CHECK(rate_eval_general(m_star, pot, c) == 0);
    std::mt19937_64 eng(19);
    std::uniform_real_distribution<double> U(0.3, 0.7);
    for (int rep = 0; rep < 10; ++rep) {
      const MomentVector m =
          canonical_to_moments({Domain::Interval01, {0.3L, Real(U(eng)), Real(U(eng))}});
      const Real rg = rate_eval_general(m, pot, c);
      const Real ru = rate_eval_uniform(m, c);
      CHECK(std::fabs(rg - ru) < 1e-8L);
      CHECK(rg >= 0);
    }
    CHECK(std::isinf((double)rate_eval_general({Domain::Interval01, {0.5L}}, pot, c)));
  }
}

TEST_CASE("mdp_rate") {
  const Constraint c({{2, 0.3L}});
  const auto lim = solve_uniform_limit(c);
  const auto S = clt_covariance_uniform(lim, 3, c);
  SUBCASE("zero at the origin") {
    CHECK(mdp_rate(Vec::Zero(3), c, S) == 0);
  }
  SUBCASE("+inf off the constraint subspace") {
    Vec x = Vec::Zero(3);
    x[1] = 0.1L;
    CHECK(std::isinf((double)mdp_rate(x, c, S)));
  }
  SUBCASE("nonnegative quadratic form on the subspace") {
    std::mt19937_64 eng(23);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int rep = 0; rep < 50; ++rep) {
      Vec x(3);
      x << Real(U(eng)), 0.0L, Real(U(eng));
      const Real v = mdp_rate(x, c, S);
      CHECK(v >= 0);
      CHECK(v == doctest::Approx((double)(0.5L * x.dot(S * x))).epsilon(1e-15));
    }
  }
}

TEST_CASE("volume") {
  SUBCASE("vol(M_2) = 1/6 by product formula and 2-d quadrature") {
    CHECK(std::fabs(volume_unconstrained(2) - Real(1) / 6) < 1e-15L);
    // independent oracle: area between m_1^2 <= m_2 <= m_1
    const Real area =
        integrate_gl([](Real m1) { return m1 - m1 * m1; }, 0, 1, 64);
    CHECK(std::fabs(volume_unconstrained(2) - area) < 1e-9L);
    CHECK(std::fabs(volume_unconstrained(1) - 1) < 1e-18L);
  }
  SUBCASE("regime dichotomy on m_3") {
    CHECK(volume_ratio(Constraint({{3, 0.3125L}}), 50).regime == VolumeRegime::Polynomial);
    CHECK(volume_ratio(Constraint({{3, 0.1L}}), 50).regime == VolumeRegime::Exponential);
  }
  SUBCASE("arcsine-pinning constraint gives polynomial growth in n") {
    const Constraint c({{3, 0.3125L}});
    const auto v50 = volume_ratio(c, 50);
    const auto v200 = volume_ratio(c, 200);
    CHECK(v200.asymptotic / v50.asymptotic == doctest::Approx(2.0).epsilon(1e-10));  // n^{k/2}
  }
  SUBCASE("off-arcsine constraint decays exponentially") {
    const Constraint c({{3, 0.1L}});
    const auto v50 = volume_ratio(c, 50);
    const auto v60 = volume_ratio(c, 60);
    CHECK(v60.asymptotic < v50.asymptotic);
    CHECK(v60.asymptotic / v50.asymptotic < std::exp(Real(-1)));
  }
  SUBCASE("not admissible") {
    CHECK_THROWS_AS(volume_ratio(Constraint({{1, 1.5L}}), 10), NotAdmissibleError);
  }
}

TEST_CASE("arcsine_moment") {
  CHECK(arcsine_moment(1) == 0.5L);
  CHECK(arcsine_moment(2) == 0.375L);
  CHECK(arcsine_moment(3) == 0.3125L);
  CHECK(arcsine_moment(4) == doctest::Approx(35.0 / 128).epsilon(1e-18));
}
