#include <doctest.h>

#include <cmath>
#include <random>

#include "momspace/spectral.hpp"

using namespace momspace;

TEST_CASE("jacobi_matrix") {
  SUBCASE("size 1") {
    const auto J = jacobi_matrix({{0.7L}, {}}, 1);
    CHECK(J.size() == 1);
    CHECK(J.diagonal[0] == 0.7L);
  }
  SUBCASE("offdiagonal is sqrt(beta)") {
    const auto J = jacobi_matrix({{0, 0}, {1}}, 2);
    CHECK(J.offdiagonal[0] == 1);
    const auto J2 = jacobi_matrix({{0.5L, 0.5L, 0.5L}, {0.125L, 0.0625L}}, 3);
    CHECK(J2.offdiagonal[0] == doctest::Approx(std::sqrt(0.125)).epsilon(1e-15));
    CHECK(J2.offdiagonal[1] == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("insufficient coefficients") {
    CHECK_THROWS_AS(jacobi_matrix({{0.5L}, {}}, 2), Error);
  }
}

TEST_CASE("spectral_measure") {
  SUBCASE("single entry is a point mass") {
    const auto mu = spectral_measure(jacobi_matrix({{0.7L}, {}}, 1));
    REQUIRE(mu.atoms.size() == 1);
    CHECK(mu.atoms[0].location == doctest::Approx(0.7).epsilon(1e-18));
    CHECK(mu.atoms[0].weight == doctest::Approx(1.0).epsilon(1e-18));
  }
  SUBCASE("2x2 with alpha=(0,0), beta=1: eigenvalues +-1, weights 1/2") {
    const auto mu = spectral_measure(jacobi_matrix({{0, 0}, {1}}, 2));
    REQUIRE(mu.atoms.size() == 2);
    CHECK(mu.atoms[0].location == doctest::Approx(-1.0).epsilon(1e-16));
    CHECK(mu.atoms[1].location == doctest::Approx(1.0).epsilon(1e-16));
    CHECK(mu.atoms[0].weight == doctest::Approx(0.5).epsilon(1e-16));
    CHECK(mu.atoms[1].weight == doctest::Approx(0.5).epsilon(1e-16));
    CHECK(measure_moment(mu, 2) == doctest::Approx(1.0).epsilon(1e-16));
  }
  SUBCASE("arcsine truncation N=6 reproduces binomial moments") {
    const CanonicalCoordinates c{Domain::Interval01, std::vector<Real>(12, 0.5L)};
    const auto rec = canonical_to_recurrence(c);
    const auto mu = spectral_measure(jacobi_matrix(rec, 6));
    // m_l = C(2l,l)/4^l
    Real expected = 1;
    for (int l = 1; l <= 5; ++l) {
      expected *= Real(2 * l - 1) / (2 * l);
      CHECK(std::fabs(measure_moment(mu, l) - expected) < 1e-10L);
    }
    Real mass = 0;
    for (const auto& a : mu.atoms) mass += a.weight;
    CHECK(std::fabs(mass - 1) < 1e-12L);
  }
}

TEST_CASE("moment identity m_l = (J^l)_{1,1}") {
  std::mt19937_64 eng(31);
  std::uniform_real_distribution<double> U(0.2, 0.8);
  for (int rep = 0; rep < 5; ++rep) {
    const int N = 25;
    std::vector<Real> p(2 * N);
    for (auto& v : p) v = U(eng);
    const auto rec = canonical_to_recurrence({Domain::Interval01, p});
    const auto J = jacobi_matrix(rec, N);
    const auto mu = spectral_measure(J);
    const auto m = moments_from_recurrence(rec, 2 * N - 1);
    for (int l = 1; l <= 2 * N - 1; ++l) {
      Real s = 0;
      for (const auto& a : mu.atoms) s += a.weight * std::pow(a.location, Real(l));
      CHECK(std::fabs(s - m[l - 1]) < 1e-10L);
    }
  }
}

TEST_CASE("eigenvalue interlacing between N and N+1") {
  std::mt19937_64 eng(55);
  std::uniform_real_distribution<double> U(0.2, 0.8);
  std::vector<Real> p(40);
  for (auto& v : p) v = U(eng);
  const auto rec = canonical_to_recurrence({Domain::Interval01, p});
  for (int N = 2; N <= 12; ++N) {
    const auto a = spectral_measure(jacobi_matrix(rec, N)).atoms;
    const auto b = spectral_measure(jacobi_matrix(rec, N + 1)).atoms;
    for (int i = 0; i < N; ++i) {
      CHECK(a[i].location - b[i].location > 1e-12L);
      CHECK(b[i + 1].location - a[i].location > 1e-12L);
    }
  }
}

TEST_CASE("trace equals the diagonal sum") {
  std::mt19937_64 eng(77);
  std::uniform_real_distribution<double> U(0.15, 0.85);
  std::vector<Real> p(60);
  for (auto& v : p) v = U(eng);
  const auto rec = canonical_to_recurrence({Domain::Interval01, p});
  const int N = 30;
  const auto mu = spectral_measure(jacobi_matrix(rec, N));
  Real tr = 0, da = 0;
  for (const auto& a : mu.atoms) tr += a.location;
  for (int i = 0; i < N; ++i) da += rec.alphas[i];
  CHECK(std::fabs(tr - da) < 1e-10L);
}
