#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "mtrans/special.hpp"

using namespace mtrans;

namespace {

// partial sums plus an integral tail with midpoint correction; valid Re s > 1
cplx hurwitz_brute(cplx s, double a, int terms) {
  cplx acc = 0.0;
  for (int n = 0; n < terms; ++n) acc += std::exp(-s * std::log(a + n));
  double w = a + terms;
  acc += std::exp(-s * std::log(w)) * (w / (s - 1.0) + 0.5);
  return acc;
}

}  // namespace

TEST_CASE("zeta(2,1) = pi^2/6 against brute force") {
  cplx v = hurwitz_zeta(2.0, 1.0);
  CHECK(std::abs(v - std::numbers::pi * std::numbers::pi / 6.0) < 1e-12);
  CHECK(std::abs(v - hurwitz_brute(2.0, 1.0, 1000000)) < 1e-11);
}

TEST_CASE("zeta(4,2) = pi^4/90 - 1") {
  double pi4 = std::pow(std::numbers::pi, 4.0);
  CHECK(std::abs(hurwitz_zeta(4.0, 2.0) - (pi4 / 90.0 - 1.0)) < 1e-13);
}

TEST_CASE("shift identity zeta(s,a) = a^{-s} + zeta(s,a+1)") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> re(-3.0, 4.0), im(-40.0, 40.0), av(0.1, 50.0);
  for (int i = 0; i < 200; ++i) {
    cplx s(re(rng), im(rng));
    if (std::abs(s - cplx(1.0, 0.0)) < 0.1) continue;
    double a = av(rng);
    cplx lhs = hurwitz_zeta(s, a);
    cplx rhs = std::exp(-s * std::log(a)) + hurwitz_zeta(s, a + 1.0);
    CHECK(std::abs(lhs - rhs) < 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("agreement with brute force for Re s > 1.5") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> re(1.5, 4.0), im(-30.0, 30.0), av(0.2, 20.0);
  for (int i = 0; i < 200; ++i) {
    cplx s(re(rng), im(rng));
    double a = av(rng);
    cplx em = hurwitz_zeta(s, a);
    cplx bf = hurwitz_brute(s, a, 30000);
    CHECK(std::abs(em - bf) < 1e-11 * (1.0 + std::abs(em)));
  }
}

TEST_CASE("zeta(0,a) = 1/2 - a") {
  for (double a : {0.3, 1.0, 2.5, 17.0, 99.5})
    CHECK(std::abs(hurwitz_zeta(0.0, a) - (0.5 - a)) < 1e-12 * (1.0 + a));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(hurwitz_zeta(1.0, 2.0), PoleError);
  CHECK_THROWS_AS(hurwitz_zeta(2.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(hurwitz_zeta(2.0, -1.0), std::domain_error);
}

TEST_CASE("principal powers") {
  CHECK(std::abs(principal_power(4.0, -0.5) - 0.5) < 1e-15);
  CHECK_THROWS(principal_power(0.0, cplx(-1.0, 0.0)));
  CHECK(principal_power(0.0, 2.0) == cplx(0.0));

  // positive real base stays positive real for real s
  for (double x = -0.49; x < 2.5; x += 0.25)
    for (int n = 1; n <= 5; ++n) {
      cplx v = pow_sq(cplx(x + n, 0.0), cplx(0.7, 0.0));
      CHECK(v.imag() == 0.0);
      CHECK(v.real() > 0.0);
    }

  // conjugation symmetry of pow_sq off the axis
  cplx u(2.0, 0.3), s(0.5, 9.0);
  cplx lhs = pow_sq(std::conj(u), std::conj(s));
  CHECK(std::abs(lhs - std::conj(pow_sq(u, s))) < 1e-12);
}

TEST_CASE("pow_sq matches |u|^{-2s} on both half lines") {
  cplx s(0.6, 3.0);
  for (double u : {-2.5, -0.4, 0.7, 3.1}) {
    cplx direct = std::exp(-2.0 * s * std::log(std::abs(u)));
    CHECK(std::abs(pow_sq(cplx(u, 0.0), s) - direct) < 1e-13 * std::abs(direct));
  }
}

TEST_CASE("strip validation") {
  CHECK_THROWS(SpectralParam::strip(cplx(0.5, 0.0)));
  CHECK_THROWS(SpectralParam::strip(cplx(1.2, 0.0)));
  SpectralParam ok = SpectralParam::strip(cplx(0.5, 9.0));
  CHECK(ok.strip_checked);
}
