#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mtrans/feq.hpp"
#include "mtrans/transfer.hpp"

using namespace mtrans;

namespace {
constexpr double kPhi = 1.6180339887498948482;

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * (i + 0.5) / n;
  return out;
}
}  // namespace

TEST_CASE("three term equation: 1/x at s=1 telescopes") {
  SpectralParam s = SpectralParam::any(1.0);
  PiecewiseFn p = build_piecewise([](cplx z) { return 1.0 / z; },
                                  {CycSpan::interval(0.2, 8.0)}, {}, s);
  CHECK(three_term_residual(p, grid(1.3, 5.0, 50)) < 1e-12);
  PiecewiseFn zero = build_piecewise([](cplx) { return cplx(0.0); },
                                     {CycSpan::interval(0.2, 8.0)}, {}, s);
  CHECK(three_term_residual(zero, grid(1.3, 5.0, 20)) == 0.0);
}

TEST_CASE("four term equation: zero solves, constants do not") {
  SpectralParam s = SpectralParam::strip(cplx(0.44, 0.8));
  PiecewiseFn zero = build_piecewise([](cplx) { return cplx(0.0); },
                                     {CycSpan::interval(-2.6, 1.6)}, {}, s);
  auto pts = grid(-0.8, 0.8, 30);
  CHECK(four_term_residual(zero, pts) == 0.0);
  PiecewiseFn one = build_piecewise([](cplx) { return cplx(1.0); },
                                    {CycSpan::interval(-2.6, 1.6)}, {}, s);
  // residual of 1 is |(x+2)^{-2s} - (2-x)^{-2s}|, nonzero off x=0
  double r = four_term_residual(one, {0.5});
  cplx expect = pow_sq(cplx(2.5, 0.0), s.s) - pow_sq(cplx(1.5, 0.0), s.s);
  CHECK(r == doctest::Approx(std::abs(expect)).epsilon(1e-10));
}

TEST_CASE("parity decomposition") {
  SpectralParam s1 = SpectralParam::any(1.0);
  PiecewiseFn p = build_piecewise([](cplx z) { return 1.0 / z; },
                                  {CycSpan::interval(0.1, 10.0)}, {}, s1);
  ParityParts parts = parity_decompose(p, 3.4);
  // 1/x is C-even at s=1: the odd part vanishes
  for (double x : grid(0.4, 2.9, 9)) {
    CHECK(std::abs(parts.plus.eval(x) - 1.0 / x) < 1e-11);
    CHECK(std::abs(parts.minus.eval(x)) < 5e-11);
  }

  // random analytic P: reassembly and involution algebra
  SpectralParam s = SpectralParam::strip(cplx(0.7, 1.2));
  PiecewiseFn q = build_piecewise(
      [](cplx z) { return std::exp(-0.3 * z) + 0.2 * z; }, {CycSpan::interval(0.05, 20.0)}, {}, s);
  ParityParts qp = parity_decompose(q, 3.4);
  GroupElem c = gen::C();
  for (double x : grid(0.5, 2.7, 11)) {
    cplx total = qp.plus.eval(x) + qp.minus.eval(x);
    CHECK(std::abs(total - q.value(x)) < 1e-12 * (1.0 + std::abs(q.value(x))));
    // P±|C = ±P±
    cplx pc = qp.plus.slashed(c, cplx(x, 0.0));
    cplx mc = qp.minus.slashed(c, cplx(x, 0.0));
    CHECK(std::abs(pc - qp.plus.eval(x)) < 1e-10 * (1.0 + std::abs(pc)));
    CHECK(std::abs(mc + qp.minus.eval(x)) < 1e-10 * (1.0 + std::abs(mc)));
  }
  CHECK_THROWS(parity_decompose(q, 0.9));
}

TEST_CASE("parity commutes with the three-term residual") {
  SpectralParam s = SpectralParam::any(1.0);
  PiecewiseFn p = build_piecewise([](cplx z) { return 1.0 / z; },
                                  {CycSpan::interval(0.05, 30.0)}, {}, s);
  ParityParts parts = parity_decompose(p, 5.0, 72);
  // wrap the plus part for residual evaluation
  PiecewiseFn pp = assemble({parts.plus}, {}, s);
  double base = three_term_residual(p, grid(1.5, 3.0, 25));
  double dec = three_term_residual(pp, grid(1.5, 3.0, 25));
  CHECK(dec <= base + 1e-10);
}

TEST_CASE("simple asymptotics membership") {
  SpectralParam s = SpectralParam::strip(cplx(0.62, 0.35));
  // exact basis elements at infinity
  auto f = [&](double x) {
    return std::exp((1.0 - 2.0 * s.s) * std::log(x)) + std::exp(-2.0 * s.s * std::log(x));
  };
  AsymExpansion inf = fit_asymptotic(f, AsymExpansion::Loc::Inf, +1, s, 8);
  REQUIRE(inf.converged);
  CHECK(std::abs(inf.coeffs[0] - 1.0) < 1e-8);
  CHECK(std::abs(inf.coeffs[1] - 1.0) < 1e-8);

  // at s=1 the Gauss period function 1/x lies in both one-sided bases
  SpectralParam s1 = SpectralParam::any(1.0);
  SimpleAsymptotics sa = check_simple_asymptotics([](double x) { return cplx(1.0 / x); }, s1);
  CHECK(sa.ok);
  CHECK(std::abs(sa.at_zero.coeffs[0] - 1.0) < 1e-8);
  CHECK(std::abs(sa.at_inf.coeffs[0] - 1.0) < 1e-8);

  // oscillation defeats the basis
  SimpleAsymptotics bad =
      check_simple_asymptotics([](double x) { return cplx(std::sin(x)); }, s);
  CHECK(!bad.ok);
}

TEST_CASE("endpoint recursion increases to phi^2") {
  double a = 1.0;
  CHECK(endpoint_step(a) == doctest::Approx(2.0));
  CHECK(endpoint_step(2.0) == doctest::Approx(2.5));
  CHECK(endpoint_step(2.5) == doctest::Approx(2.6));
  double prev = 1.0;
  for (int i = 0; i < 40; ++i) {
    double next = endpoint_step(prev);
    CHECK(next >= prev);
    prev = next;
  }
  CHECK(std::abs(prev - kPhi * kPhi) < 1e-10);
}

TEST_CASE("extension of a leading eigenpair and its restriction round trip") {
  SpectralParam s = SpectralParam::strip(cplx(0.7, 0.0));
  TruncationParams tp;
  tp.n = 40;
  OperatorMatrix op = build_operator(OperatorKind::Nicf, s, tp);
  auto eigs = eigenpairs(op);
  const EigenPair& top = eigs[0];
  AnalyticFn g1 = eigenfunction(op, top, 0);
  AnalyticFn g2 = eigenfunction(op, top, 1);
  PiecewiseFn f1 = assemble({g1}, {}, s);
  PiecewiseFn f2 = assemble({g2}, {}, s);

  ExtendOptions eo;
  eo.lambda_ = top.lambda;
  ExtendedPair ext = extend_to_max_interval(f1, f2, s, eo);
  CHECK(ext.residual < 1e-8);
  // intervals contain the golden-ratio targets up to the default margin
  CHECK(ext.h1.covers(-2.5));
  CHECK(ext.h1.covers(1.55));
  CHECK(ext.h2.covers(2.5));
  // h1 = h2|T
  GroupElem t = gen::T();
  for (double x : grid(-2.4, 1.5, 17)) {
    cplx lhs = ext.h1.value(x);
    cplx rhs = ext.h2.slashed(t, x);
    CHECK(std::abs(lhs - rhs) < 1e-8 * (1.0 + std::abs(lhs)));
  }
  // restriction of the extension re-extends to the same values
  PiecewiseFn r1 = assemble({restrict_fn(ext.h1, -0.9, 0.3)}, {}, s);
  PiecewiseFn r2 = assemble({restrict_fn(ext.h2, -0.3, 0.9)}, {}, s);
  ExtendedPair again = extend_to_max_interval(r1, r2, s, eo);
  for (double x : grid(-2.3, 1.45, 9)) {
    cplx a = ext.h1.value(x), b = again.h1.value(x);
    CHECK(std::abs(a - b) < 1e-7 * (1.0 + std::abs(a)));
  }
}

TEST_CASE("extension refuses non-eigenpair input") {
  SpectralParam s = SpectralParam::strip(cplx(0.7, 0.0));
  PiecewiseFn junk1 = build_piecewise([](cplx z) { return std::exp(z); },
                                      {CycSpan::interval(-0.7, 0.3)}, {}, s);
  PiecewiseFn junk2 = build_piecewise([](cplx z) { return std::cos(z); },
                                      {CycSpan::interval(-0.3, 0.7)}, {}, s);
  CHECK_THROWS_AS(extend_to_max_interval(junk1, junk2, s), ResolutionError);
}
