#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mtrans/cohomology.hpp"
#include "mtrans/feq.hpp"
#include "mtrans/transfer.hpp"

using namespace mtrans;

namespace {

constexpr double kPhi = 1.6180339887498948482;

std::function<cplx(cplx)> vomega(SpectralParam s, std::vector<cplx> p) {
  return [s, p = std::move(p)](cplx x) {
    cplx t = (x - cplx(0, 1)) / (x + cplx(0, 1));
    cplx acc = 0.0, pw = 1.0;
    for (const cplx& c : p) {
      acc += c * pw;
      pw *= t;
    }
    return std::exp(-s.s * std::log(1.0 + x * x)) * acc;
  };
}

// coboundary cocycle psi_gamma = v|(1-gamma) with analytic v: always a cocycle
Cocycle coboundary(SpectralParam s, const PiecewiseFn& v) {
  Cocycle c;
  c.flavor = CocycleFlavor::Plain;
  c.s = s;
  GroupElem sM = gen::S(), t = gen::T();
  c.psi_S = build_piecewise([&](cplx z) { return v.value(z.real()) - v.slashed(sM, z.real()); },
                            {CycSpan::all()}, {}, s);
  c.psi_T = build_piecewise([&](cplx z) { return v.value(z.real()) - v.slashed(t, z.real()); },
                            {CycSpan::all()}, {}, s);
  return c;
}

// the four-term solution attached to the eigenvalue-1 pair at s = 1
// (the Selberg zeta vanishes at s = 1, so the pair operator has a 1-eigenpair)
PiecewiseFn eigen_g_at_s1(SpectralParam s) {
  TruncationParams tp;
  tp.n = 36;
  OperatorMatrix op = build_operator(OperatorKind::Nicf, s, tp);
  auto ker = kernel_basis(op, 1.0, 1e-6);
  REQUIRE(ker.size() == 1);
  AnalyticFn g1 = eigenfunction(op, ker[0], 0);
  AnalyticFn g2 = eigenfunction(op, ker[0], 1);
  PiecewiseFn f1 = assemble({g1}, {}, s);
  PiecewiseFn f2 = assemble({g2}, {}, s);
  ExtendedPair ext = extend_to_max_interval(f1, f2, s);
  return ext.h1;
}

}  // namespace

TEST_CASE("cocycle values: identity, relations, word independence") {
  SpectralParam s = SpectralParam::strip(cplx(0.64, 0.9));
  PiecewiseFn v = build_piecewise(vomega(s, {cplx(1.0), cplx(0.3, -0.4)}), {CycSpan::all()}, {}, s);
  Cocycle c = coboundary(s, v);

  // psi_identity = 0 (empty word)
  CHECK(std::abs(c.value_at({}, 0.7)) == 0.0);

  // value on (ST)^3 vanishes
  Word st3x{Gen::S, Gen::T, Gen::S, Gen::T, Gen::S, Gen::T};
  for (double x : {-2.3, 0.4, 1.9})
    CHECK(std::abs(c.value_at(st3x, x)) < 1e-9 * (1.0 + std::abs(v.value(x))));

  // generator relations
  RelationReport rep = verify_generator_relations(c);
  CHECK(rep.rel_S < 1e-9 * (1.0 + rep.scale));
  CHECK(rep.rel_TinvS < 1e-9 * (1.0 + rep.scale));

  // word-representative independence: TST vs ST^{-1}S
  Word w1{Gen::T, Gen::S, Gen::T};
  Word w2{Gen::S, Gen::Tinv, Gen::S};
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> xs(-3.0, 3.0);
  for (int i = 0; i < 25; ++i) {
    double x = xs(rng);
    cplx a = c.value_at(w1, x), b = c.value_at(w2, x);
    CHECK(std::abs(a - b) < 1e-9 * (1.0 + std::abs(a)));
  }
  // coboundary identity: psi_w = v|(1-w)
  GroupElem w = apply_word(w1);
  for (double x : {-1.4, 0.2, 2.6}) {
    cplx expect = v.value(x) - v.slashed(w, x);
    CHECK(std::abs(c.value_at(w1, x) - expect) < 1e-9 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("random non-cocycle data is flagged") {
  SpectralParam s = SpectralParam::strip(cplx(0.6, 0.4));
  Cocycle bad;
  bad.flavor = CocycleFlavor::Plain;
  bad.s = s;
  bad.psi_S = build_piecewise(vomega(s, {cplx(0.8), cplx(-0.2)}), {CycSpan::all()}, {}, s);
  bad.psi_T = build_piecewise(vomega(s, {cplx(0.1), cplx(0.5, 0.3)}), {CycSpan::all()}, {}, s);
  RelationReport rep = verify_generator_relations(bad);
  CHECK(rep.rel_S > 1e-3);
}

TEST_CASE("theta of the zero function is the zero cocycle") {
  SpectralParam s = SpectralParam::strip(cplx(0.58, 0.75));
  PiecewiseFn zero = build_piecewise([](cplx) { return cplx(0.0); },
                                     {CycSpan::interval(-2.6, 1.6)},
                                     {Sing::at(-2.617, 1e-3), Sing::at(1.617, 1e-3)}, s);
  ThetaResult th = theta(zero);
  for (double x : {-2.0, -0.5, 0.9})
    CHECK(std::abs(th.reassembled.value(x)) < 1e-12);
  CHECK(th.reassembly_residual < 1e-7);
}

TEST_CASE("theta of the eigen-derived solution at s=1") {
  SpectralParam s = SpectralParam::any(1.0);
  PiecewiseFn g = eigen_g_at_s1(s);
  // the extension solves the four term equation
  std::vector<double> pts;
  for (int j = 0; j < 50; ++j) pts.push_back(-1.55 + 3.1 * (j + 0.5) / 50.0);
  CHECK(four_term_residual(g, pts) < 1e-8 * 10.0);

  ThetaResult th = theta(g);
  CHECK(th.reassembly_residual < 1e-7);

  // generator relations of the Fib cocycle
  RelationReport rep = verify_generator_relations(th.cocycle);
  CHECK(rep.rel_S < 1e-7 * (1.0 + rep.scale));
  CHECK(rep.rel_TinvS < 1e-7 * (1.0 + rep.scale));

  // complement-side identity: c_{-phi^2,phi} = -k|ST - h|T^{-1}S on (phi,-phi^2)_c
  GroupElem st = apply_word({Gen::S, Gen::T});
  GroupElem tinv_s = apply_word({Gen::Tinv, Gen::S});
  GroupElem t = gen::T();
  for (double x : {2.0, 5.0, -4.0, -2.8}) {
    cplx lhs = th.c_phi_inv.slashed(t, x) + th.c_phi.value(x) + th.c_phi.slashed(st, x);
    cplx rhs = -th.k.slashed(st, x) - th.h.slashed(tinv_s, x);
    CHECK(std::abs(lhs - rhs) < 1e-8 * (1.0 + std::abs(rhs)));
  }

  // homogeneous/inhomogeneous consistency c_{gamma^-1(-phi), delta^-1(-phi)}
  // = psi_{gamma delta^-1}|delta with gamma = T^-1, delta = S:
  // c_{-phi^2, 1/phi}|S^{-1}... sampled via the cocycle law instead:
  // psi_{T^-1 S} = psi_{T^-1}|S + psi_S pointwise
  Word wTinvS{Gen::Tinv, Gen::S};
  for (double x : {-0.9, 0.3, 1.2}) {
    cplx direct = th.cocycle.value_at(wTinvS, x);
    cplx expect = -th.c_phi.value(x);
    CHECK(std::abs(direct - expect) < 1e-8 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("theta flags non-solutions through reassembly") {
  SpectralParam s = SpectralParam::strip(cplx(0.61, 0.44));
  PiecewiseFn notfe = build_piecewise([](cplx z) { return std::exp(0.3 * z); },
                                      {CycSpan::interval(-2.6, 1.6)},
                                      {Sing::at(-2.617, 1e-3), Sing::at(1.617, 1e-3)}, s);
  CHECK_THROWS_AS(theta(notfe), ResolutionError);
}

TEST_CASE("parabolic normalization of a coboundary keeps the class") {
  SpectralParam s = SpectralParam::strip(cplx(0.66, 0.8));
  PiecewiseFn v = build_piecewise(vomega(s, {cplx(0.9), cplx(0.25, 0.15)}), {CycSpan::all()}, {}, s);
  Cocycle c = coboundary(s, v);
  Cocycle n = parabolic_normalize(c);
  CHECK(n.flavor == CocycleFlavor::Parabolic);
  CHECK(!n.psi_T.has_value());
  // normalized psi_S must satisfy the parabolic relation psi_S = psi_S|(T+T')
  RelationReport rep = verify_generator_relations(n);
  CHECK(rep.rel_par < 1e-7 * (1.0 + rep.scale));
  CHECK(rep.rel_S < 1e-7 * (1.0 + rep.scale));
  // already-normalized input returns unchanged
  Cocycle id2 = parabolic_normalize(n);
  for (double x : {0.4, 2.0})
    CHECK(std::abs(id2.psi_S.value(x) - n.psi_S.value(x)) < 1e-12 * (1.0 + std::abs(n.psi_S.value(x))));
}

TEST_CASE("obstruction vanishes for coboundaries and detects junk") {
  SpectralParam s = SpectralParam::strip(cplx(0.57, 0.66));
  PiecewiseFn v = build_piecewise(vomega(s, {cplx(0.7), cplx(-0.15, 0.2)}), {CycSpan::all()}, {}, s);
  Cocycle c = coboundary(s, v);
  Obstruction ob = parabolic_obstruction(c);
  CHECK(ob.periodicity < 1e-8);
  CHECK(ob.sup < 1e-7);

  // zero cocycle
  Cocycle zero;
  zero.flavor = CocycleFlavor::Parabolic;
  zero.s = s;
  zero.psi_S = build_piecewise([](cplx) { return cplx(0.0); }, {CycSpan::all()}, {}, s);
  Obstruction zb = parabolic_obstruction(zero);
  CHECK(zb.sup < 1e-12);

  // non-cocycle junk: P stays periodic in the formula but visibly nonzero
  Cocycle junk;
  junk.flavor = CocycleFlavor::Plain;
  junk.s = s;
  junk.psi_S = build_piecewise(vomega(s, {cplx(0.4), cplx(0.3)}), {CycSpan::all()}, {}, s);
  junk.psi_T = build_piecewise(vomega(s, {cplx(0.8), cplx(-0.6, 0.1)}), {CycSpan::all()}, {}, s);
  Obstruction jb = parabolic_obstruction(junk);
  CHECK(jb.sup > 1e-4);
}
