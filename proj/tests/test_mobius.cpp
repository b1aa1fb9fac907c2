#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mtrans/mobius.hpp"

using namespace mtrans;

namespace {

Word random_word(std::mt19937& rng, int len) {
  std::uniform_int_distribution<int> pick(0, 2);
  Word w;
  for (int i = 0; i < len; ++i) w.push_back(Gen(pick(rng)));
  return w;
}

}  // namespace

TEST_CASE("generator compositions") {
  CHECK(compose(gen::S(), gen::S()).is_identity());
  CHECK(compose(gen::T(), gen::identity()) == gen::T());
  // TST^2 = [[1,1],[1,2]]
  GroupElem tst2 = compose(compose(gen::T(), gen::S()), compose(gen::T(), gen::T()));
  CHECK(tst2 == GroupElem(1, 1, 1, 2));
  CHECK(tst2 == gen::TST2());
}

TEST_CASE("group relations reduce to the identity") {
  CHECK(apply_word({Gen::S, Gen::T, Gen::S, Gen::T, Gen::S, Gen::T}).is_identity());  // (ST)^3
  CHECK(apply_word({Gen::T, Gen::S, Gen::T}) == GroupElem(1, 0, 1, 1));               // T' = TST
  CHECK(apply_word({}).is_identity());
  // TST = ST^{-1}S
  CHECK(apply_word({Gen::T, Gen::S, Gen::T}) == apply_word({Gen::S, Gen::Tinv, Gen::S}));
}

TEST_CASE("T^{-1}ST^{-2}ST = ST^2ST^2 in PGL(2,Z)") {
  GroupElem lhs = apply_word({Gen::Tinv, Gen::S, Gen::Tinv, Gen::Tinv, Gen::S, Gen::T});
  GroupElem rhs = apply_word({Gen::S, Gen::T, Gen::T, Gen::S, Gen::T, Gen::T});
  CHECK(lhs == rhs);
  GroupRingElem diff = GroupRingElem(lhs) - GroupRingElem(rhs);
  CHECK(diff.empty());
}

TEST_CASE("mobius action on projective points") {
  CHECK(act(gen::S(), ProjPoint::exact(Quad(Rational(0)))).is_infinity());
  CHECK(act(gen::T(), ProjPoint::infinity()).is_infinity());

  Quad phi = Quad::golden();
  // TST^2 fixes -phi
  ProjPoint p = act(gen::TST2(), ProjPoint::exact(-phi));
  REQUIRE(p.is_exact());
  CHECK(p.exact_value() == -phi);
  // T(phi) = phi + 1 = phi^2
  ProjPoint q = act(gen::T(), ProjPoint::exact(phi));
  REQUIRE(q.is_exact());
  CHECK(q.exact_value() == phi * phi);
}

TEST_CASE("classification and fixed points") {
  FixedPoints h = classify_and_fixed_points(gen::TST2());
  CHECK(h.cls == MapClass::Hyperbolic);
  REQUIRE(h.repelling.has_value());
  REQUIRE(h.attracting.has_value());
  Quad phi = Quad::golden();
  CHECK(h.repelling->exact_value() == -phi);                        // alpha = -phi
  CHECK(h.attracting->exact_value() == Quad(1) / phi);              // omega = 1/phi

  FixedPoints par = classify_and_fixed_points(gen::T());
  CHECK(par.cls == MapClass::Parabolic);
  CHECK(par.attracting->is_infinity());

  FixedPoints ell = classify_and_fixed_points(gen::S());
  CHECK(ell.cls == MapClass::Elliptic);
  CHECK(!ell.repelling.has_value());

  CHECK_THROWS(classify_and_fixed_points(gen::identity()));
}

TEST_CASE("group ring arithmetic") {
  GroupRingElem one(gen::identity());
  GroupRingElem st2(apply_word({Gen::S, Gen::T, Gen::T}));
  GroupRingElem s(gen::S());
  GroupRingElem prod = (one + st2) * s;
  // (1 + ST^2) S = S + ST^2 S
  CHECK(prod.size() == 2);
  GroupRingElem expect = s + GroupRingElem(compose(apply_word({Gen::S, Gen::T, Gen::T}), gen::S()));
  CHECK((prod - expect).empty());

  GroupRingElem xi = one + std::complex<double>(2.5, -1.0) * st2;
  CHECK(ring_combine(xi, xi, -1.0, RingOp::Add).empty());
}

TEST_CASE("word concatenation is composition") {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> len(0, 12);
  for (int trial = 0; trial < 300; ++trial) {
    Word w1 = random_word(rng, len(rng));
    Word w2 = random_word(rng, len(rng));
    Word cat = w1;
    cat.insert(cat.end(), w2.begin(), w2.end());
    CHECK(apply_word(cat) == compose(apply_word(w1), apply_word(w2)));
  }
}

TEST_CASE("act is a left action") {
  std::mt19937 rng(777);
  std::uniform_int_distribution<int> len(1, 10);
  std::uniform_real_distribution<double> xs(-5.0, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    GroupElem g = apply_word(random_word(rng, len(rng)));
    GroupElem h = apply_word(random_word(rng, len(rng)));
    ProjPoint p = ProjPoint::approx(xs(rng));
    ProjPoint lhs = act(compose(g, h), p);
    ProjPoint rhs = act(g, act(h, p));
    if (lhs.is_infinity() || rhs.is_infinity()) {
      CHECK(lhs.is_infinity() == rhs.is_infinity());
    } else {
      CHECK(std::abs(lhs.value() - rhs.value()) <=
            1e-8 * (1.0 + std::abs(lhs.value())));
    }
  }
}

TEST_CASE("canonical form idempotent, proportional matrices equal") {
  GroupElem g(2, 4, -6, 8);
  CHECK(g == GroupElem(1, 2, -3, 4));
  CHECK(GroupElem(-1, -2, 3, -4) == GroupElem(1, 2, -3, 4));
  GroupElem again(g.a, g.b, g.c, g.d);
  CHECK(again == g);
}

TEST_CASE("exact quadratic arithmetic") {
  Quad phi = Quad::golden();
  CHECK(phi * phi == phi + Quad(1));             // phi^2 = phi + 1
  CHECK(Quad(1) / phi == phi - Quad(1));         // 1/phi = phi - 1
  Quad phi_inv2 = (Quad(1) / phi) * (Quad(1) / phi);
  CHECK(phi_inv2 == Quad(2) - phi);              // phi^{-2} = 2 - phi
}
