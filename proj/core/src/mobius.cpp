#include "mtrans/mobius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mtrans {

namespace {

// Largest k with k^2 <= n, for canonical surd extraction.
i128 isqrt128(i128 n) {
  if (n < 0) return -1;
  i128 x = i128(std::sqrt(double(n)));
  while (x > 0 && x * x > n) --x;
  while ((x + 1) * (x + 1) <= n) ++x;
  return x;
}

}  // namespace

GroupElem::GroupElem(i128 a_, i128 b_, i128 c_, i128 d_) : a(a_), b(b_), c(c_), d(d_) {
  if (det() == 0) throw std::invalid_argument("GroupElem: singular matrix");
  i128 g = gcd128(gcd128(a, b), gcd128(c, d));
  if (g > 1) {
    a /= g;
    b /= g;
    c /= g;
    d /= g;
  }
  i128 lead = a != 0 ? a : (b != 0 ? b : (c != 0 ? c : d));
  if (lead < 0) {
    a = -a;
    b = -b;
    c = -c;
    d = -d;
  }
}

GroupElem GroupElem::inverse() const { return {d, -b, -c, a}; }

bool operator<(const GroupElem& g, const GroupElem& h) {
  if (g.a != h.a) return g.a < h.a;
  if (g.b != h.b) return g.b < h.b;
  if (g.c != h.c) return g.c < h.c;
  return g.d < h.d;
}

double GroupElem::map(double x) const {
  if (std::isinf(x)) return c == 0 ? std::numeric_limits<double>::infinity() : double(a) / double(c);
  double den = double(c) * x + double(d);
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return (double(a) * x + double(b)) / den;
}

std::complex<double> GroupElem::map(std::complex<double> z) const {
  std::complex<double> den = double(c) * z + double(d);
  return (double(a) * z + double(b)) / den;
}

double GroupElem::deriv(double x) const {
  double den = double(c) * x + double(d);
  return double(det()) / (den * den);
}

std::string GroupElem::str() const {
  return "[[" + to_string(a) + "," + to_string(b) + "],[" + to_string(c) + "," + to_string(d) + "]]";
}

GroupElem compose(const GroupElem& g, const GroupElem& h) {
  return {g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
          g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d};
}

namespace gen {
GroupElem identity() { return {1, 0, 0, 1}; }
GroupElem S() { return {0, -1, 1, 0}; }
GroupElem T() { return {1, 1, 0, 1}; }
GroupElem Tinv() { return {1, -1, 0, 1}; }
GroupElem Tprime() { return {1, 0, 1, 1}; }
GroupElem C() { return {0, 1, 1, 0}; }
GroupElem TST2() { return {1, 1, 1, 2}; }
}  // namespace gen

GroupElem gen_matrix(Gen g) {
  switch (g) {
    case Gen::S:
      return gen::S();
    case Gen::T:
      return gen::T();
    default:
      return gen::Tinv();
  }
}

GroupElem apply_word(const Word& w) {
  GroupElem r = gen::identity();
  for (Gen g : w) r = compose(r, gen_matrix(g));
  return r;
}

bool operator==(const ProjPoint& p, const ProjPoint& q) {
  if (p.kind_ != q.kind_) {
    // Exact vs approx compares numerically.
    if (p.kind_ == ProjPoint::Kind::Inf || q.kind_ == ProjPoint::Kind::Inf) return false;
    return std::abs(p.value() - q.value()) <= 1e-12 * (1.0 + std::abs(p.value()));
  }
  switch (p.kind_) {
    case ProjPoint::Kind::Inf:
      return true;
    case ProjPoint::Kind::Exact:
      return p.exact_ == q.exact_;
    default:
      return p.approx_ == q.approx_;
  }
}

ProjPoint act(const GroupElem& g, const ProjPoint& p) {
  if (p.is_infinity()) {
    if (g.c == 0) return ProjPoint::infinity();
    return ProjPoint::exact(Quad(Rational(g.a, g.c)));
  }
  if (p.is_exact()) {
    const Quad& x = p.exact_value();
    Quad den = Quad(Rational(g.c)) * x + Quad(Rational(g.d));
    if (den.is_zero()) return ProjPoint::infinity();
    Quad num = Quad(Rational(g.a)) * x + Quad(Rational(g.b));
    return ProjPoint::exact(num / den);
  }
  double x = p.value();
  double den = double(g.c) * x + double(g.d);
  if (den == 0.0) return ProjPoint::infinity();
  return ProjPoint::approx((double(g.a) * x + double(g.b)) / den);
}

FixedPoints classify_and_fixed_points(const GroupElem& g) {
  if (g.is_identity()) throw std::invalid_argument("classify: identity has no class");
  i128 tr = g.trace();
  i128 det = g.det();
  i128 adet = abs128(det);
  i128 disc = tr * tr - 4 * det;  // discriminant of c x^2 + (d-a) x - b

  FixedPoints out{MapClass::Hyperbolic, std::nullopt, std::nullopt};
  if (tr * tr < 4 * adet && det > 0) {
    out.cls = MapClass::Elliptic;
    return out;  // no real fixed points
  }
  out.cls = (tr * tr == 4 * adet && det > 0) ? MapClass::Parabolic : MapClass::Hyperbolic;

  auto fixed_at = [&](const ProjPoint& p, double dv) {
    if (out.cls == MapClass::Parabolic) {
      out.repelling = p;
      out.attracting = p;
      return;
    }
    if (std::abs(dv) > 1.0)
      out.repelling = p;
    else
      out.attracting = p;
  };

  if (g.c == 0) {
    // infinity is fixed; chart derivative there is d/a
    fixed_at(ProjPoint::infinity(), double(g.d) / double(g.a));
    if (g.a != g.d) {
      Rational x(g.b, g.d - g.a);
      ProjPoint p = ProjPoint::exact(Quad(x));
      fixed_at(p, g.deriv(x.to_double()));
    }
    return out;
  }

  // roots of c x^2 + (d - a) x - b
  i128 root = isqrt128(disc);
  bool square = root >= 0 && root * root == disc;
  i128 root5 = disc % 5 == 0 ? isqrt128(disc / 5) : -1;
  bool square5 = root5 >= 0 && root5 * root5 * 5 == disc;

  auto emit = [&](int sign) {
    if (square) {
      Rational x(g.a - g.d + sign * root, 2 * g.c);
      fixed_at(ProjPoint::exact(Quad(x)), g.deriv(x.to_double()));
    } else if (square5) {
      Quad x{Rational(g.a - g.d, 2 * g.c), Rational(sign * root5, 2 * g.c)};
      fixed_at(ProjPoint::exact(x), g.deriv(x.to_double()));
    } else {
      double x = (double(g.a - g.d) + sign * std::sqrt(double(disc))) / (2.0 * double(g.c));
      fixed_at(ProjPoint::approx(x), g.deriv(x));
    }
  };
  emit(+1);
  if (out.cls != MapClass::Parabolic) emit(-1);
  return out;
}

void GroupRingElem::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& x, const Term& y) { return x.second < y.second; });
  std::vector<Term> out;
  for (const Term& t : terms_) {
    if (!out.empty() && out.back().second == t.second)
      out.back().first += t.first;
    else
      out.push_back(t);
  }
  std::erase_if(out, [](const Term& t) { return std::abs(t.first) < 1e-14; });
  terms_ = std::move(out);
}

GroupRingElem operator+(const GroupRingElem& x, const GroupRingElem& y) {
  GroupRingElem r;
  r.terms_ = x.terms_;
  r.terms_.insert(r.terms_.end(), y.terms_.begin(), y.terms_.end());
  r.normalize();
  return r;
}

GroupRingElem operator-(const GroupRingElem& x, const GroupRingElem& y) {
  return x + std::complex<double>(-1.0) * y;
}

GroupRingElem operator*(const GroupRingElem& x, const GroupRingElem& y) {
  GroupRingElem r;
  for (const auto& [cx, gx] : x.terms_)
    for (const auto& [cy, gy] : y.terms_) r.terms_.emplace_back(cx * cy, compose(gx, gy));
  r.normalize();
  return r;
}

GroupRingElem operator*(std::complex<double> s, const GroupRingElem& x) {
  GroupRingElem r;
  for (const auto& [c, g] : x.terms_) r.terms_.emplace_back(s * c, g);
  r.normalize();
  return r;
}

GroupRingElem ring_combine(const GroupRingElem& a, const GroupRingElem& b,
                           std::complex<double> scalar, RingOp op) {
  if (op == RingOp::Add) return a + scalar * b;
  return scalar * (a * b);
}

}  // namespace mtrans
