#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "mtrans/exact.hpp"

namespace mtrans {

// Element of PGL(2,Z): integer matrix [[a,b],[c,d]] modulo scalars.
// Canonical representative: entries divided by their gcd, first nonzero of
// (a,b,c,d) positive.
struct GroupElem {
  i128 a = 1, b = 0, c = 0, d = 1;

  GroupElem() = default;
  GroupElem(i128 a_, i128 b_, i128 c_, i128 d_);

  i128 det() const { return a * d - b * c; }
  i128 trace() const { return a + d; }
  bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }

  GroupElem inverse() const;

  friend bool operator==(const GroupElem& g, const GroupElem& h) {
    return g.a == h.a && g.b == h.b && g.c == h.c && g.d == h.d;
  }
  friend bool operator!=(const GroupElem& g, const GroupElem& h) { return !(g == h); }
  friend bool operator<(const GroupElem& g, const GroupElem& h);

  // Mobius action on doubles, infinity handled projectively.
  double map(double x) const;
  std::complex<double> map(std::complex<double> z) const;
  // Derivative det/(cx+d)^2 of the action.
  double deriv(double x) const;

  std::string str() const;
};

GroupElem compose(const GroupElem& g, const GroupElem& h);

// Named generators of PGL(2,Z).
namespace gen {
GroupElem identity();
GroupElem S();       // [[0,-1],[1,0]]
GroupElem T();       // [[1,1],[0,1]]
GroupElem Tinv();    // [[1,-1],[0,1]]
GroupElem Tprime();  // TST = [[1,0],[1,1]]
GroupElem C();       // [[0,1],[1,0]], orientation reversing
GroupElem TST2();    // [[1,1],[1,2]], generates the stabilizer of -phi
}  // namespace gen

// Words in the generators S, T, T^{-1}.
enum class Gen { S, T, Tinv };
using Word = std::vector<Gen>;

GroupElem apply_word(const Word& w);
GroupElem gen_matrix(Gen g);

// Point of the projective line P^1(R): infinity, an exact Q(sqrt5) value, or
// a floating-point value.
class ProjPoint {
 public:
  static ProjPoint infinity() {
    ProjPoint p;
    p.kind_ = Kind::Inf;
    return p;
  }
  static ProjPoint exact(const Quad& v) {
    ProjPoint p;
    p.kind_ = Kind::Exact;
    p.exact_ = v;
    return p;
  }
  static ProjPoint approx(double v) {
    ProjPoint p;
    p.kind_ = Kind::Approx;
    p.approx_ = v;
    return p;
  }

  bool is_infinity() const { return kind_ == Kind::Inf; }
  bool is_exact() const { return kind_ == Kind::Exact; }
  const Quad& exact_value() const { return exact_; }
  double value() const { return kind_ == Kind::Exact ? exact_.to_double() : approx_; }

  friend bool operator==(const ProjPoint& p, const ProjPoint& q);

 private:
  enum class Kind { Inf, Exact, Approx };
  Kind kind_ = Kind::Approx;
  Quad exact_{};
  double approx_ = 0.0;
};

// Left Mobius action g.p = (a p + b)/(c p + d).
ProjPoint act(const GroupElem& g, const ProjPoint& p);

enum class MapClass { Elliptic, Parabolic, Hyperbolic };

struct FixedPoints {
  MapClass cls;
  std::optional<ProjPoint> repelling;   // alpha
  std::optional<ProjPoint> attracting;  // omega
  // Parabolic: the single fixed point is stored in both slots.
};

// Classify by trace^2 against 4|det| and order real fixed points by the
// magnitude of the derivative (>1 repelling).
FixedPoints classify_and_fixed_points(const GroupElem& g);

// Finite formal complex combination of group elements, like-term collected.
class GroupRingElem {
 public:
  using Term = std::pair<std::complex<double>, GroupElem>;

  GroupRingElem() = default;
  GroupRingElem(const GroupElem& g) { terms_.emplace_back(1.0, g); }  // NOLINT
  GroupRingElem(std::complex<double> coeff, const GroupElem& g) {
    if (std::abs(coeff) != 0.0) terms_.emplace_back(coeff, g);
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  friend GroupRingElem operator+(const GroupRingElem& x, const GroupRingElem& y);
  friend GroupRingElem operator-(const GroupRingElem& x, const GroupRingElem& y);
  friend GroupRingElem operator*(const GroupRingElem& x, const GroupRingElem& y);
  friend GroupRingElem operator*(std::complex<double> s, const GroupRingElem& x);

 private:
  void normalize();
  std::vector<Term> terms_;
};

// a + scalar*b (op = add) or a*b with scalar applied (op = mul).
enum class RingOp { Add, Mul };
GroupRingElem ring_combine(const GroupRingElem& a, const GroupRingElem& b,
                           std::complex<double> scalar, RingOp op);

}  // namespace mtrans
