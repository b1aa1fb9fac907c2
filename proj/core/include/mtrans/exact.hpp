#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mtrans {

using i128 = __int128;

inline i128 abs128(i128 x) { return x < 0 ? -x : x; }

inline i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::string to_string(i128 x) {
  if (x == 0) return "0";
  bool neg = x < 0;
  i128 v = neg ? -x : x;
  std::string s;
  while (v > 0) {
    s.push_back(char('0' + int(v % 10)));
    v /= 10;
  }
  if (neg) s.push_back('-');
  return {s.rbegin(), s.rend()};
}

// Exact rational with 128-bit components, denominator > 0.
class Rational {
 public:
  Rational() = default;
  Rational(i128 n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(i128 n, i128 d) : num_(n), den_(d) { normalize(); }

  i128 num() const { return num_; }
  i128 den() const { return den_; }

  double to_double() const { return double(num_) / double(den_); }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }

  Rational operator-() const { return raw(-num_, den_); }
  friend Rational operator+(const Rational& x, const Rational& y) {
    return {x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_};
  }
  friend Rational operator-(const Rational& x, const Rational& y) {
    return {x.num_ * y.den_ - y.num_ * x.den_, x.den_ * y.den_};
  }
  friend Rational operator*(const Rational& x, const Rational& y) {
    return {x.num_ * y.num_, x.den_ * y.den_};
  }
  friend Rational operator/(const Rational& x, const Rational& y) {
    if (y.num_ == 0) throw std::domain_error("Rational: division by zero");
    return {x.num_ * y.den_, x.den_ * y.num_};
  }
  friend bool operator==(const Rational& x, const Rational& y) {
    return x.num_ == y.num_ && x.den_ == y.den_;
  }
  friend bool operator!=(const Rational& x, const Rational& y) { return !(x == y); }
  friend bool operator<(const Rational& x, const Rational& y) {
    return x.num_ * y.den_ < y.num_ * x.den_;
  }

 private:
  static Rational raw(i128 n, i128 d) {
    Rational r;
    r.num_ = n;
    r.den_ = d;
    return r;
  }
  void normalize() {
    if (den_ == 0) throw std::domain_error("Rational: zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    i128 g = gcd128(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }
  i128 num_ = 0;
  i128 den_ = 1;
};

// Element of Q(sqrt 5): r + q*sqrt(5).  Keeps golden-ratio identities exact.
class Quad {
 public:
  Quad() = default;
  Quad(Rational r) : r_(r) {}  // NOLINT(google-explicit-constructor)
  Quad(Rational r, Rational q) : r_(r), q_(q) {}
  Quad(i128 n) : r_(Rational(n)) {}  // NOLINT(google-explicit-constructor)

  const Rational& rat() const { return r_; }
  const Rational& surd() const { return q_; }
  bool is_rational() const { return q_.is_zero(); }
  bool is_zero() const { return r_.is_zero() && q_.is_zero(); }

  double to_double() const { return r_.to_double() + q_.to_double() * std::sqrt(5.0); }

  Quad operator-() const { return {-r_, -q_}; }
  friend Quad operator+(const Quad& x, const Quad& y) { return {x.r_ + y.r_, x.q_ + y.q_}; }
  friend Quad operator-(const Quad& x, const Quad& y) { return {x.r_ - y.r_, x.q_ - y.q_}; }
  friend Quad operator*(const Quad& x, const Quad& y) {
    return {x.r_ * y.r_ + Rational(5) * x.q_ * y.q_, x.r_ * y.q_ + x.q_ * y.r_};
  }
  friend Quad operator/(const Quad& x, const Quad& y) {
    Rational n = y.r_ * y.r_ - Rational(5) * y.q_ * y.q_;
    if (n.is_zero()) {
      if (y.is_zero()) throw std::domain_error("Quad: division by zero");
      n = Rational(0);  // unreachable: r^2 = 5 q^2 has no nonzero rational solution
    }
    Quad conj{y.r_, -y.q_};
    Quad p = x * conj;
    return {p.r_ / n, p.q_ / n};
  }
  friend bool operator==(const Quad& x, const Quad& y) { return x.r_ == y.r_ && x.q_ == y.q_; }
  friend bool operator!=(const Quad& x, const Quad& y) { return !(x == y); }

  // golden ratio (1+sqrt5)/2 and friends
  static Quad golden() { return {Rational(1, 2), Rational(1, 2)}; }
  static Quad sqrt5() { return {Rational(0), Rational(1)}; }

 private:
  Rational r_{};
  Rational q_{};
};

}  // namespace mtrans
