#include "mtrans/special.hpp"

#include <cmath>

namespace mtrans {

namespace {

// B_{2k}/(2k)! for the Euler-Maclaurin correction, k = 1..20.
constexpr double kBernFact[] = {
    8.3333333333333333e-02,  -1.3888888888888889e-03, 3.3068783068783069e-05,
    -8.2671957671957672e-07, 2.0876756987868099e-08,  -5.2841901386874932e-10,
    1.3382536530684679e-11,  -3.3896802963225829e-13, 8.5860620562778446e-15,
    -2.1748686985580619e-16, 5.5090028283602295e-18,  -1.3954464685812523e-19,
    3.5347070396294675e-21,  -8.9535174270375469e-23, 2.2679524523376831e-24,
    -5.7447906688722024e-26, 1.4551724756148649e-27,  -3.6859949406653102e-29,
    9.3367342570950447e-31,  -2.3650224157006299e-32};

}  // namespace

cplx hurwitz_zeta(cplx s, cplx a) {
  if (a.real() <= 0.0) throw std::domain_error("hurwitz_zeta: Re a must be positive");
  if (s == cplx(1.0, 0.0)) throw PoleError("hurwitz_zeta: pole at s = 1");

  // Shift a upward until Euler-Maclaurin converges fast enough.
  double target = 15.0 + 0.5 * std::abs(s.imag());
  int shift = std::max(0, int(std::ceil(target - a.real())));

  cplx sum = 0.0;
  for (int n = 0; n < shift; ++n) sum += std::exp(-s * std::log(a + double(n)));

  cplx w = a + double(shift);
  cplx winv_s = std::exp(-s * std::log(w));  // w^{-s}

  sum += winv_s * w / (s - 1.0);  // w^{1-s}/(s-1)
  sum += 0.5 * winv_s;

  // sum over k of B_{2k}/(2k)! * s(s+1)...(s+2k-2) * w^{-s-2k+1}
  cplx rising = s;         // (s)_{2k-1} accumulated
  cplx wpow = winv_s / w;  // w^{-s-1}
  cplx w2 = 1.0 / (w * w);
  for (int k = 1; k <= 20; ++k) {
    cplx term = kBernFact[k - 1] * rising * wpow;
    sum += term;
    if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum))) break;
    rising *= (s + double(2 * k - 1)) * (s + double(2 * k));
    wpow *= w2;
  }
  return sum;
}

cplx hurwitz_zeta(cplx s, double a) { return hurwitz_zeta(s, cplx(a, 0.0)); }

cplx principal_power(cplx z, cplx w) {
  if (z == cplx(0.0, 0.0)) {
    if (w.real() > 0.0) return 0.0;
    throw std::domain_error("principal_power: 0 base with Re w <= 0");
  }
  return std::exp(w * std::log(z));
}

cplx pow_sq(cplx u, cplx s) {
  if (u.imag() == 0.0) {
    double x = u.real();
    if (x == 0.0) throw std::domain_error("pow_sq: zero base");
    return std::exp(-2.0 * s * std::log(std::abs(x)));
  }
  if (u.real() > 0.0) return std::exp(-2.0 * s * std::log(u));
  return std::exp(-s * std::log(u * u));
}

double pow_sq_abs(double u, double neg2s) {
  return std::pow(std::abs(u), neg2s);
}

}  // namespace mtrans
