#pragma once

#include <complex>
#include <stdexcept>

namespace mtrans {

using cplx = std::complex<double>;

// Spectral parameter s of the weight-2s action, usually in the strip
// 0 < Re s < 1 with s != 1/2.
struct SpectralParam {
  cplx s{0.5, 0.0};
  bool strip_checked = false;

  SpectralParam() = default;
  explicit SpectralParam(cplx v) : s(v) {}

  static SpectralParam strip(cplx v) {
    if (!(v.real() > 0.0 && v.real() < 1.0) || v == cplx(0.5, 0.0))
      throw std::domain_error("SpectralParam: s outside the strip or equal to 1/2");
    SpectralParam p(v);
    p.strip_checked = true;
    return p;
  }
  static SpectralParam any(cplx v) { return SpectralParam(v); }
};

struct PoleError : std::domain_error {
  using std::domain_error::domain_error;
};

// Hurwitz zeta sum_{n>=0} (n+a)^{-s}, continued by Euler-Maclaurin.
// Absolute accuracy ~1e-12 for |Im s| <= 60, a in (0,100].
cplx hurwitz_zeta(cplx s, double a);
// same continuation for complex shift, Re a > 0
cplx hurwitz_zeta(cplx s, cplx a);

// exp(w Log z), principal branch arg in (-pi,pi].
cplx principal_power(cplx z, cplx w);

// ((u)^2)^{-s}; positive for positive real u, principal branch off axis.
cplx pow_sq(cplx u, cplx s);
double pow_sq_abs(double u, double neg2s);  // |u|^{neg2s}, real helper

}  // namespace mtrans
