#pragma once

#include "mtrans/funcrep.hpp"

namespace mtrans {

// Tail sum_k h_k sigma^k zeta(2s+k, w) of a shifted power sum, h given by
// Taylor coefficients at 0.  Throws PoleError at s = 1/2, ResolutionError
// when the Taylor tail has not converged.
cplx shift_sum_tail(const std::vector<cplx>& taylor, int sigma, cplx s, double w);

// sum_{n>=n0} ((x+n)^2)^{-s} h(sigma/(x+n)), n_direct explicit terms plus the
// regularized Hurwitz tail.  Defined on Re s > 0 except the s=1/2 pole.
cplx regularized_shift_sum(const std::function<cplx(double)>& h_eval,
                           const std::vector<cplx>& h_taylor, int sigma, SpectralParam s,
                           double x, int n0, int n_direct, int k_tail);

struct AverageOptions {
  int n_direct = 24;
  int k_tail = 28;
  double inf_margin = 1e-3;   // u-chart margin at infinity for the output
  double far_wall = 32.0;     // identity-chart reach on the average's far side
  BuildOptions build{};
};

// Taylor data of f at infinity: coefficients of the stored side of f|S at 0.
std::vector<cplx> taylor_at_inf(const PiecewiseFn& f, int count);

// One-sided parabolic averages f|Av_T^+ (sign>0) and f|Av_T^- (sign<0) for f
// analytic on a cyclic neighborhood (a,b)_c of infinity.  The + average lives
// on (a, inf), the - average on (-inf, b+1).
PiecewiseFn av_parabolic(const PiecewiseFn& f, int sign, const AverageOptions& opt = {});

struct HyperbolicOptions {
  double term_tol = 1e-14;
  int max_terms = 80;
  double fixed_margin = 1e-3;  // margin at the uncertified fixed point
  BuildOptions build{};
};

// Hyperbolic one-sided averages f|Av_eta^+ = sum_{n>=0} f|eta^n (sign>0) and
// f|Av_eta^- = -sum_{n<=-1} f|eta^n.  Truncated when the multiplier-contracted
// terms fall below term_tol.
PiecewiseFn av_hyperbolic(const PiecewiseFn& f, const GroupElem& eta, int sign,
                          const HyperbolicOptions& opt = {});

// When f|Av+ = f|Av- (f in V^smp|(1-T)) the merged average is a single
// element of V^smp with sing at infinity.  Checks agreement on [lo,hi] and
// splices the tame sides of the two representations.
PiecewiseFn merge_averages(const PiecewiseFn& avp, const PiecewiseFn& avm, double lo = -20.0,
                           double hi = 20.0, double tol = 1e-7);

// Pointwise (f|gamma Av_T^sign)(x) without building pieces: direct terms plus
// the Hurwitz tail over the Taylor expansion of (f|gamma S) at 0.
class SlashedAverage {
 public:
  SlashedAverage(const PiecewiseFn& f, const GroupElem& gamma, int sign, int n_direct = 24,
                 int k_tail = 28);
  cplx value(double x) const;

 private:
  const PiecewiseFn* f_;
  GroupElem gamma_;
  int sign_;
  int n_direct_;
  double w_min_;
  std::vector<cplx> taylor_;
};

}  // namespace mtrans
