#include "mtrans/averages.hpp"

#include <algorithm>
#include <cmath>

namespace mtrans {

cplx shift_sum_tail(const std::vector<cplx>& taylor, int sigma, cplx s, double w) {
  if (s == cplx(0.5, 0.0)) throw PoleError("shift_sum_tail: first-order pole at s = 1/2");
  cplx acc = 0.0;
  double sg = 1.0;
  double last = 0.0;
  for (std::size_t k = 0; k < taylor.size(); ++k) {
    cplx term = taylor[k] * sg * hurwitz_zeta(2.0 * s + double(k), w);
    acc += term;
    last = std::abs(term);
    sg *= sigma;
  }
  if (last > 1e-12 * (std::abs(acc) + 1e-300) && last > 1e-250)
    throw ResolutionError("shift_sum_tail: Taylor tail not converged");
  return acc;
}

cplx regularized_shift_sum(const std::function<cplx(double)>& h_eval,
                           const std::vector<cplx>& h_taylor, int sigma, SpectralParam s,
                           double x, int n0, int n_direct, int k_tail) {
  cplx acc = 0.0;
  for (int n = n0; n < n0 + n_direct; ++n) {
    double base = x + n;
    acc += pow_sq(cplx(base, 0.0), s.s) * h_eval(sigma / base);
  }
  std::vector<cplx> tay(h_taylor.begin(),
                        h_taylor.begin() + std::min<std::size_t>(h_taylor.size(), k_tail + 1));
  return acc + shift_sum_tail(tay, sigma, s.s, x + n0 + n_direct);
}

std::vector<cplx> taylor_at_inf(const PiecewiseFn& f, int count) {
  // radius limited by certified complex evaluation of the u=0 pieces
  double r = 0.0;
  for (const AnalyticFn& p : f.pieces)
    if (p.chart == Chart::Inverted && p.lo < 0.0 && p.hi > 0.0)
      r = std::max(r, 0.35 * std::min(-p.lo, p.hi));
  if (r == 0.0)
    throw ExtrapolationError("taylor_at_inf: no piece covers a neighborhood of infinity");
  auto stored = [&](cplx u) { return f.slashed(gen::S(), u, 1e-5); };
  return taylor_by_circle(stored, r, count);
}

PiecewiseFn av_parabolic(const PiecewiseFn& f, int sign, const AverageOptions& opt) {
  std::vector<cplx> tay = taylor_at_inf(f, opt.k_tail + 1);
  // extent of the cyclic interval (a,b)_c of analyticity around infinity
  double a = -1e9, b = 1e9;
  {
    // largest covered stretch to the right and to the left
    double best_lo = 0.0, best_hi = 0.0;
    for (const AnalyticFn& p : f.pieces) {
      if (p.chart == Chart::Inverted && p.lo < 0.0 && p.hi > 0.0) {
        best_lo = std::min(best_lo, p.lo);
        best_hi = std::max(best_hi, p.hi);
      }
    }
    a = -1.0 / best_lo;  // smallest x with coverage to +inf from the u-piece
    b = -1.0 / best_hi;
    bool grew = true;
    while (grew) {
      grew = false;
      for (const AnalyticFn& p : f.pieces) {
        if (p.chart != Chart::Identity) continue;
        double tol = 1e-12 * (1.0 + std::abs(a) + std::abs(b));
        if (p.hi >= a - tol && p.lo < a - tol) {
          a = p.lo;
          grew = true;
        }
        if (p.lo <= b + tol && p.hi > b + tol) {
          b = p.hi;
          grew = true;
        }
      }
      if (a < -64.0 && b > 64.0) break;
    }
  }

  // direct terms run until the tail argument clears the Taylor radius
  double r = 0.0;
  for (const AnalyticFn& p : f.pieces)
    if (p.chart == Chart::Inverted && p.lo < 0.0 && p.hi > 0.0)
      r = std::max(r, 0.35 * std::min(-p.lo, p.hi));
  double w_min = std::max(3.0 / r, double(opt.n_direct));

  // pure zeta tails once every term is beyond the Taylor radius
  auto tail_plus = [this_s = f.s.s, tay](double x) {  // sum_{n>=0} f(x+n), x >= w_min
    return shift_sum_tail(tay, -1, this_s, x);
  };
  auto tail_minus = [this_s = f.s.s, tay](double x) {  // -sum_{n<=-1} f(x+n), x <= 1-w_min
    return -shift_sum_tail(tay, +1, this_s, 1.0 - x);
  };
  // periodic two-sided sum, evaluated in one period
  auto full_sum = [&, tay](double x) {
    double y = x - std::floor(x);
    int nl = int(std::ceil(w_min)) + 1;
    cplx acc = 0.0;
    for (int n = -nl; n < nl; ++n) acc += f.value(y + n);
    acc += tail_plus(y + nl);
    acc -= tail_minus(y - nl);  // sum_{n <= -(nl+1)} f(y+n)
    return acc;
  };

  auto plus_value = [&, tay](cplx z) {
    double x = z.real();
    if (x >= w_min) return tail_plus(x);
    if (x <= -w_min) return full_sum(x) + tail_minus(x);
    int nd = int(std::ceil(w_min - x));
    cplx acc = 0.0;
    for (int n = 0; n < nd; ++n) acc += f.value(x + n);
    return acc + tail_plus(x + nd);
  };
  auto minus_value = [&, tay](cplx z) {
    double x = z.real();
    if (x <= 1.0 - w_min) return tail_minus(x);
    if (x >= w_min) return tail_plus(x) - full_sum(x);
    int nd = int(std::ceil(w_min + x));
    cplx acc = 0.0;
    for (int n = 1; n <= nd; ++n) acc += f.value(x - n);
    return -acc + tail_minus(x - nd);
  };

  // inputs covering the whole circle are analytic past the handover: the
  // average is then defined on all of R, limited only by the far wall
  double ucov_lo = 0.0, ucov_hi = 0.0;
  for (const AnalyticFn& p : f.pieces)
    if (p.chart == Chart::Inverted && p.lo < 0.0 && p.hi > 0.0) {
      ucov_lo = std::min(ucov_lo, p.lo);
      ucov_hi = std::max(ucov_hi, p.hi);
    }
  if (a <= -1.0 / ucov_hi + 1e-9) a = -1e9;
  if (b >= -1.0 / ucov_lo - 1e-9) b = 1e9;

  // The + average is analytic on (a, +inf) but carries the full periodization
  // toward -inf, so it is only chart-representable on its own side; the far
  // side keeps an identity-chart wall.  Mirror statement for the - average.
  std::vector<Sing> sing{Sing::inf(opt.inf_margin)};
  BuildOptions bopt = opt.build;
  // the periodic part of the far side is only x-chart representable
  bopt.handover = opt.far_wall;
  if (sign > 0) {
    double wall = std::max(a + std::max(1e-6, 1e-9 * (1.0 + std::abs(a))), -opt.far_wall);
    return build_piecewise(plus_value, {CycSpan::to_inf(wall)}, sing, f.s, bopt);
  }
  double wall = std::min(b + 1.0 - std::max(1e-6, 1e-9 * (1.0 + std::abs(b))), opt.far_wall);
  return build_piecewise(minus_value, {CycSpan::from_inf(wall)}, sing, f.s, bopt);
}

PiecewiseFn merge_averages(const PiecewiseFn& avp, const PiecewiseFn& avm, double lo, double hi,
                           double tol) {
  double worst = 0.0, scale = 1e-30;
  for (int j = 0; j <= 40; ++j) {
    double x = lo + (hi - lo) * j / 40.0;
    cplx a = avp.value(x), b = avm.value(x);
    worst = std::max(worst, std::abs(a - b));
    scale = std::max({scale, std::abs(a), std::abs(b)});
  }
  if (worst > tol * scale)
    throw ResolutionError("merge_averages: one-sided averages disagree (not parabolic)");
  std::vector<AnalyticFn> pieces;
  double seam = 0.5 * (lo + hi);
  for (const AnalyticFn& p : avp.pieces) {
    if (p.chart == Chart::Identity && p.hi > seam)
      pieces.push_back(p);
    else if (p.chart == Chart::Inverted && p.hi <= 1e-300)
      pieces.push_back(p);  // the +inf side, u < 0
  }
  for (const AnalyticFn& p : avm.pieces) {
    if (p.chart == Chart::Identity && p.lo < seam)
      pieces.push_back(p);
    else if (p.chart == Chart::Inverted && p.lo >= -1e-300)
      pieces.push_back(p);  // the -inf side, u > 0
  }
  double margin = 1e-3;
  for (const Sing& sg : avp.sing)
    if (sg.at_inf) margin = sg.margin;
  PiecewiseFn out;
  out.pieces = std::move(pieces);
  out.sing = {Sing::inf(margin)};
  out.s = avp.s;
  return out;
}

SlashedAverage::SlashedAverage(const PiecewiseFn& f, const GroupElem& gamma, int sign,
                               int n_direct, int k_tail)
    : f_(&f), gamma_(gamma), sign_(sign), n_direct_(n_direct) {
  // Taylor of the stored side of (f|gamma)|S at u=0, radius probed downward
  GroupElem gs = compose(gamma, gen::S());
  double r = 0.35;
  for (;;) {
    try {
      taylor_ = taylor_by_circle([&](cplx u) { return f.slashed(gs, u, 1e-5); }, r, k_tail + 1);
      break;
    } catch (const ExtrapolationError&) {
      r *= 0.6;
      if (r < 1e-3) throw;
    }
  }
  w_min_ = std::max(3.0 / r, double(n_direct));
}

cplx SlashedAverage::value(double x) const {
  cplx acc = 0.0;
  if (sign_ > 0) {
    int nd = std::max(n_direct_, int(std::ceil(w_min_ - x)));
    GroupElem g = gamma_;
    for (int n = 0; n < nd; ++n) {
      acc += f_->slashed(g, cplx(x, 0.0));
      g = compose(g, gen::T());
    }
    return acc + shift_sum_tail(taylor_, -1, f_->s.s, x + nd);
  }
  int nd = std::max(n_direct_, int(std::ceil(w_min_ + x)));
  GroupElem g = compose(gamma_, gen::Tinv());
  for (int n = 1; n <= nd; ++n) {
    acc += f_->slashed(g, cplx(x, 0.0));
    g = compose(g, gen::Tinv());
  }
  return -acc - shift_sum_tail(taylor_, +1, f_->s.s, nd + 1.0 - x);
}

PiecewiseFn av_hyperbolic(const PiecewiseFn& f, const GroupElem& eta, int sign,
                          const HyperbolicOptions& opt) {
  FixedPoints fp = classify_and_fixed_points(eta);
  if (fp.cls != MapClass::Hyperbolic)
    throw std::invalid_argument("av_hyperbolic: element is not hyperbolic");
  GroupElem step = sign > 0 ? eta : eta.inverse();

  auto value = [&](cplx z) {
    cplx acc = 0.0;
    GroupElem pw = gen::identity();
    for (int n = 0; n < opt.max_terms; ++n) {
      if (n > 0) {
        pw = compose(pw, step);
        if (abs128(pw.a) > i128(1) << 100 || abs128(pw.d) > i128(1) << 100)
          throw ResolutionError("av_hyperbolic: word growth before convergence");
      }
      GroupElem g = sign > 0 ? pw : compose(pw, step);  // n>=0 vs n<=-1
      cplx term = f.slashed(g, z);
      acc += term;
      if (n >= 3 && std::abs(term) < opt.term_tol * (1.0 + std::abs(acc))) {
        return sign > 0 ? acc : -acc;
      }
    }
    throw ResolutionError("av_hyperbolic: series not converged within max_terms");
  };

  // uncertified zone near the repelling (for +) / attracting (for -) point
  const ProjPoint& bad = sign > 0 ? *fp.repelling : *fp.attracting;
  std::vector<Sing> sing;
  if (bad.is_infinity())
    sing.push_back(Sing::inf(opt.fixed_margin));
  else
    sing.push_back(Sing::at(bad.value(), opt.fixed_margin));
  // singularities of the summands eta^{-n}(sing f) up to the truncation scale
  GroupElem pw = gen::identity();
  for (int n = 0; n <= 6 && !f.sing.empty(); ++n) {
    GroupElem g = sign > 0 ? pw : compose(pw, step);
    for (const Sing& sg : f.sing) sing.push_back(transform_sing(sg, g.inverse()));
    pw = compose(pw, step);
  }

  return build_piecewise(value, {CycSpan::all()}, sing, f.s, opt.build);
}

}  // namespace mtrans
