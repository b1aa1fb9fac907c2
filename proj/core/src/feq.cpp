#include "mtrans/feq.hpp"

#include <cmath>

namespace mtrans {

namespace {
constexpr double kPhi = 1.6180339887498948482;
}

double three_term_residual(const PiecewiseFn& p, const std::vector<double>& points) {
  GroupElem t = gen::T(), tp = gen::Tprime();
  double worst = 0.0;
  for (double x : points) {
    cplx r = p.value(x) - p.slashed(t, x) - p.slashed(tp, x);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

double four_term_residual(const PiecewiseFn& g, const std::vector<double>& points) {
  GroupElem st2 = apply_word({Gen::S, Gen::T, Gen::T});
  GroupElem tinv = gen::Tinv();
  GroupElem tinv_s_tinv2 = apply_word({Gen::Tinv, Gen::S, Gen::Tinv, Gen::Tinv});
  double worst = 0.0;
  for (double x : points) {
    cplx r = g.value(x) + g.slashed(st2, x) - g.slashed(tinv, x) - g.slashed(tinv_s_tinv2, x);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

ParityParts parity_decompose(const PiecewiseFn& p, double window, int n) {
  if (window <= 1.0) throw std::invalid_argument("parity_decompose: window must exceed 1");
  double lo = 1.0 / window, hi = window;
  GroupElem c = gen::C();
  auto part = [&](double sign) {
    return AnalyticFn::fit(
        [&](cplx z) { return 0.5 * (p.value(z.real()) + sign * p.slashed(c, z.real())); }, lo, hi,
        Chart::Identity, p.s, n);
  };
  return {part(+1.0), part(-1.0)};
}

SimpleAsymptotics check_simple_asymptotics(const std::function<cplx(double)>& p, SpectralParam s,
                                           int m_count, double near, double far) {
  SimpleAsymptotics out;
  out.at_inf = fit_asymptotic(p, AsymExpansion::Loc::Inf, +1, s, m_count, near, far);
  out.at_zero = fit_asymptotic(p, AsymExpansion::Loc::Zero, +1, s, m_count, near, far);
  out.ok = out.at_inf.converged && out.at_zero.converged;
  return out;
}

double endpoint_step(double a) { return 3.0 - 1.0 / a; }

ExtendedPair extend_to_max_interval(const PiecewiseFn& f1, const PiecewiseFn& f2, SpectralParam s,
                                    const ExtendOptions& opt) {
  auto span_of = [](const PiecewiseFn& f) {
    double lo = 1e9, hi = -1e9;
    for (const AnalyticFn& p : f.pieces)
      if (p.chart == Chart::Identity) {
        lo = std::min(lo, p.lo);
        hi = std::max(hi, p.hi);
      }
    return std::pair{lo, hi};
  };
  auto [l1, r1] = span_of(f1);
  auto [l2, r2] = span_of(f2);
  double a1 = -l1, b1 = r1, a2 = -l2, b2 = r2;
  const double phi2 = kPhi * kPhi;
  GroupElem st3 = apply_word({Gen::S, Gen::T, Gen::T, Gen::T});
  GroupElem st2 = apply_word({Gen::S, Gen::T, Gen::T});
  GroupElem stm1 = apply_word({Gen::S, Gen::Tinv});
  GroupElem stm2 = apply_word({Gen::S, Gen::Tinv, Gen::Tinv});

  ExtendedPair out;
  PiecewiseFn h1 = f1, h2 = f2;
  double resid = 0.0;
  int iter = 0;
  for (; iter < opt.max_iter; ++iter) {
    if ((-a1 <= -phi2 + opt.eps) && (b2 >= phi2 - opt.eps) && iter > 0) break;
    double na1 = std::min(3.0 - 1.0 / a1, phi2 - opt.eps);
    double nb2 = std::min(3.0 - 1.0 / b2, phi2 - opt.eps);
    double nb1 = nb2 - 1.0;
    double na2 = na1 - 1.0;
    SlashedAverage m11(h1, st3, +1, opt.n_direct, opt.k_tail);
    SlashedAverage m12(h2, stm1, -1, opt.n_direct, opt.k_tail);
    SlashedAverage m21(h1, st2, +1, opt.n_direct, opt.k_tail);
    SlashedAverage m22(h2, stm2, -1, opt.n_direct, opt.k_tail);
    // the maximal interval is open: refine geometrically into its endpoints
    double wall = std::max(1e-5, 0.05 * opt.eps);
    PiecewiseFn nh1 = build_piecewise(
        [&](cplx z) { return (m11.value(z.real()) - m12.value(z.real())) / opt.lambda_; },
        {CycSpan::interval(-na1, nb1)},
        {Sing::at(-na1, wall), Sing::at(nb1, wall)}, s, opt.build);
    PiecewiseFn nh2 = build_piecewise(
        [&](cplx z) { return (m21.value(z.real()) - m22.value(z.real())) / opt.lambda_; },
        {CycSpan::interval(-na2, nb2)},
        {Sing::at(-na2, wall), Sing::at(nb2, wall)}, s, opt.build);
    double worst = 0.0, scale = 1e-30;
    double olo = -std::min(a1, na1) + 0.01, ohi = std::min(b1, nb1) - 0.01;
    for (int j = 0; j <= 20; ++j) {
      double x = olo + (ohi - olo) * j / 20.0;
      cplx vold = h1.value(x), vnew = nh1.value(x);
      worst = std::max(worst, std::abs(vold - vnew));
      scale = std::max({scale, std::abs(vold), 1.0});
    }
    resid = std::max(resid, worst / scale);
    if (resid > opt.resid_tol)
      throw ResolutionError(
          "extend_to_max_interval: eigen-relation residual grew past tolerance "
          "(input is not a 1-eigenpair)");
    h1 = std::move(nh1);
    h2 = std::move(nh2);
    a1 = na1;
    b1 = nb1;
    a2 = na2;
    b2 = nb2;
  }
  if (!((-a1 <= -phi2 + opt.eps) && (b2 >= phi2 - opt.eps)))
    throw ResolutionError("extend_to_max_interval: endpoint recursion did not reach the target");
  out.h1 = std::move(h1);
  out.h2 = std::move(h2);
  out.residual = resid;
  out.iterations = iter;
  return out;
}

}  // namespace mtrans
