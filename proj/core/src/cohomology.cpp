#include "mtrans/cohomology.hpp"

#include <cmath>

namespace mtrans {

namespace {
constexpr double kPhi = 1.6180339887498948482;
constexpr double kPhiInv = 1.0 / kPhi;
}  // namespace

std::vector<Cocycle::Term> Cocycle::terms(const Word& w) const {
  // psi_w = sum_i psi_{l_i} | (l_{i+1} ... l_end)
  std::vector<Term> out;
  GroupElem st = apply_word({Gen::S, Gen::T});
  for (std::size_t i = 0; i < w.size(); ++i) {
    GroupElem suffix = gen::identity();
    for (std::size_t j = i + 1; j < w.size(); ++j) suffix = compose(suffix, gen_matrix(w[j]));
    auto add_T_letter = [&](cplx sign, const GroupElem& m) {
      // psi_T through the stored generators
      if (psi_T) {
        out.push_back({sign, &*psi_T, m});
      } else if (flavor == CocycleFlavor::Fib && psi_TinvS) {
        // psi_T = (psi_S - psi_{T^-1S}) | ST
        out.push_back({sign, &psi_S, compose(st, m)});
        out.push_back({-sign, &*psi_TinvS, compose(st, m)});
      }  // parabolic: psi_T = 0
    };
    switch (w[i]) {
      case Gen::S:
        out.push_back({1.0, &psi_S, suffix});
        break;
      case Gen::T:
        add_T_letter(1.0, suffix);
        break;
      case Gen::Tinv:
        // psi_{T^-1} = -psi_T | T^-1
        add_T_letter(-1.0, compose(gen::Tinv(), suffix));
        break;
    }
  }
  return out;
}

cplx Cocycle::value_at(const Word& w, double x) const {
  cplx acc = 0.0;
  for (const Term& t : terms(w)) acc += t.coeff * t.fn->slashed(t.g, cplx(x, 0.0));
  return acc;
}

PiecewiseFn Cocycle::value(const Word& w, const BuildOptions& opt) const {
  std::vector<Term> ts = terms(w);
  if (ts.empty()) {
    // the zero cocycle value
    return build_piecewise([](cplx) { return cplx(0.0); }, {CycSpan::all()}, {}, s, opt);
  }
  std::vector<SlashTerm> sts;
  for (const Term& t : ts) sts.push_back({t.coeff, t.fn, t.g});
  return combine_slashed(sts, s, opt);
}

RelationReport verify_generator_relations(const Cocycle& c, int samples) {
  RelationReport rep;
  GroupElem sM = gen::S();
  GroupElem tinv_s = apply_word({Gen::Tinv, Gen::S});
  GroupElem st = apply_word({Gen::S, Gen::T});
  GroupElem t = gen::T();
  GroupElem tp = gen::Tprime();
  Word wTinvS{Gen::Tinv, Gen::S};
  int used = 0;
  for (int j = 0; j < samples; ++j) {
    double x = -6.0 + 12.0 * (j + 0.5) / samples;
    try {
      cplx vs = c.psi_S.value(x) + c.psi_S.slashed(sM, x);
      cplx rel2 = 0.0;
      for (const auto& tm : c.terms(wTinvS)) {
        rel2 += tm.coeff * (tm.fn->slashed(tm.g, cplx(x, 0.0)) +
                            tm.fn->slashed(compose(tm.g, tinv_s), cplx(x, 0.0)) +
                            tm.fn->slashed(compose(tm.g, st), cplx(x, 0.0)));
      }
      rep.rel_S = std::max(rep.rel_S, std::abs(vs));
      rep.rel_TinvS = std::max(rep.rel_TinvS, std::abs(rel2));
      rep.scale = std::max({rep.scale, std::abs(c.psi_S.value(x)), std::abs(c.value_at(wTinvS, x))});
      if (c.flavor == CocycleFlavor::Parabolic) {
        cplx vp = c.psi_S.value(x) - c.psi_S.slashed(t, x) - c.psi_S.slashed(tp, x);
        rep.rel_par = std::max(rep.rel_par, std::abs(vp));
      }
      ++used;
    } catch (const ExtrapolationError&) {
    }
  }
  if (used < samples / 3) throw ResolutionError("verify_generator_relations: too few usable points");
  return rep;
}

ThetaResult theta(const PiecewiseFn& g, double tol, const BuildOptions& opt) {
  SpectralParam s = g.s;
  ThetaResult out;
  GroupElem st2 = apply_word({Gen::S, Gen::T, Gen::T});
  GroupElem sts = apply_word({Gen::S, Gen::T, Gen::S});
  GroupElem tinv = gen::Tinv();
  GroupElem sM = gen::S();
  GroupElem tinv_s = apply_word({Gen::Tinv, Gen::S});
  GroupElem st = apply_word({Gen::S, Gen::T});
  GroupElem t = gen::T();

  // h = g|(1+ST^2) on (-phi, phi); k = g|T^-1 + h|STS on (-phi, 1/phi)
  out.h = combine_slashed({{1.0, &g, gen::identity()}, {1.0, &g, st2}}, s, opt);
  out.k = combine_slashed({{1.0, &g, tinv}, {1.0, &out.h, sts}}, s, opt);

  // margins at the golden endpoints inherited from the computed pieces
  auto margin_at = [](const PiecewiseFn& f, double x0) {
    double m = 2e-3;
    for (const Sing& sg : f.sing)
      if (!sg.at_inf && std::abs(sg.x - x0) < 0.05) m = std::max(m, sg.margin);
    return m;
  };
  double m_phi_k = margin_at(out.k, -kPhi), m_phiinv = margin_at(out.k, kPhiInv);
  double m_phi_h = margin_at(out.h, -kPhi), m_phi_hr = margin_at(out.h, kPhi);

  const PiecewiseFn& kf = out.k;
  out.c_phi_inv = build_piecewise(
      [&](cplx z) {
        double x = z.real();
        if (x > -kPhi && x < kPhiInv) return kf.value(x);
        return -kf.slashed(sM, x);
      },
      {CycSpan::all()},
      {Sing::at(-kPhi, std::max(m_phi_k, 1.1 * m_phiinv)),
       Sing::at(kPhiInv, std::max(m_phiinv, 0.5 * m_phi_k))},
      s, opt);

  const PiecewiseFn& hf = out.h;
  out.c_phi = build_piecewise(
      [&](cplx z) {
        double x = z.real();
        if (x > -kPhi && x < kPhi) return hf.value(x);
        return -(hf.slashed(tinv_s, x) + hf.slashed(st, x));
      },
      {CycSpan::all()},
      {Sing::at(-kPhi, std::max({m_phi_h, m_phi_k, 1e-3})), Sing::at(kPhi, std::max(m_phi_hr, 1e-3))},
      s, opt);

  auto negate = [](PiecewiseFn f) {
    for (AnalyticFn& p : f.pieces)
      for (cplx& c : p.coeffs) c = -c;
    return f;
  };
  out.cocycle.flavor = CocycleFlavor::Fib;
  out.cocycle.s = s;
  out.cocycle.psi_S = negate(out.c_phi_inv);
  out.cocycle.psi_TinvS = negate(out.c_phi);

  // reassembly c_{-phi^2,phi} = c_{-phi,1/phi}|T + c_{-phi,phi}(1 + |ST);
  // must reproduce g on (-phi^2, phi) and be analytic across -phi, -1/phi^2
  auto reassembled = [&](double x) {
    return out.c_phi_inv.slashed(t, x) + out.c_phi.value(x) + out.c_phi.slashed(st, x);
  };
  double phi2 = kPhi * kPhi, phim2 = 1.0 / phi2;
  double worst = 0.0, scale = 1e-30;
  auto probe = [&](double lo, double hi) {
    for (int j = 1; j < 14; ++j) {
      double x = lo + (hi - lo) * j / 14.0;
      try {
        cplx a = reassembled(x), b = g.value(x);
        worst = std::max(worst, std::abs(a - b));
        scale = std::max(scale, std::abs(b));
      } catch (const ExtrapolationError&) {
      }
    }
  };
  probe(-phi2 + 0.03, -kPhi - 0.03);
  probe(-kPhi + 0.03, -phim2 - 0.03);
  probe(-phim2 + 0.03, kPhi - 0.03);
  out.reassembly_residual = worst / scale;
  if (out.reassembly_residual > tol)
    throw ResolutionError("theta: reassembly does not reproduce g (input not in FE4)");

  // piecewise object for downstream use, straddling the interior points
  double mr = std::max({m_phi_h, m_phi_k, 2e-3});
  PiecewiseFn re = build_piecewise([&](cplx z) { return reassembled(z.real()); },
                                   {CycSpan::interval(-phi2 + 1e-3, kPhi - 1e-3)},
                                   {Sing::at(-phi2, 1e-3), Sing::at(-kPhi, 1.05 * mr),
                                    Sing::at(-phim2, 1.05 * mr), Sing::at(kPhi, 1e-3)},
                                   s, opt);
  // analyticity certificates across the two interior points
  AnalyticFn patch1 = refit_straddling([&](double x) { return re.value(x); }, -kPhi - 0.12,
                                       -kPhi + 0.12, {{-kPhi - 1.1 * mr, -kPhi + 1.1 * mr}}, s,
                                       opt.n - 8, tol);
  AnalyticFn patch2 = refit_straddling([&](double x) { return re.value(x); }, -phim2 - 0.12,
                                       -phim2 + 0.12, {{-phim2 - 1.1 * mr, -phim2 + 1.1 * mr}}, s,
                                       opt.n - 8, tol);
  re.pieces.push_back(patch1);
  re.pieces.push_back(patch2);
  re.sing = {Sing::at(-phi2, 1e-3), Sing::at(kPhi, 1e-3)};
  out.reassembled = std::move(re);
  return out;
}

Cocycle parabolic_normalize(const Cocycle& tpsi, double certificate_tol, const BuildOptions& opt) {
  if (!tpsi.psi_T) {
    Cocycle out = tpsi;
    out.flavor = CocycleFlavor::Parabolic;
    return out;
  }
  SpectralParam s = tpsi.s;
  PiecewiseFn vp = av_parabolic(*tpsi.psi_T, +1);
  PiecewiseFn vm = av_parabolic(*tpsi.psi_T, -1);
  PiecewiseFn v = merge_averages(vp, vm, -18.0, 18.0, certificate_tol);

  GroupElem sM = gen::S();
  Cocycle out;
  out.flavor = CocycleFlavor::Parabolic;
  out.s = s;
  // psi_S = tpsi_S - v|(1-S); sing {0, inf}
  double m_inf = 1e-3;
  for (const Sing& sg : v.sing)
    if (sg.at_inf) m_inf = sg.margin;
  out.psi_S = build_piecewise(
      [&](cplx z) {
        double x = z.real();
        return tpsi.psi_S.value(x) - v.value(x) + v.slashed(sM, x);
      },
      {CycSpan::all()}, {Sing::at(0.0, m_inf), Sing::inf(m_inf)}, s, opt);
  return out;
}

Obstruction parabolic_obstruction(const Cocycle& tpsi) {
  SpectralParam s = tpsi.s;
  Word wTST{Gen::T, Gen::S, Gen::T};
  PiecewiseFn tst = tpsi.value(wTST);
  GroupElem sM = gen::S();
  GroupElem tinv_s = apply_word({Gen::Tinv, Gen::S});

  std::optional<SlashedAverage> avT;
  if (tpsi.psi_T) avT.emplace(*tpsi.psi_T, gen::identity(), +1);
  SlashedAverage avTSTm(tst, sM, -1);

  auto pval = [&](double x) {
    cplx acc = tst.slashed(sM, x) - tst.slashed(tinv_s, x);
    if (tpsi.psi_T) {
      acc += tpsi.psi_T->slashed(tinv_s, x) + tpsi.psi_T->value(x);
      acc -= avT->value(x);
    }
    acc -= avTSTm.value(x);
    return acc;
  };
  Obstruction out;
  out.p = AnalyticFn::fit([&](cplx z) { return pval(z.real()); }, -0.6, 1.6, Chart::Identity, s,
                          48);
  for (int j = 0; j <= 30; ++j) {
    double x = -0.55 + 1.1 * j / 30.0;
    out.periodicity = std::max(out.periodicity, std::abs(out.p.eval(x) - out.p.eval(x + 1.0)));
    out.sup = std::max(out.sup, std::abs(out.p.eval(x)));
  }
  return out;
}

}  // namespace mtrans
