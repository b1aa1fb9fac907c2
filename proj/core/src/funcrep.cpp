#include "mtrans/funcrep.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace mtrans {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap2pi(double t) {
  while (t <= 0.0) t += 2.0 * kPi;
  while (t > 2.0 * kPi) t -= 2.0 * kPi;
  return t;
}

double theta_of(double x) { return 2.0 * std::atan(x); }
constexpr double kThetaInf = kPi;

struct ProjVal {
  double v = 0.0;
  bool inf = false;
};

ProjVal mobius_apply(const GroupElem& g, const ProjVal& p) {
  if (p.inf) {
    if (g.c == 0) return {0.0, true};
    return {double(g.a) / double(g.c), false};
  }
  double den = double(g.c) * p.v + double(g.d);
  double num = double(g.a) * p.v + double(g.b);
  if (den == 0.0) return {0.0, true};
  return {num / den, false};
}

double theta_of(const ProjVal& p) { return p.inf ? kThetaInf : theta_of(p.v); }

cplx det_weight(const GroupElem& g, const cplx& s) {
  i128 det = g.det();
  if (det == 1 || det == -1) return 1.0;
  return std::exp(s * std::log(std::abs(double(det))));
}

}  // namespace

CycSpan CycSpan::interval(double a, double b) { return {false, theta_of(a), theta_of(b)}; }
CycSpan CycSpan::to_inf(double a) { return {false, theta_of(a), kThetaInf}; }
CycSpan CycSpan::from_inf(double b) { return {false, kThetaInf, theta_of(b)}; }

bool CycSpan::contains(double x) const {
  if (full) return true;
  double len = wrap2pi(tb - ta);
  double pos = wrap2pi(theta_of(x) - ta);
  return pos < len;
}

bool CycSpan::contains_inf() const {
  if (full) return true;
  double len = wrap2pi(tb - ta);
  double pos = wrap2pi(kThetaInf - ta);
  return pos > 1e-14 && pos < len - 1e-14;
}

CycSpan CycSpan::transformed(const GroupElem& m) const {
  if (full) return *this;
  auto endpoint = [&](double th) {
    ProjVal p = th == kThetaInf ? ProjVal{0.0, true} : ProjVal{std::tan(th / 2.0), false};
    return theta_of(mobius_apply(m, p));
  };
  double na = endpoint(ta);
  double nb = endpoint(tb);
  if (m.det() > 0) return {false, na, nb};
  return {false, nb, na};
}

std::vector<CycSpan> CycSpan::intersect(const CycSpan& p, const CycSpan& q) {
  if (p.full) return {q};
  if (q.full) return {p};
  double la = wrap2pi(p.tb - p.ta);
  double lb = wrap2pi(q.tb - q.ta);
  std::vector<CycSpan> out;
  for (int which = 0; which < 2; ++which) {
    double st = which == 0 ? p.ta : q.ta;
    double offa = wrap2pi(st - p.ta);
    double offb = wrap2pi(st - q.ta);
    if (offa >= 2.0 * kPi - 1e-12) offa = 0.0;
    if (offb >= 2.0 * kPi - 1e-12) offb = 0.0;
    if (offa > la - 1e-14) continue;
    if (offb > lb - 1e-14) continue;
    double rem = std::min(la - offa, lb - offb);
    if (rem <= 1e-14) continue;
    double end = st + rem;
    if (end > kPi) end -= 2.0 * kPi;
    CycSpan span{false, st, end};
    bool dup = false;
    for (const CycSpan& o : out)
      if (wrap2pi(o.ta - span.ta) < 1e-12 || wrap2pi(span.ta - o.ta) < 1e-12) dup = true;
    if (!dup) out.push_back(span);
  }
  return out;
}

std::vector<CycSpan> CycSpan::merge(std::vector<CycSpan> spans, double glue) {
  for (const CycSpan& s : spans)
    if (s.full) return {CycSpan::all()};
  if (spans.empty()) return {};
  struct Arc {
    double s, e;
  };
  std::vector<Arc> arcs;
  for (const CycSpan& sp : spans) {
    double st = wrap2pi(sp.ta);
    double len = wrap2pi(sp.tb - sp.ta);
    arcs.push_back({st, st + len});
  }
  std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) { return a.s < b.s; });
  std::vector<Arc> merged;
  for (const Arc& a : arcs) {
    if (!merged.empty() && a.s <= merged.back().e + glue)
      merged.back().e = std::max(merged.back().e, a.e);
    else
      merged.push_back(a);
  }
  // wrap join: arcs reaching past 2*pi may glue onto the first arc
  while (merged.size() > 1 && merged.back().e >= merged.front().s + 2.0 * kPi - glue) {
    merged.front().s = merged.back().s - 2.0 * kPi;
    merged.front().e = std::max(merged.front().e, merged.back().e - 2.0 * kPi);
    merged.pop_back();
  }
  double total = 0.0;
  for (const Arc& a : merged) total += a.e - a.s;
  if (merged.size() == 1 && total >= 2.0 * kPi - glue) return {CycSpan::all()};
  std::vector<CycSpan> out;
  for (const Arc& a : merged) {
    double ta = a.s, tb = a.e;
    while (ta <= -kPi) ta += 2.0 * kPi;
    while (ta > kPi) ta -= 2.0 * kPi;
    while (tb <= -kPi) tb += 2.0 * kPi;
    while (tb > kPi) tb -= 2.0 * kPi;
    out.push_back({false, ta, tb});
  }
  return out;
}

// ---------------------------------------------------------------------------
// AnalyticFn

AnalyticFn AnalyticFn::fit(const std::function<cplx(cplx)>& plane_value, double a, double b,
                           Chart chart, SpectralParam s, int n) {
  AnalyticFn f;
  f.chart = chart;
  f.lo = a;
  f.hi = b;
  f.s = s;
  std::vector<double> nodes = cheb_nodes(a, b, n);
  std::vector<cplx> vals(n);
  for (int j = 0; j < n; ++j) {
    if (chart == Chart::Identity) {
      vals[j] = plane_value(cplx(nodes[j], 0.0));
    } else {
      double u = nodes[j];
      if (u == 0.0) throw ResolutionError("fit: inverted-chart node at u=0");
      vals[j] = pow_sq(cplx(u, 0.0), s.s) * plane_value(cplx(-1.0 / u, 0.0));
    }
    if (!std::isfinite(vals[j].real()) || !std::isfinite(vals[j].imag()))
      throw ResolutionError("fit: non-finite sample");
  }
  f.coeffs = cheb_coeffs(vals);
  return f;
}

AnalyticFn AnalyticFn::fit_stored(const std::function<cplx(cplx)>& chart_value, double a, double b,
                                  Chart chart, SpectralParam s, int n) {
  AnalyticFn f;
  f.chart = chart;
  f.lo = a;
  f.hi = b;
  f.s = s;
  std::vector<double> nodes = cheb_nodes(a, b, n);
  std::vector<cplx> vals(n);
  for (int j = 0; j < n; ++j) vals[j] = chart_value(cplx(nodes[j], 0.0));
  f.coeffs = cheb_coeffs(vals);
  return f;
}

double AnalyticFn::max_coeff() const {
  double m = 0.0;
  for (const cplx& c : coeffs) m = std::max(m, std::abs(c));
  return m;
}

GroupElem AnalyticFn::effective(const GroupElem& g) const {
  return chart == Chart::Identity ? g : compose(gen::S(), g);
}

bool AnalyticFn::contains(double x) const {
  double u;
  if (chart == Chart::Identity) {
    u = x;
  } else {
    if (x == 0.0) return false;
    u = -1.0 / x;
  }
  double slack = 1e-12 * (hi - lo);
  return u >= lo - slack && u <= hi + slack;
}

bool AnalyticFn::contains_inf() const {
  if (chart == Chart::Identity) return false;
  double slack = 1e-12 * (hi - lo);
  return lo <= slack && hi >= -slack && lo < hi;
}

double AnalyticFn::depth(double x) const {
  double u = chart == Chart::Identity ? x : (x == 0.0 ? 1e30 : -1.0 / x);
  double t = (2.0 * u - lo - hi) / (hi - lo);
  return 1.0 - std::abs(t);
}

double AnalyticFn::predicted_error(cplx u) const {
  cplx t = normalized(u);
  double rho = ellipse_radius(t);
  double mx = max_coeff();
  double tail = std::max(tail_ratio(coeffs) * mx, 1e-16 * mx);
  if (rho <= 1.0 + 1e-14) return 0.0;
  double logerr = std::log(tail + 1e-300) + coeffs.size() * std::log(rho);
  return std::exp(std::min(logerr, 700.0));
}

cplx AnalyticFn::eval(cplx z) const { return slashed(gen::identity(), z, 1e30); }

cplx AnalyticFn::eval_at_inf() const {
  if (!contains_inf()) throw ExtrapolationError("eval_at_inf: piece does not reach infinity");
  return stored_at(0.0);
}

cplx AnalyticFn::slashed(const GroupElem& g, cplx z, double tol) const {
  GroupElem m = effective(g);
  cplx den = double(m.c) * z + double(m.d);
  if (den == 0.0) throw ExtrapolationError("slashed: image at infinity");
  cplx u = (double(m.a) * z + double(m.b)) / den;
  if (z.imag() == 0.0 && u.imag() == 0.0) {
    if (!(u.real() >= lo - 1e-12 * (hi - lo) && u.real() <= hi + 1e-12 * (hi - lo))) {
      std::ostringstream os;
      os << "slashed: point " << u.real() << " outside piece [" << lo << "," << hi << "]";
      throw ExtrapolationError(os.str());
    }
  } else if (tol < 1e29 && predicted_error(u) > tol * std::max(max_coeff(), 1e-300)) {
    throw ExtrapolationError("slashed: outside certified ellipse");
  }
  return det_weight(m, s.s) * pow_sq(den, s.s) * stored_at(u);
}

// ---------------------------------------------------------------------------
// PiecewiseFn

bool PiecewiseFn::covers(double x) const {
  for (const AnalyticFn& p : pieces)
    if (p.contains(x)) return true;
  return false;
}

bool PiecewiseFn::covers_inf() const {
  for (const AnalyticFn& p : pieces)
    if (p.contains_inf()) return true;
  return false;
}

cplx PiecewiseFn::value(double x) const { return slashed(gen::identity(), cplx(x, 0.0)); }

cplx PiecewiseFn::value_at_inf() const {
  for (const AnalyticFn& p : pieces)
    if (p.contains_inf()) return p.eval_at_inf();
  throw ExtrapolationError("value_at_inf: infinity not covered");
}

cplx PiecewiseFn::value(cplx z, double tol) const { return slashed(gen::identity(), z, tol); }

cplx PiecewiseFn::slashed(const GroupElem& g, cplx z, double tol) const {
  const AnalyticFn* best = nullptr;
  double best_score = -1e300;
  bool real_pt = z.imag() == 0.0;
  for (const AnalyticFn& p : pieces) {
    GroupElem m = p.effective(g);
    cplx den = double(m.c) * z + double(m.d);
    if (den == 0.0) continue;
    cplx u = (double(m.a) * z + double(m.b)) / den;
    if (real_pt) {
      double ur = u.real();
      double slack = 1e-12 * (p.hi - p.lo);
      if (ur < p.lo - slack || ur > p.hi + slack) continue;
      double t = (2.0 * ur - p.lo - p.hi) / (p.hi - p.lo);
      double score = 1.0 - std::abs(t);
      if (score > best_score) {
        best_score = score;
        best = &p;
      }
    } else {
      double err = p.predicted_error(u);
      double gate = tol * std::max(p.max_coeff(), 1e-300);
      if (err > gate) continue;
      double score = -err;
      if (score > best_score) {
        best_score = score;
        best = &p;
      }
    }
  }
  if (!best) {
    std::ostringstream os;
    os << "slashed: uncovered point z=(" << z.real() << "," << z.imag() << ") under g=" << g.str();
    throw ExtrapolationError(os.str());
  }
  return best->slashed(g, z, real_pt ? 1e30 : tol);
}

std::vector<CycSpan> PiecewiseFn::covered_spans() const {
  std::vector<CycSpan> out;
  for (const AnalyticFn& p : pieces) {
    if (p.chart == Chart::Identity) {
      out.push_back(CycSpan::interval(p.lo, p.hi));
    } else if (p.lo < 0.0 && p.hi > 0.0) {
      out.push_back(CycSpan::interval(-1.0 / p.lo, -1.0 / p.hi));  // wraps through inf
    } else if (p.lo == 0.0) {
      out.push_back(CycSpan::from_inf(-1.0 / p.hi));
    } else if (p.hi == 0.0) {
      out.push_back(CycSpan::to_inf(-1.0 / p.lo));
    } else {
      out.push_back(CycSpan::interval(-1.0 / p.lo, -1.0 / p.hi));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Piece building

namespace {

struct Chunk {
  Chart chart;
  double lo, hi;
};

struct Obstacle {
  double pos;
  double margin;
};

// cut points of [lo,hi]: geometric refinement (doubling steps) from flagged
// ends, plain chunks of at most max_len across the middle
void subdivide(double lo, double hi, bool ref_lo, double mlo, bool ref_hi, double mhi,
               double max_len, Chart chart, std::vector<Chunk>& out) {
  double len = hi - lo;
  if (len <= 1e-11) return;
  std::vector<double> cuts{lo};
  double a = lo;
  if (ref_lo) {
    double step = std::max(mlo, 1e-9);
    double pos = lo;
    while (pos + step < lo + 0.5 * len && step < max_len) {
      pos += step;
      cuts.push_back(pos);
      step *= 2.0;
    }
    a = cuts.back();
  }
  std::vector<double> rcuts;
  double b = hi;
  if (ref_hi) {
    double step = std::max(mhi, 1e-9);
    double pos = hi;
    while (pos - step > lo + 0.5 * len && step < max_len) {
      pos -= step;
      rcuts.push_back(pos);
      step *= 2.0;
    }
    if (!rcuts.empty()) b = rcuts.back();
  }
  int k = std::max(1, int(std::ceil((b - a) / max_len)));
  for (int i = 1; i < k; ++i) cuts.push_back(a + (b - a) * i / k);
  cuts.push_back(b);
  for (auto it = rcuts.rbegin(); it != rcuts.rend(); ++it) cuts.push_back(*it);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [&](double x, double y) { return std::abs(x - y) < 1e-12 * len; }),
             cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) out.push_back({chart, cuts[i], cuts[i + 1]});
}

// clip obstacle margins out of [xa,xb] and subdivide the remaining segments
void plan_run(Chart chart, double xa, double xb, const std::vector<Obstacle>& obs, double max_len,
              std::vector<Chunk>& chunks) {
  if (xb - xa <= 1e-11) return;
  std::vector<std::pair<double, double>> holes;
  for (const Obstacle& o : obs)
    if (o.pos > xa - o.margin && o.pos < xb + o.margin)
      holes.emplace_back(o.pos - o.margin, o.pos + o.margin);
  std::sort(holes.begin(), holes.end());
  double cur = xa;
  bool ref_left = false;
  double mleft = 0.0;
  for (auto& [hlo, hhi] : holes) {
    if (hlo > cur)
      subdivide(cur, hlo, ref_left, mleft, true, 0.5 * (hhi - hlo), max_len, chart, chunks);
    cur = std::max(cur, hhi);
    ref_left = true;
    mleft = 0.5 * (hhi - hlo);
  }
  if (cur < xb) subdivide(cur, xb, ref_left, mleft, false, 0.0, max_len, chart, chunks);
}

void fit_chunk(const std::function<cplx(cplx)>& value, const Chunk& ch, SpectralParam s,
               const BuildOptions& opt, std::vector<AnalyticFn>& out, int depth) {
  auto attempt = [&](int n) -> std::optional<AnalyticFn> {
    AnalyticFn f = AnalyticFn::fit(value, ch.lo, ch.hi, ch.chart, s, n);
    if (f.max_coeff() == 0.0 || f.decay() <= opt.decay_tol) return f;
    return std::nullopt;
  };
  if (auto f = attempt(opt.n)) {
    out.push_back(std::move(*f));
    return;
  }
  if (auto f = attempt(opt.n + opt.n / 2)) {
    out.push_back(std::move(*f));
    return;
  }
  if (depth >= opt.max_splits) {
    std::ostringstream os;
    os << "build: no coefficient decay on chunk [" << ch.lo << "," << ch.hi << "] chart "
       << (ch.chart == Chart::Identity ? "z" : "-1/z");
    throw ResolutionError(os.str());
  }
  double mid = ch.lo + (ch.hi - ch.lo) * 0.51371;  // off-center keeps u=0 off node sets
  fit_chunk(value, {ch.chart, ch.lo, mid}, s, opt, out, depth + 1);
  fit_chunk(value, {ch.chart, mid, ch.hi}, s, opt, out, depth + 1);
}

}  // namespace

PiecewiseFn build_piecewise(const std::function<cplx(cplx)>& plane_value,
                            const std::vector<CycSpan>& spans, std::vector<Sing> sing,
                            SpectralParam s, const BuildOptions& opt) {
  double H = opt.handover;
  for (const Sing& sg : sing) {
    if (sg.at_inf) continue;
    double ax = std::abs(sg.x);
    while (ax > 0.5 * H && ax < 2.0 * H && std::abs(ax - H) < 0.3 * H) H *= 1.4721;
  }
  double ulim = 1.0 / H;

  std::vector<Obstacle> xobs, uobs;
  bool inf_singular = false;
  double inf_margin = 0.0;
  for (const Sing& sg : sing) {
    if (sg.at_inf) {
      inf_singular = true;
      inf_margin = std::max(inf_margin, sg.margin);
    } else if (std::abs(sg.x) <= H) {
      xobs.push_back({sg.x, sg.margin});
    } else {
      uobs.push_back({-1.0 / sg.x, sg.margin / (sg.x * sg.x)});
    }
  }
  if (inf_singular) uobs.push_back({0.0, inf_margin});

  std::vector<Chunk> chunks;
  auto add_u_run = [&](double ua, double ub, bool wall_at_zero) {
    std::vector<Obstacle> uo = uobs;
    if (wall_at_zero && !inf_singular) uo.push_back({0.0, 1e-4});
    plan_run(Chart::Inverted, ua, ub, uo, 0.3, chunks);
  };

  for (const CycSpan& span : spans) {
    // split the span into monotone x-segments; ends may be infinite
    std::vector<std::pair<double, double>> segs;
    bool has_inf_pt = span.contains_inf();
    if (span.full) {
      segs.emplace_back(-kInf, kInf);
      has_inf_pt = !inf_singular;
    } else {
      double xa = span.ta == kThetaInf ? -kInf : std::tan(span.ta / 2.0);
      double xb = span.tb == kThetaInf ? kInf : std::tan(span.tb / 2.0);
      if (std::isinf(xa) || std::isinf(xb) || xa <= xb) {
        segs.emplace_back(xa, xb);
      } else {
        segs.emplace_back(xa, kInf);
        segs.emplace_back(-kInf, xb);
      }
    }
    if (inf_singular) has_inf_pt = false;

    double right_u_lo = 1.0, left_u_hi = -1.0;  // sentinels: empty
    for (auto& [A, B] : segs) {
      double ia = std::max(A, -H), ib = std::min(B, H);
      if (ia < ib) plan_run(Chart::Identity, ia, ib, xobs, opt.max_len, chunks);
      if (B > H) {  // right tail in the u-chart
        double ua = -1.0 / std::max(A, H);
        double ub = std::isinf(B) ? 0.0 : -1.0 / B;
        if (std::isinf(B) && has_inf_pt) {
          right_u_lo = ua;  // merge with a left tail across u=0
        } else {
          add_u_run(ua, ub, std::isinf(B));
        }
      }
      if (A < -H) {  // left tail
        double ua = std::isinf(A) ? 0.0 : -1.0 / A;
        double ub = -1.0 / std::min(B, -H);
        if (std::isinf(A) && has_inf_pt) {
          left_u_hi = ub;
        } else {
          add_u_run(ua, ub, std::isinf(A));
        }
      }
    }
    if (right_u_lo < 0.0 && left_u_hi > 0.0) {
      std::vector<Obstacle> uo = uobs;
      plan_run(Chart::Inverted, right_u_lo, left_u_hi, uo, 0.3, chunks);
    } else if (right_u_lo < 0.0) {
      add_u_run(right_u_lo, 0.0, true);
    } else if (left_u_hi > 0.0) {
      add_u_run(0.0, left_u_hi, true);
    }
  }
  (void)ulim;

  PiecewiseFn out;
  out.s = s;
  out.sing = std::move(sing);
  for (const Chunk& ch : chunks) fit_chunk(plane_value, ch, s, opt, out.pieces, 0);
  if (out.pieces.empty()) throw ResolutionError("build_piecewise: empty cover");
  return out;
}

PiecewiseFn assemble(std::vector<AnalyticFn> pieces, std::vector<Sing> sing, SpectralParam s,
                     double overlap_tol) {
  PiecewiseFn f;
  f.pieces = std::move(pieces);
  f.sing = std::move(sing);
  f.s = s;
  for (std::size_t i = 0; i < f.pieces.size(); ++i) {
    for (std::size_t j = i + 1; j < f.pieces.size(); ++j) {
      const AnalyticFn &p = f.pieces[i], &q = f.pieces[j];
      for (int k = 1; k <= 5; ++k) {
        double u = p.lo + (p.hi - p.lo) * k / 6.0;
        if (p.chart == Chart::Inverted && std::abs(u) < 1e-12) continue;
        double x = p.chart == Chart::Identity ? u : -1.0 / u;
        if (!q.contains(x) || !p.contains(x)) continue;
        cplx vp = p.eval(cplx(x, 0.0));
        cplx vq = q.eval(cplx(x, 0.0));
        double scale = std::max({std::abs(vp), std::abs(vq), 1e-30});
        if (std::abs(vp - vq) > overlap_tol * scale * 10.0 + overlap_tol) {
          std::ostringstream os;
          os << "assemble: pieces disagree at x=" << x << " by " << std::abs(vp - vq);
          throw ResolutionError(os.str());
        }
      }
    }
  }
  return f;
}

AnalyticFn restrict_fn(const PiecewiseFn& f, double a, double b, int n) {
  for (const Sing& sg : f.sing) {
    if (sg.at_inf) continue;
    if (sg.x > a - sg.margin && sg.x < b + sg.margin)
      throw ExtrapolationError("restrict: interval crosses a singular point");
  }
  return AnalyticFn::fit([&](cplx z) { return f.value(z.real()); }, a, b, Chart::Identity, f.s, n);
}

Sing transform_sing(const Sing& sg, const GroupElem& ginv) {
  ProjVal p = sg.at_inf ? ProjVal{0.0, true} : ProjVal{sg.x, false};
  ProjVal q = mobius_apply(ginv, p);
  GroupElem cp = sg.at_inf ? gen::S() : gen::identity();
  GroupElem cq = q.inf ? gen::S() : gen::identity();
  // w maps the local chart at q to the local chart at p
  GroupElem w = compose(compose(cp, ginv.inverse()), cq.inverse());
  double u0 = q.inf ? 0.0 : q.v;
  double dphi = std::abs(w.deriv(u0));
  Sing out;
  out.at_inf = q.inf;
  out.x = q.inf ? 0.0 : q.v;
  out.margin = std::min(std::max(sg.margin / std::max(dphi, 1e-12), 1e-8), 0.45);
  return out;
}

PiecewiseFn combine_slashed(const std::vector<SlashTerm>& terms, SpectralParam s,
                            const BuildOptions& opt,
                            const std::optional<std::vector<CycSpan>>& target) {
  if (terms.empty()) throw std::invalid_argument("combine_slashed: no terms");
  std::vector<Sing> sing;
  for (const SlashTerm& t : terms) {
    GroupElem ginv = t.g.inverse();
    for (const Sing& sg : t.fn->sing) sing.push_back(transform_sing(sg, ginv));
  }
  std::vector<Sing> merged;
  for (const Sing& sg : sing) {
    bool had = false;
    for (Sing& m : merged) {
      bool same = (sg.at_inf && m.at_inf) ||
                  (!sg.at_inf && !m.at_inf && std::abs(sg.x - m.x) < 1e-9 * (1.0 + std::abs(m.x)));
      if (same) {
        m.margin = std::max(m.margin, sg.margin);
        had = true;
        break;
      }
    }
    if (!had) merged.push_back(sg);
  }

  std::vector<CycSpan> spans;
  if (target) {
    spans = *target;
  } else {
    spans = {CycSpan::all()};
    for (const SlashTerm& t : terms) {
      GroupElem ginv = t.g.inverse();
      std::vector<CycSpan> mine;
      for (const CycSpan& sp : t.fn->covered_spans()) mine.push_back(sp.transformed(ginv));
      mine = CycSpan::merge(std::move(mine));
      std::vector<CycSpan> next;
      for (const CycSpan& a : spans)
        for (const CycSpan& b : mine)
          for (const CycSpan& c : CycSpan::intersect(a, b)) next.push_back(c);
      spans = CycSpan::merge(std::move(next));
    }
  }

  auto value = [terms](cplx z) {
    cplx acc = 0.0;
    for (const SlashTerm& t : terms) acc += t.coeff * t.fn->slashed(t.g, z);
    return acc;
  };
  return build_piecewise(value, spans, merged, s, opt);
}

PiecewiseFn slash(const PiecewiseFn& f, const GroupElem& g, const BuildOptions& opt) {
  return combine_slashed({{cplx(1.0), &f, g}}, f.s, opt);
}

PiecewiseFn slash_ring(const PiecewiseFn& f, const GroupRingElem& xi, const BuildOptions& opt) {
  std::vector<SlashTerm> terms;
  for (const auto& [c, g] : xi.terms()) terms.push_back({c, &f, g});
  return combine_slashed(terms, f.s, opt);
}

AnalyticFn slash_interval(const AnalyticFn& f, const GroupElem& g, double a, double b,
                          SpectralParam s, int n) {
  return AnalyticFn::fit([&](cplx z) { return f.slashed(g, z); }, a, b, Chart::Identity, s, n);
}

// ---------------------------------------------------------------------------
// Asymptotic expansions

AsymExpansion fit_asymptotic(const std::function<cplx(double)>& f, AsymExpansion::Loc loc,
                             int side, SpectralParam s, int m_count, double near, double far,
                             int samples) {
  // In the local variable v (1/x at infinity, x at zero) the claim is
  //   w(v) := v * weight(x) * f(x) = sum_{m>=-1} c_m v^{m+1},
  // a polynomial in v.  Fit it as a Chebyshev series on the sample window
  // (well conditioned) and read the Taylor coefficients at v=0.
  AsymExpansion out;
  out.loc = loc;
  out.side = side;
  double v_lo, v_hi;
  if (loc == AsymExpansion::Loc::Inf) {
    double x_lo = std::max(10.0, std::cbrt(far));
    v_lo = 1.0 / far;
    v_hi = 1.0 / x_lo;
  } else {
    v_lo = near;
    v_hi = std::min(0.1, std::sqrt(near));
  }
  double a = side > 0 ? v_lo : -v_hi;
  double b = side > 0 ? v_hi : -v_lo;
  int degree = m_count + 5;
  samples = std::max(samples, 3 * degree);
  std::vector<double> vs(samples);
  std::vector<cplx> ws(samples);
  double fscale = 0.0, wconv = 0.0;
  for (int j = 0; j < samples; ++j) {
    // Chebyshev-distributed samples keep the least-squares system tame
    double v = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(kPi * (j + 0.5) / samples);
    double x = loc == AsymExpansion::Loc::Inf ? 1.0 / v : v;
    cplx fv = f(x);
    fscale = std::max(fscale, std::abs(fv));
    cplx weight = loc == AsymExpansion::Loc::Inf
                      ? std::exp(2.0 * s.s * std::log(std::abs(x)))
                      : cplx(1.0);
    vs[j] = v;
    ws[j] = v * weight * fv;
    wconv = std::max(wconv, 1.0 / std::abs(v * weight));
  }
  double resid_w = 0.0;
  std::vector<cplx> cheb = cheb_fit_ls(vs, ws, a, b, degree, &resid_w);
  auto taylor_basis = cheb_taylor_at_zero(a, b, degree + 1, m_count + 1);
  out.coeffs.assign(m_count, 0.0);
  for (int m = 0; m < m_count; ++m) {
    cplx acc = 0.0;
    for (int k = 0; k <= degree; ++k) acc += cheb[k] * taylor_basis[k][m];
    out.coeffs[m] = acc;  // coefficient of v^m in w, i.e. c_{m-1}
  }
  out.residual = resid_w * wconv;
  out.converged = out.residual <= 1e-6 * std::max(fscale, 1e-300);
  return out;
}

// ---------------------------------------------------------------------------
// Separation of singularities (circle model)

namespace {

cplx cayley(cplx x) { return (x - cplx(0, 1)) / (x + cplx(0, 1)); }
cplx cayley_inv(cplx t) { return cplx(0, 1) * (1.0 + t) / (1.0 - t); }

cplx model_point(bool at_inf, double x) {
  return at_inf ? cplx(1.0, 0.0) : cayley(cplx(x, 0.0));
}

// (1 + x^2)^s F(x) evaluated chart-aware at a model-circle point
cplx model_value(const PiecewiseFn& f, cplx s, cplx t, double tol) {
  cplx x = cayley_inv(t);
  if (std::abs(x) <= 1.0) return std::exp(s * std::log(1.0 + x * x)) * f.value(x, tol);
  cplx u = -1.0 / x;
  return std::exp(s * std::log(1.0 + u * u)) * f.slashed(gen::S(), u, tol);
}

}  // namespace

std::pair<PiecewiseFn, PiecewiseFn> separate_singularities(const PiecewiseFn& f,
                                                           const SeparateOptions& opt) {
  if (f.sing.size() != 2)
    throw std::invalid_argument("separate_singularities: need exactly two singular points");
  const Sing &sxi = f.sing[0], &seta = f.sing[1];
  cplx p = model_point(sxi.at_inf, sxi.x);

  cplx q_pt = model_point(seta.at_inf, seta.x);
  double ang_pq = std::abs(std::arg(q_pt / p));  // angular distance between the two points

  // Pole-cluster absorber: least-squares fit of the model function on
  // one-sided windows flanking p, with poles packed radially inside the
  // margin disk.  The pole part carries the singularity at xi.
  auto absorber = [&](cplx center, const Sing& sg,
                      int npoles) -> std::vector<std::pair<cplx, cplx>> {
    double dscale = sg.at_inf
                        ? 2.0
                        : std::abs(2.0 / ((cplx(sg.x, 0) + cplx(0, 1)) * (cplx(sg.x, 0) + cplx(0, 1))));
    double r_in = std::max(1.15 * sg.margin * dscale, 1e-6);
    double r_out = std::min({2.0 * opt.rho, 0.45 * ang_pq, 0.45});
    r_out = std::max(r_out, 4.0 * r_in);
    std::vector<cplx> ts, vs;
    int per_side = 3 * npoles;
    for (int sgn = -1; sgn <= 1; sgn += 2) {
      for (int j = 0; j < per_side; ++j) {
        double r = r_in * std::pow(r_out / r_in, double(j) / (per_side - 1));
        cplx t = center * std::exp(cplx(0.0, sgn * r));
        try {
          vs.push_back(model_value(f, f.s.s, t, 1e-6));
          ts.push_back(t);
        } catch (const ExtrapolationError&) {
        }
      }
    }
    if (int(ts.size()) < npoles + 12)
      throw ResolutionError("separate: too few certified window samples around the singular point");
    std::vector<cplx> poles;
    for (int k = 0; k < (npoles + 1) / 2; ++k) {
      double tau = std::max(0.75 * r_in * std::pow(0.55, k), 1e-8);
      poles.push_back(center * (1.0 + tau));
      poles.push_back(center * (1.0 - tau));
    }
    int np = int(poles.size());
    int npoly = 14;
    Eigen::MatrixXcd A(ts.size(), np + npoly);
    Eigen::VectorXcd rhs(ts.size());
    double sc = 0.75 * r_in;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      rhs(i) = vs[i];
      for (int k = 0; k < np; ++k) A(i, k) = sc / (ts[i] - poles[k]);
      cplx w = (ts[i] - center) / r_out;
      cplx pw = 1.0;
      for (int j = 0; j < npoly; ++j) {
        A(i, np + j) = pw;
        pw *= w;
      }
    }
    // graded pole basis: thresholded SVD keeps the solution tame
    Eigen::VectorXd colscale(np + npoly);
    for (int c = 0; c < np + npoly; ++c) {
      colscale(c) = A.col(c).norm();
      if (colscale(c) == 0.0) colscale(c) = 1.0;
      A.col(c) /= colscale(c);
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    Eigen::VectorXcd sol = svd.solve(rhs);
    std::vector<std::pair<cplx, cplx>> out;
    for (int k = 0; k < np; ++k) out.emplace_back(sol(k) / colscale(k) * sc, poles[k]);
    return out;
  };

  int npoles = 26;
  auto poles_xi = absorber(p, sxi, npoles);
  auto pullback = [s = f.s.s](const std::vector<std::pair<cplx, cplx>>& poles, cplx z) {
    cplx t = cayley(z);
    cplx acc = 0.0;
    for (const auto& [a, pk] : poles) acc += a / (t - pk);
    if (std::abs(z) <= 1.0) return std::exp(-s * std::log(1.0 + z * z)) * acc;
    cplx u = -1.0 / z;
    return std::exp(-s * std::log(1.0 + u * u)) * acc / pow_sq(u, s);
  };

  BuildOptions bopt;
  bopt.n = opt.n;
  // F_xi := -L (sing at xi only); F_eta := F - L, analytic across xi
  PiecewiseFn f_xi =
      build_piecewise([&](cplx z) { return -pullback(poles_xi, z); }, {CycSpan::all()}, {sxi}, f.s, bopt);
  PiecewiseFn f_eta = build_piecewise(
      [&](cplx z) { return f.value(z.real()) - pullback(poles_xi, z); }, {CycSpan::all()},
      {sxi, seta}, f.s, bopt);

  // fill/certify the hole left at xi by a straddling least-squares refit
  if (!sxi.at_inf) {
    double m = sxi.margin;
    double a = sxi.x - 60.0 * m, b = sxi.x + 60.0 * m;
    std::vector<std::pair<double, double>> holes{{sxi.x - 1.03 * m, sxi.x + 1.03 * m}};
    AnalyticFn patch = refit_straddling([&](double x) { return f_eta.value(x); }, a, b, holes,
                                        f.s, opt.n - 8, 1e-5);
    f_eta.pieces.push_back(patch);
  } else {
    double m = sxi.margin;
    double ua = -60.0 * m, ub = 60.0 * m;
    std::vector<double> us;
    std::vector<cplx> uv;
    for (int j = 0; j < 200; ++j) {
      double u = ua + (ub - ua) * 0.5 * (1.0 - std::cos(kPi * (j + 0.5) / 200.0));
      if (std::abs(u) < 1.03 * m) continue;
      us.push_back(u);
      uv.push_back(pow_sq(cplx(u, 0.0), f.s.s) * f_eta.value(-1.0 / u));
    }
    double r2 = 0.0;
    std::vector<cplx> c = cheb_fit_ls(us, uv, ua, ub, opt.n - 8, &r2);
    double mx = 0.0;
    for (const cplx& cc : c) mx = std::max(mx, std::abs(cc));
    if (r2 > 1e-5 * std::max(mx, 1e-30))
      throw ResolutionError("separate: eta part fails analyticity across infinity");
    AnalyticFn patch;
    patch.chart = Chart::Inverted;
    patch.lo = ua;
    patch.hi = ub;
    patch.coeffs = std::move(c);
    patch.s = f.s;
    f_eta.pieces.push_back(patch);
  }
  f_eta.sing = {seta};
  return {f_xi, f_eta};
}

AnalyticFn refit_straddling(const std::function<cplx(double)>& f, double a, double b,
                            const std::vector<std::pair<double, double>>& holes, SpectralParam s,
                            int degree, double tol) {
  std::vector<double> xs;
  std::vector<cplx> vs;
  int nsamp = std::max(4 * degree, 120);
  for (int j = 0; j < nsamp; ++j) {
    double x = a + (b - a) * 0.5 * (1.0 - std::cos(kPi * (j + 0.5) / nsamp));
    bool inside = false;
    for (auto& [hlo, hhi] : holes)
      if (x > hlo && x < hhi) inside = true;
    if (inside) continue;
    xs.push_back(x);
    vs.push_back(f(x));
  }
  double resid = 0.0;
  std::vector<cplx> c = cheb_fit_ls(xs, vs, a, b, degree, &resid);
  double mx = 0.0;
  for (const cplx& cc : c) mx = std::max(mx, std::abs(cc));
  double tail = 0.0;
  for (int k = std::max(0, int(c.size()) - 4); k < int(c.size()); ++k)
    tail = std::max(tail, std::abs(c[k]));
  if (resid > tol * std::max(mx, 1e-30) || tail > 1e-4 * std::max(mx, 1e-30)) {
    std::ostringstream os;
    os << "refit_straddling: no analytic interpolant on [" << a << "," << b << "] (residual "
       << resid << ", tail " << tail << ", scale " << mx << ")";
    throw ResolutionError(os.str());
  }
  AnalyticFn out;
  out.chart = Chart::Identity;
  out.lo = a;
  out.hi = b;
  out.coeffs = std::move(c);
  out.s = s;
  return out;
}

}  // namespace mtrans
