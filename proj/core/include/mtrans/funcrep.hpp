#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtrans/chebyshev.hpp"
#include "mtrans/mobius.hpp"
#include "mtrans/special.hpp"

namespace mtrans {

struct ResolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ExtrapolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Chart { Identity, Inverted };

// Singular point of a piecewise function together with the exclusion margin,
// measured in the local chart (u = -1/x units for the point at infinity).
struct Sing {
  bool at_inf = false;
  double x = 0.0;
  double margin = 1e-3;

  static Sing at(double x0, double m = 1e-3) { return {false, x0, m}; }
  static Sing inf(double m = 1e-3) { return {true, 0.0, m}; }
};

// Cyclic interval of P^1(R) in the angle coordinate theta = 2 atan(x),
// theta(inf) = pi.  The span runs counterclockwise from ta to tb.
struct CycSpan {
  bool full = true;
  double ta = 0.0, tb = 0.0;

  static CycSpan all() { return {true, 0, 0}; }
  // from a to b through increasing x; wraps through infinity when a > b
  static CycSpan interval(double a, double b);
  static CycSpan to_inf(double a);    // (a, +inf)
  static CycSpan from_inf(double b);  // (-inf, b)

  bool contains(double x) const;
  bool contains_inf() const;
  CycSpan transformed(const GroupElem& m) const;  // image under the Mobius map m
  static std::vector<CycSpan> intersect(const CycSpan& p, const CycSpan& q);
  // union of overlapping/abutting arcs, collapsed to `all` when they tile
  static std::vector<CycSpan> merge(std::vector<CycSpan> spans, double glue = 1e-9);
};

// Analytic function on an interval of P^1(R), held as a Chebyshev interpolant
// in one of two charts.  An Inverted piece stores H = h|_{2s}S on a u-interval
// around the relevant part of the line, so that the represented value is
// h(x) = ((x)^2)^{-s} H(-1/x); this makes analyticity at infinity literal
// coefficient decay.
class AnalyticFn {
 public:
  Chart chart = Chart::Identity;
  double lo = -1.0, hi = 1.0;  // chart-variable interval
  std::vector<cplx> coeffs;
  SpectralParam s;

  AnalyticFn() = default;

  // Interpolate the represented (plane) values on the chart interval [a,b].
  static AnalyticFn fit(const std::function<cplx(cplx)>& plane_value, double a, double b,
                        Chart chart, SpectralParam s, int n);
  // Interpolate stored chart values directly (no weight applied).
  static AnalyticFn fit_stored(const std::function<cplx(cplx)>& chart_value, double a, double b,
                               Chart chart, SpectralParam s, int n);

  int size() const { return int(coeffs.size()); }
  double max_coeff() const;
  double decay() const { return tail_ratio(coeffs); }

  // Effective matrix whose identity-chart slash reproduces (this|g).
  GroupElem effective(const GroupElem& g) const;

  bool contains(double x) const;       // finite plane point
  bool contains_inf() const;
  double depth(double x) const;        // 1 - |t|, selection metric
  double predicted_error(cplx u) const;  // extrapolation model in chart coords

  cplx eval(cplx z) const;  // represented value at a plane point
  cplx eval_at_inf() const;
  // (this|_{2s} g)(z); throws ExtrapolationError outside the certified region
  cplx slashed(const GroupElem& g, cplx z, double tol = 1e-8) const;
  cplx stored_at(cplx u) const { return clenshaw(coeffs, normalized(u)); }

  cplx normalized(cplx u) const { return (2.0 * u - lo - hi) / (hi - lo); }
};

// Element of V^fs: analytic pieces covering P^1(R) outside margins around a
// finite singular set.
class PiecewiseFn {
 public:
  std::vector<AnalyticFn> pieces;
  std::vector<Sing> sing;
  SpectralParam s;

  bool covers(double x) const;
  bool covers_inf() const;

  cplx value(double x) const;
  cplx value_at_inf() const;
  cplx value(cplx z, double tol = 1e-8) const;
  // value of (this|_{2s} g) at z
  cplx slashed(const GroupElem& g, cplx z, double tol = 1e-8) const;
  cplx slashed(const GroupElem& g, double x) const { return slashed(g, cplx(x, 0.0)); }

  std::vector<CycSpan> covered_spans() const;
};

struct BuildOptions {
  int n = 48;              // Chebyshev points per piece
  double handover = 8.0;   // |x| beyond which the u-chart takes over
  double max_len = 1.5;    // plain chunk length in the identity chart
  double decay_tol = 1e-9; // resolved-piece trailing-coefficient bound
  int max_splits = 4;
};

// Fit pieces of the callback over the requested spans, avoiding margins
// around the singular points.
PiecewiseFn build_piecewise(const std::function<cplx(cplx)>& plane_value,
                            const std::vector<CycSpan>& spans, std::vector<Sing> sing,
                            SpectralParam s, const BuildOptions& opt = {});

// Assemble from explicit pieces; adjacent pieces must agree on overlaps.
PiecewiseFn assemble(std::vector<AnalyticFn> pieces, std::vector<Sing> sing, SpectralParam s,
                     double overlap_tol = 1e-9);

// Refit on [a,b]; throws if the interval meets a singular margin.
AnalyticFn restrict_fn(const PiecewiseFn& f, double a, double b, int n = 48);

// Singular point of f|g given that of f (ginv is g^{-1}); margins rescale by
// the chart derivative.
Sing transform_sing(const Sing& sg, const GroupElem& ginv);

// Weighted sum of slashed terms: sum_i coeff_i * (f_i | g_i).
struct SlashTerm {
  cplx coeff;
  const PiecewiseFn* fn;
  GroupElem g;
};
PiecewiseFn combine_slashed(const std::vector<SlashTerm>& terms, SpectralParam s,
                            const BuildOptions& opt = {},
                            const std::optional<std::vector<CycSpan>>& target = std::nullopt);

PiecewiseFn slash(const PiecewiseFn& f, const GroupElem& g, const BuildOptions& opt = {});
PiecewiseFn slash_ring(const PiecewiseFn& f, const GroupRingElem& xi,
                       const BuildOptions& opt = {});

AnalyticFn slash_interval(const AnalyticFn& f, const GroupElem& g, double a, double b,
                          SpectralParam s, int n = 48);

// One-sided asymptotic expansion at 0 or infinity:
//   at infinity: P(x) ~ sum_{m>=-1} c_m x^{-2s-m}   (x -> +inf; on the left,
//                basis |x|^{-2s} x^{-m})
//   at zero:     P(x) ~ sum_{m>=-1} c_m x^m
struct AsymExpansion {
  enum class Loc { Zero, Inf } loc = Loc::Inf;
  int side = +1;  // +1 approach from above / +inf, -1 from below / -inf
  std::vector<cplx> coeffs;  // c_{-1}, c_0, ..., c_M
  double residual = 0.0;
  bool converged = false;
};

AsymExpansion fit_asymptotic(const std::function<cplx(double)>& f, AsymExpansion::Loc loc,
                             int side, SpectralParam s, int m_count = 10,
                             double near = 1e-3, double far = 1e3, int samples = 24);

// Cousin-type separation: F with sing {xi, eta} written as F = F_eta - F_xi
// with one singularity each.  Computed in the circle model (Cayley chart)
// by contour integrals around the two mapped singular points.
struct SeparateOptions {
  double rho = 0.15;   // contour radius on the model circle
  int quad_points = 256;
  int n = 48;
  double stability_tol = 1e-8;
};
std::pair<PiecewiseFn, PiecewiseFn> separate_singularities(const PiecewiseFn& f,
                                                           const SeparateOptions& opt = {});

// Least-squares refit across exclusion holes; certifies analyticity there.
// Throws ResolutionError when no analytic interpolant fits.
AnalyticFn refit_straddling(const std::function<cplx(double)>& f, double a, double b,
                            const std::vector<std::pair<double, double>>& holes,
                            SpectralParam s, int degree = 40, double tol = 1e-7);

}  // namespace mtrans
