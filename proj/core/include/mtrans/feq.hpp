#pragma once

#include "mtrans/averages.hpp"
#include "mtrans/funcrep.hpp"

namespace mtrans {

// sup over the points of |P - P|T - P|T'| (the three term equation)
double three_term_residual(const PiecewiseFn& p, const std::vector<double>& points);

// sup over the points of |g + g|ST^2 - g|T^{-1} - g|T^{-1}ST^{-2}|
// (the four term equation on (-phi, phi))
double four_term_residual(const PiecewiseFn& g, const std::vector<double>& points);

// parity decomposition P = P+ + P- with P±|C = ±P± on the inversion-symmetric
// window [1/X, X]
struct ParityParts {
  AnalyticFn plus;
  AnalyticFn minus;
};
ParityParts parity_decompose(const PiecewiseFn& p, double window, int n = 64);

// one-sided expansions of the period type at both ends of (0, inf)
struct SimpleAsymptotics {
  bool ok = false;
  AsymExpansion at_inf;
  AsymExpansion at_zero;
};
SimpleAsymptotics check_simple_asymptotics(const std::function<cplx(double)>& p, SpectralParam s,
                                           int m_count = 10, double near = 1e-3, double far = 1e3);

// Extension of a 1-eigenpair of the two-component operator from small
// intervals to (-phi^2+eps, phi-eps) x (-phi+eps, phi^2-eps) by iterating the
// eigenfunction relation; the interval endpoints follow
//   -a1' = 1/a1 - 3,  b2' = 3 - 1/b2,  b1' = b2' - 1,  -a2' = -a1' + 1.
struct ExtendedPair {
  PiecewiseFn h1;
  PiecewiseFn h2;
  double residual = 0.0;  // worst consistency defect against the previous step
  int iterations = 0;
};
struct ExtendOptions {
  cplx lambda_{1.0, 0.0};  // eigenvalue of the pair (division per application)
  double eps = 1e-3;
  int max_iter = 24;
  double resid_tol = 1e-7;
  int n_direct = 24;
  int k_tail = 28;
  BuildOptions build{};
};
ExtendedPair extend_to_max_interval(const PiecewiseFn& f1, const PiecewiseFn& f2, SpectralParam s,
                                    const ExtendOptions& opt = {});

// endpoint recursion a -> 3 - 1/a used by the extension; increasing to phi^2
double endpoint_step(double a);

}  // namespace mtrans
