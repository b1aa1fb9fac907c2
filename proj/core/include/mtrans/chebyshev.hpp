#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace mtrans {

using cplx = std::complex<double>;

// Chebyshev-Gauss-Lobatto nodes on [a,b], n points (degree n-1),
// ordered from b down to a (cos(j pi/(n-1))).
std::vector<double> cheb_nodes(double a, double b, int n);

// Node values -> Chebyshev coefficients (type-I Lobatto transform, O(n^2)).
std::vector<cplx> cheb_coeffs(const std::vector<cplx>& values);

// Clenshaw evaluation of sum c_k T_k(t) at normalized t.
cplx clenshaw(const std::vector<cplx>& c, cplx t);

// Elliptical radius |t + sqrt(t^2-1)| >= 1 of a point relative to [-1,1].
double ellipse_radius(cplx t);

// max |c_k| over the trailing `tail` coefficients relative to max overall.
double tail_ratio(const std::vector<cplx>& c, int tail = 4);

// Least-squares Chebyshev fit of given degree from scattered samples on [a,b].
// Returns coefficients; fills residual with the max abs misfit.
std::vector<cplx> cheb_fit_ls(const std::vector<double>& x, const std::vector<cplx>& v,
                              double a, double b, int degree, double* residual);

// Taylor coefficients around 0 of a callback analytic on |u| <= r, via an
// M-point trapezoid rule on the circle |u| = r.
std::vector<cplx> taylor_by_circle(const std::function<cplx(cplx)>& f, double r, int count,
                                   int quad_points = 128);

// Taylor coefficients at 0 of T_k((2u - a - b)/(b - a)) for k = 0..n-1,
// each to `count` terms.  Exact three-term recurrence in coefficient space.
std::vector<std::vector<double>> cheb_taylor_at_zero(double a, double b, int n, int count);

}  // namespace mtrans
