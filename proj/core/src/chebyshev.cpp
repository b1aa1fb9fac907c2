#include "mtrans/chebyshev.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mtrans {

std::vector<double> cheb_nodes(double a, double b, int n) {
  if (n < 2) throw std::invalid_argument("cheb_nodes: need n >= 2");
  std::vector<double> x(n);
  double mid = 0.5 * (a + b);
  double half = 0.5 * (b - a);
  int m = n - 1;
  for (int j = 0; j <= m; ++j) x[j] = mid + half * std::cos(j * std::numbers::pi / m);
  return x;
}

std::vector<cplx> cheb_coeffs(const std::vector<cplx>& v) {
  int n = int(v.size());
  int m = n - 1;
  std::vector<cplx> c(n);
  for (int k = 0; k <= m; ++k) {
    cplx acc = 0.5 * (v[0] + (k % 2 == 0 ? v[m] : -v[m]));
    for (int j = 1; j < m; ++j) acc += v[j] * std::cos(k * j * std::numbers::pi / m);
    c[k] = acc * (2.0 / m);
  }
  c[0] *= 0.5;
  c[m] *= 0.5;
  return c;
}

cplx clenshaw(const std::vector<cplx>& c, cplx t) {
  cplx b1 = 0.0, b2 = 0.0;
  for (int k = int(c.size()) - 1; k >= 1; --k) {
    cplx b0 = c[k] + 2.0 * t * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c[0] + t * b1 - b2;
}

double ellipse_radius(cplx t) {
  cplx w = std::sqrt(t * t - 1.0);
  double r = std::abs(t + w);
  if (r < 1.0) r = std::abs(t - w);
  return std::max(r, 1.0);
}

double tail_ratio(const std::vector<cplx>& c, int tail) {
  double mx = 0.0;
  for (const cplx& z : c) mx = std::max(mx, std::abs(z));
  if (mx == 0.0) return 0.0;
  double tl = 0.0;
  for (int k = std::max(0, int(c.size()) - tail); k < int(c.size()); ++k)
    tl = std::max(tl, std::abs(c[k]));
  return tl / mx;
}

std::vector<cplx> cheb_fit_ls(const std::vector<double>& x, const std::vector<cplx>& v,
                              double a, double b, int degree, double* residual) {
  int rows = int(x.size());
  int cols = degree + 1;
  if (rows < cols) throw std::invalid_argument("cheb_fit_ls: underdetermined");
  Eigen::MatrixXcd A(rows, cols);
  Eigen::VectorXcd rhs(rows);
  for (int i = 0; i < rows; ++i) {
    double t = (2.0 * x[i] - a - b) / (b - a);
    double tkm2 = 1.0, tkm1 = t;
    A(i, 0) = 1.0;
    if (cols > 1) A(i, 1) = t;
    for (int k = 2; k < cols; ++k) {
      double tk = 2.0 * t * tkm1 - tkm2;
      A(i, k) = tk;
      tkm2 = tkm1;
      tkm1 = tk;
    }
    rhs(i) = v[i];
  }
  Eigen::VectorXcd sol = A.householderQr().solve(rhs);
  if (residual) *residual = (A * sol - rhs).cwiseAbs().maxCoeff();
  std::vector<cplx> c(cols);
  for (int k = 0; k < cols; ++k) c[k] = sol(k);
  return c;
}

std::vector<cplx> taylor_by_circle(const std::function<cplx(cplx)>& f, double r, int count,
                                   int quad_points) {
  std::vector<cplx> samples(quad_points);
  for (int j = 0; j < quad_points; ++j) {
    double th = 2.0 * std::numbers::pi * j / quad_points;
    samples[j] = f(r * std::exp(cplx(0.0, th)));
  }
  std::vector<cplx> coeff(count);
  for (int k = 0; k < count; ++k) {
    cplx acc = 0.0;
    for (int j = 0; j < quad_points; ++j) {
      double th = 2.0 * std::numbers::pi * j / quad_points;
      acc += samples[j] * std::exp(cplx(0.0, -k * th));
    }
    coeff[k] = acc / (double(quad_points) * std::pow(r, k));
  }
  return coeff;
}

std::vector<std::vector<double>> cheb_taylor_at_zero(double a, double b, int n, int count) {
  // T_hat_k(u) = T_k(alpha u + beta); multiply-by-(alpha u + beta) recurrence.
  double alpha = 2.0 / (b - a);
  double beta = -(a + b) / (b - a);
  std::vector<std::vector<double>> c(n, std::vector<double>(count, 0.0));
  if (n > 0) c[0][0] = 1.0;
  if (n > 1) {
    c[1][0] = beta;
    if (count > 1) c[1][1] = alpha;
  }
  for (int k = 2; k < n; ++k) {
    for (int m = 0; m < count; ++m) {
      double v = 2.0 * beta * c[k - 1][m] - c[k - 2][m];
      if (m > 0) v += 2.0 * alpha * c[k - 1][m - 1];
      c[k][m] = v;
    }
  }
  return c;
}

}  // namespace mtrans
