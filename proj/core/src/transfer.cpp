#include "mtrans/transfer.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

namespace mtrans {

long long nicf_floor(double x) {
  if (x > 0.0) return (long long)std::floor(x);
  // n < x <= n+1
  double c = std::ceil(x);
  if (c == x) return (long long)c - 1;
  return (long long)std::floor(x);
}

double nicf_map(double x, bool standard_floor) {
  if (x < -0.5 || x > 0.5) throw std::domain_error("nicf_map: x outside [-1/2, 1/2]");
  if (x == 0.0) throw std::domain_error("nicf_map: orbit hits the pole at 0");
  double sx = -1.0 / x;
  double n = standard_floor ? std::floor(sx + 0.5) : double(nicf_floor(sx + 0.5));
  return sx - n;
}

std::vector<long long> nicf_digits(double x, int k) {
  if (x < -0.5 || x > 0.5) throw std::domain_error("nicf_digits: x outside [-1/2, 1/2]");
  std::vector<long long> out;
  double cur = x;
  for (int i = 0; i < k; ++i) {
    if (std::abs(cur) < 1e-15)
      throw std::domain_error("nicf_digits: orbit hits 0 (rational input terminates)");
    double sx = -1.0 / cur;
    long long a = nicf_floor(sx + 0.5);
    out.push_back(a);
    cur = sx - double(a);
  }
  return out;
}

double nicf_reconstruct(const std::vector<long long>& digits) {
  double v = 0.0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) v = -1.0 / (double(*it) + v);
  return v;
}

bool nicf_admissible(const std::vector<long long>& digits) {
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (std::llabs(digits[i]) < 2) return false;
    if (i + 1 < digits.size() && std::llabs(digits[i]) == 2 && std::llabs(digits[i + 1]) == 2 &&
        digits[i] * digits[i + 1] != -4)
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// operator assembly

namespace {

// one family of inverse branches feeding a component:
//   sigma_b=+1: sum_{n>=n0} (z+n)^{-2s} f_src(sigma_a/(z+n))
//   sigma_b=-1: sum_{n>=n0} (n-z)^{-2s} f_src(sigma_a/(n-z))
struct BranchFamily {
  int src;
  int n0;
  int sigma_b;
  int sigma_a;
  bool single = false;  // only the n0 term (composition operator)
};

struct DiskGeometry {
  std::vector<double> centers;
  double radius;
  double quad_radius;
};

DiskGeometry geometry(OperatorKind kind) {
  // Mayer: nodal on [0,2]; pair operators: disks mapped strictly inside.
  if (kind == OperatorKind::Mayer) return {{1.0}, 1.0, 0.0};
  return {{-0.25, 0.25}, 0.45, 0.50};
}

// values-to-coefficients matrix for the Lobatto nodes (n x n)
Eigen::MatrixXd analysis_matrix(int n) {
  int m = n - 1;
  Eigen::MatrixXd c(n, n);
  for (int k = 0; k <= m; ++k)
    for (int j = 0; j <= m; ++j) {
      double w = (j == 0 || j == m) ? 0.5 : 1.0;
      c(k, j) = 2.0 / m * w * std::cos(k * j * std::numbers::pi / m);
    }
  for (int j = 0; j <= m; ++j) {
    c(0, j) *= 0.5;
    c(m, j) *= 0.5;
  }
  return c;
}

// nodal Mayer matrix on [0,2]: row i of B holds (L That_k)(x_i)
Eigen::MatrixXcd mayer_collocation(cplx s, int n, const std::vector<double>& nodes, double lo,
                                   double hi, int n_direct, int k_tail) {
  auto taylor = cheb_taylor_at_zero(lo, hi, n, k_tail + 1);
  Eigen::MatrixXcd b(n, n);
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) {
    double x = nodes[i];
    for (int k = 0; k < n; ++k) b(i, k) = 0.0;
    for (int m = 1; m <= n_direct; ++m) {
      double base = x + m;
      cplx w = std::exp(-2.0 * s * std::log(base));
      double t = (2.0 / base - lo - hi) / (hi - lo);
      vals[0] = 1.0;
      vals[1] = t;
      for (int k = 2; k < n; ++k) vals[k] = 2.0 * t * vals[k - 1] - vals[k - 2];
      for (int k = 0; k < n; ++k) b(i, k) += w * vals[k];
    }
    std::vector<cplx> zs(k_tail + 1);
    for (int m = 0; m <= k_tail; ++m) zs[m] = hurwitz_zeta(2.0 * s + double(m), x + n_direct + 1.0);
    for (int k = 0; k < n; ++k) {
      cplx acc = 0.0;
      for (int m = 0; m <= k_tail; ++m) acc += taylor[k][m] * zs[m];
      b(i, k) += acc;
    }
  }
  return b * analysis_matrix(n);
}

std::vector<std::vector<BranchFamily>> families(OperatorKind kind, bool kcomp_uses_g2) {
  switch (kind) {
    case OperatorKind::Mayer:
      return {{{0, 1, +1, +1}}};
    case OperatorKind::Nicf:
      return {{{0, 3, +1, -1}, {1, 2, -1, +1}}, {{0, 2, +1, -1}, {1, 3, -1, +1}}};
    default: {
      int src = 0;
      std::vector<std::vector<BranchFamily>> f(2);
      f[0] = {{0, 3, +1, -1, true}};
      f[1] = {{kcomp_uses_g2 ? 1 : 0, 3, +1, -1, true}};
      (void)src;
      return f;
    }
  }
}

// column function of basis phi_k around c_src, evaluated at complex z
cplx branch_column_value(const BranchFamily& bf, int k, cplx z, cplx s, double c_src, double R,
                         int n_direct) {
  auto phi = [&](cplx w) { return std::pow((w - c_src) / R, double(k)); };
  cplx acc = 0.0;
  int n_hi = bf.single ? bf.n0 + 1 : bf.n0 + n_direct;
  for (int n = bf.n0; n < n_hi; ++n) {
    cplx base = bf.sigma_b > 0 ? z + double(n) : double(n) - z;
    acc += std::exp(-2.0 * s * std::log(base)) * phi(double(bf.sigma_a) / base);
  }
  if (bf.single) return acc;
  // tail: phi_k(sigma_a/base) = (-c/R)^k sum_p binom(k,p) (-sigma_a/c)^p base^{-p}
  cplx shift = bf.sigma_b > 0 ? z + double(n_hi) : double(n_hi) - z;
  cplx pref = std::pow(-c_src / R, double(k));
  double binom = 1.0;
  cplx ratio_pow = 1.0;
  cplx ratio = -double(bf.sigma_a) / c_src;
  for (int p = 0; p <= k; ++p) {
    acc += pref * binom * ratio_pow * hurwitz_zeta(2.0 * s + double(p), shift);
    binom *= double(k - p) / double(p + 1);
    ratio_pow *= ratio;
  }
  return acc;
}

}  // namespace

OperatorMatrix build_operator(OperatorKind kind, SpectralParam s, TruncationParams tp,
                              bool kcomp_uses_g2) {
  if (s.s == cplx(0.5, 0.0)) throw PoleError("build_operator: pole at s = 1/2");
  OperatorMatrix op;
  op.kind = kind;
  op.s = s;
  op.trunc = tp;
  op.kcomp_uses_g2 = kcomp_uses_g2;
  DiskGeometry geo = geometry(kind);
  op.centers = geo.centers;
  op.radius = geo.radius;

  int n = tp.n;
  if (kind == OperatorKind::Mayer) {
    op.nodal = true;
    double lo = op.centers[0] - op.radius, hi = op.centers[0] + op.radius;
    op.nodes = cheb_nodes(lo, hi, n);
    op.mat = mayer_collocation(s.s, n, op.nodes, lo, hi, std::max(tp.n_direct, 32), tp.k_tail + 2);
    return op;
  }

  op.nodes = cheb_nodes(geo.centers[0] - 0.7 * geo.radius, geo.centers[0] + 0.7 * geo.radius, tp.n);
  int ncomp = int(geo.centers.size());
  int quad = 128;
  while (quad < 2 * n + 16) quad *= 2;
  op.mat = Eigen::MatrixXcd::Zero(ncomp * n, ncomp * n);
  auto fam = families(kind, kcomp_uses_g2);

  std::vector<cplx> ring(quad);
  for (int m = 0; m < quad; ++m)
    ring[m] = geo.quad_radius * std::exp(cplx(0.0, 2.0 * std::numbers::pi * m / quad));

  std::vector<cplx> vals(quad);
  for (int dst = 0; dst < ncomp; ++dst) {
    for (const BranchFamily& bf : fam[dst]) {
      double c_src = geo.centers[bf.src];
      for (int k = 0; k < n; ++k) {
        for (int m = 0; m < quad; ++m)
          vals[m] = branch_column_value(bf, k, geo.centers[dst] + ring[m], s.s, c_src, geo.radius,
                                        tp.n_direct);
        // Taylor projection onto ((z - c_dst)/R)^j
        for (int j = 0; j < n; ++j) {
          cplx cj = 0.0;
          for (int m = 0; m < quad; ++m)
            cj += vals[m] * std::exp(cplx(0.0, -2.0 * std::numbers::pi * j * m / quad));
          cj /= double(quad) * std::pow(geo.quad_radius / geo.radius, double(j));
          op.mat(dst * n + j, bf.src * n + k) += cj;
        }
      }
    }
  }
  return op;
}

double OperatorMatrix::entry_decay() const {
  int n = trunc.n;
  Eigen::MatrixXcd modes = mat;
  if (nodal) {
    // transform value space to Chebyshev-mode space
    Eigen::MatrixXd c = analysis_matrix(n);
    Eigen::MatrixXd v(n, n);
    double lo = centers[0] - radius, hi = centers[0] + radius;
    std::vector<double> nd = cheb_nodes(lo, hi, n);
    for (int i = 0; i < n; ++i) {
      double t = (2.0 * nd[i] - lo - hi) / (hi - lo);
      double tm2 = 1.0, tm1 = t;
      v(i, 0) = 1.0;
      v(i, 1) = t;
      for (int k = 2; k < n; ++k) {
        double tk = 2.0 * t * tm1 - tm2;
        v(i, k) = tk;
        tm2 = tm1;
        tm1 = tk;
      }
    }
    modes = c * mat * v;
  }
  double mx = modes.cwiseAbs().maxCoeff();
  double tail = 0.0;
  int d = std::max(4, n / 8);
  for (int cb = 0; cb < components(); ++cb)
    for (int db = 0; db < components(); ++db)
      for (int j = n - d; j < n; ++j)
        for (int k = n - d; k < n; ++k)
          tail = std::max(tail, std::abs(modes(cb * n + j, db * n + k)));
  return tail / std::max(mx, 1e-300);
}

cplx apply_mayer_direct(const std::function<cplx(double)>& f, const std::vector<cplx>& f_taylor,
                        SpectralParam s, double z, int n_direct, int k_tail) {
  return regularized_shift_sum(f, f_taylor, +1, s, z, 1, n_direct, k_tail);
}

std::pair<cplx, cplx> apply_nicf_direct(const std::function<cplx(double)>& f1,
                                        const std::vector<cplx>& f1_taylor,
                                        const std::function<cplx(double)>& f2,
                                        const std::vector<cplx>& f2_taylor, SpectralParam s,
                                        double z, int n_direct, int k_tail) {
  auto block = [&](const std::function<cplx(double)>& f, const std::vector<cplx>& tay, int n0,
                   int sigma, double x) {
    return regularized_shift_sum(f, tay, sigma, s, x, n0, n_direct, k_tail);
  };
  // the f2 sums run over (n - z)^{-2s} f2(1/(n-z)): substitute x = -z
  cplx c1 = block(f1, f1_taylor, 3, -1, z) + block(f2, f2_taylor, 2, +1, -z);
  cplx c2 = block(f1, f1_taylor, 2, -1, z) + block(f2, f2_taylor, 3, +1, -z);
  return {c1, c2};
}

cplx apply_interval_map_transfer(const std::function<cplx(double)>& f, SpectralParam s, double x,
                                 int branches) {
  // T_s f(x) = sum over inverse branches y of f3 with weight |(f3^{-1})'(x)|^s
  cplx acc = 0.0;
  for (int n = -branches; n <= branches; ++n) {
    double base = x + n;
    if (std::abs(base) < 2.0) continue;  // y = -1/(x+n) must land in [-1/2,1/2]
    double y = -1.0 / base;
    if (y < -0.5 || y > 0.5) continue;
    if (std::abs(nicf_map(y) - x) > 1e-9) continue;  // floor-exact admissibility
    acc += pow_sq(cplx(base, 0.0), s.s) * f(y);
  }
  return acc;
}

std::vector<EigenPair> eigenpairs(const OperatorMatrix& op) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(op.mat, true);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigenpairs: solver failed");
  int n = int(op.mat.rows());
  std::vector<EigenPair> out(n);
  for (int i = 0; i < n; ++i) {
    out[i].lambda = es.eigenvalues()(i);
    out[i].vec = es.eigenvectors().col(i);
    int imax = 0;
    double vmax = 0.0;
    for (int j = 0; j < n; ++j)
      if (std::abs(out[i].vec(j)) > vmax) {
        vmax = std::abs(out[i].vec(j));
        imax = j;
      }
    if (vmax > 0.0) out[i].vec /= out[i].vec(imax);
  }
  std::sort(out.begin(), out.end(), [](const EigenPair& a, const EigenPair& b) {
    return std::abs(a.lambda) > std::abs(b.lambda);
  });
  for (const EigenPair& p : out) {
    if (std::abs(p.lambda) < 1e-4) break;
    double resid = (op.mat * p.vec - p.lambda * p.vec).cwiseAbs().maxCoeff();
    if (resid > 1e-8 * std::max(1.0, std::abs(p.lambda)))
      throw std::runtime_error("eigenpairs: residual check failed");
  }
  return out;
}

AnalyticFn eigenfunction(const OperatorMatrix& op, const EigenPair& pair, int component) {
  int n = op.trunc.n;
  auto iv = op.comp_interval(component);
  int fit_n = std::max(op.trunc.n + 16, 48);
  int nd = std::max(op.trunc.n_direct, 40);
  int kt = op.trunc.k_tail;

  if (op.kind == OperatorKind::Mayer) {
    // nodal eigenvector -> interpolant on [0,2]; two operator applications
    // extend it to [-0.49, 2.49] at interior accuracy
    double lo = op.centers[0] - op.radius, hi = op.centers[0] + op.radius;
    AnalyticFn p0;
    p0.chart = Chart::Identity;
    p0.lo = lo;
    p0.hi = hi;
    p0.s = op.s;
    {
      std::vector<cplx> nodal(n);
      for (int i = 0; i < n; ++i) nodal[i] = pair.vec(i);
      p0.coeffs = cheb_coeffs(nodal);
    }
    auto taylor_at_zero = [&](const AnalyticFn& f) {
      auto basis = cheb_taylor_at_zero(f.lo, f.hi, int(f.coeffs.size()), kt + 1);
      std::vector<cplx> t(kt + 1, 0.0);
      for (std::size_t k = 0; k < f.coeffs.size(); ++k)
        for (int m = 0; m <= kt; ++m) t[m] += f.coeffs[k] * basis[k][m];
      return t;
    };
    std::vector<cplx> t0 = taylor_at_zero(p0);
    AnalyticFn first = AnalyticFn::fit(
        [&](cplx z) {
          return apply_mayer_direct([&](double x) { return p0.eval(x); }, t0, op.s, z.real(), nd,
                                    kt) /
                 pair.lambda;
        },
        iv.first, iv.second, Chart::Identity, op.s, std::max(fit_n, 64));
    std::vector<cplx> t1 = taylor_at_zero(first);
    return AnalyticFn::fit(
        [&](cplx z) {
          return apply_mayer_direct([&](double x) { return first.eval(x); }, t1, op.s, z.real(),
                                    nd, kt) /
                 pair.lambda;
        },
        iv.first, iv.second, Chart::Identity, op.s, fit_n);
  }

  auto poly = [&](int comp) {
    return [&, comp](cplx z) {
      cplx w = (z - op.centers[comp]) / op.radius;
      cplx acc = 0.0, pw = 1.0;
      for (int k = 0; k < n; ++k) {
        acc += pair.vec(comp * n + k) * pw;
        pw *= w;
      }
      return acc;
    };
  };
  if (op.kind == OperatorKind::Kcomp)
    return AnalyticFn::fit(poly(component), iv.first, iv.second, Chart::Identity, op.s, fit_n);

  // Nicf: one application reaches the extended component intervals
  auto p1 = poly(0);
  auto p2 = poly(1);
  std::vector<cplx> t1 = taylor_by_circle(p1, 0.3, kt + 1);
  std::vector<cplx> t2 = taylor_by_circle(p2, 0.3, kt + 1);
  auto apply = [&](cplx z) {
    auto [c1, c2] = apply_nicf_direct([&](double x) { return p1(x); }, t1,
                                      [&](double x) { return p2(x); }, t2, op.s, z.real(), nd, kt);
    return (component == 0 ? c1 : c2) / pair.lambda;
  };
  return AnalyticFn::fit(apply, iv.first, iv.second, Chart::Identity, op.s, fit_n);
}

cplx fredholm_det(const OperatorMatrix& op) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(op.mat.rows(), op.mat.cols()) - op.mat;
  return a.partialPivLu().determinant();
}

std::vector<EigenPair> kernel_basis(const OperatorMatrix& op, cplx target, double tol) {
  std::vector<EigenPair> out;
  for (const EigenPair& p : eigenpairs(op))
    if (std::abs(p.lambda - target) < tol) out.push_back(p);
  return out;
}

}  // namespace mtrans
