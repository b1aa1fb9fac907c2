#pragma once

#include <Eigen/Dense>

#include "mtrans/averages.hpp"
#include "mtrans/funcrep.hpp"

namespace mtrans {

// --- nearest integer continued fraction dynamics --------------------------

// floor with the convention n <= x < n+1 for x > 0 and n < x <= n+1 for x <= 0
long long nicf_floor(double x);

// interval map f3(x) = Sx - floor(Sx + 1/2) on [-1/2, 1/2]
double nicf_map(double x, bool standard_floor = false);

// first k digits of the nearest integer continued fraction of x
std::vector<long long> nicf_digits(double x, int k);

// [0; a_1, a_2, ...] = -1/(a_1 + -1/(a_2 + ...))
double nicf_reconstruct(const std::vector<long long>& digits);

// digit admissibility: |a| >= 2, equal-sign 2s never adjacent
bool nicf_admissible(const std::vector<long long>& digits);

// --- transfer operators as collocation matrices ---------------------------

enum class OperatorKind { Mayer, Nicf, Kcomp };

struct TruncationParams {
  int n = 40;
  int n_direct = 24;
  int k_tail = 28;
};

struct OperatorMatrix {
  OperatorKind kind = OperatorKind::Mayer;
  SpectralParam s;
  // Mayer: nodal collocation matrix on the invariant interval [0,2]
  // (branch images [1/3,1] lie strictly inside).  Nicf/Kcomp: Taylor matrix
  // in the basis ((z - center_i)/radius)^k of the invariant disk pair.
  Eigen::MatrixXcd mat;
  bool nodal = false;
  std::vector<double> centers;
  double radius = 1.0;
  std::vector<double> nodes;  // evaluation grid on a component's real interval
  TruncationParams trunc;
  bool kcomp_uses_g2 = false;  // variant with g2|ST^3 in the second slot

  int components() const { return kind == OperatorKind::Mayer ? 1 : 2; }
  // real interval on which eigenfunctions are delivered (one operator
  // application pushes the evaluation into the contracted interior, so the
  // interval exceeds the disk diameter for the Mayer kind)
  std::pair<double, double> comp_interval(int i) const {
    if (kind == OperatorKind::Mayer) return {-0.49, 2.49};
    if (kind == OperatorKind::Nicf) return i == 0 ? std::pair{-0.66, 0.35} : std::pair{-0.35, 0.66};
    return {centers[i] - 0.7 * radius, centers[i] + 0.7 * radius};
  }
  // largest corner-block entry relative to the overall maximum; resolved
  // operators decay geometrically in both mode indices
  double entry_decay() const;
};

// The operators on their holomorphy domains: Mayer on the disk |z-1| <= 3/2,
// the pair operators on the invariant disk pair |z -+ 1/4| <= 0.45 (every
// inverse branch maps the pair strictly inside itself).  Matrix columns are
// Taylor-projected by circle quadrature with Hurwitz-zeta tails.
OperatorMatrix build_operator(OperatorKind kind, SpectralParam s, TruncationParams tp = {},
                              bool kcomp_uses_g2 = false);

// Direct (matrix-free) application at one point; the independent code path.
cplx apply_mayer_direct(const std::function<cplx(double)>& f, const std::vector<cplx>& f_taylor,
                        SpectralParam s, double z, int n_direct = 24, int k_tail = 28);
std::pair<cplx, cplx> apply_nicf_direct(const std::function<cplx(double)>& f1,
                                        const std::vector<cplx>& f1_taylor,
                                        const std::function<cplx(double)>& f2,
                                        const std::vector<cplx>& f2_taylor, SpectralParam s,
                                        double z, int n_direct = 24, int k_tail = 28);

// transfer operator of f3 by summation over inverse branches
cplx apply_interval_map_transfer(const std::function<cplx(double)>& f, SpectralParam s, double x,
                                 int branches = 400);

struct EigenPair {
  cplx lambda;
  Eigen::VectorXcd vec;  // nodal values, unit sup-norm
};

// eigenpairs sorted by |lambda| descending, residual-checked
std::vector<EigenPair> eigenpairs(const OperatorMatrix& op);

// eigenvector as an interpolant on comp_interval; Nicf pairs give (g1, g2).
// The Taylor polynomial is smoothed by applying the operator directly
// (divided by lambda), which removes the disk-rim truncation error.
AnalyticFn eigenfunction(const OperatorMatrix& op, const EigenPair& pair, int component = 0);

cplx fredholm_det(const OperatorMatrix& op);  // det(I - M) via LU

std::vector<EigenPair> kernel_basis(const OperatorMatrix& op, cplx target, double tol);

}  // namespace mtrans
