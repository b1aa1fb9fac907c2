#pragma once

#include <optional>

#include "mtrans/averages.hpp"
#include "mtrans/funcrep.hpp"

namespace mtrans {

enum class CocycleFlavor { Plain, Parabolic, Fib };

// Cocycle of PSL(2,Z) with V^fs values, stored on generators.  Values on
// arbitrary words follow from psi_{gamma delta} = psi_gamma|delta + psi_delta.
// Parabolic flavor: psi_T = 0 when absent.  Fib flavor stores psi_{T^-1 S}.
class Cocycle {
 public:
  CocycleFlavor flavor = CocycleFlavor::Plain;
  SpectralParam s;
  PiecewiseFn psi_S;
  std::optional<PiecewiseFn> psi_T;
  std::optional<PiecewiseFn> psi_TinvS;

  // pointwise value of psi_w at x
  cplx value_at(const Word& w, double x) const;
  // piecewise value of psi_w
  PiecewiseFn value(const Word& w, const BuildOptions& opt = {}) const;

  struct Term {
    cplx coeff;
    const PiecewiseFn* fn;
    GroupElem g;
  };
  std::vector<Term> terms(const Word& w) const;
};

struct RelationReport {
  double rel_S = 0.0;      // sup |psi_S|(1+S)|
  double rel_TinvS = 0.0;  // sup |psi_{T^-1S}|(1 + T^-1S + ST)|
  double rel_par = 0.0;    // parabolic flavor: sup |psi_S - psi_S|(T+T')|
  double scale = 0.0;
};
RelationReport verify_generator_relations(const Cocycle& c, int samples = 60);

// The cocycle attached to a solution of the four term equation:
//   h = g|(1+ST^2) on (-phi, phi),  k = g|T^-1 + h|STS on (-phi, 1/phi),
//   c_{-phi,1/phi} = {k; -k|S},     c_{-phi,phi} = {h; -h|(T^-1 S + ST)},
// generator cocycle psi_S = -c_{-phi,1/phi}, psi_{T^-1S} = -c_{-phi,phi}.
struct ThetaResult {
  Cocycle cocycle;
  PiecewiseFn h;
  PiecewiseFn k;
  PiecewiseFn c_phi_inv;    // c_{-phi, 1/phi}
  PiecewiseFn c_phi;        // c_{-phi, phi}
  PiecewiseFn reassembled;  // c_{-phi^2, phi}, analytic across -phi and -1/phi^2
  double reassembly_residual = 0.0;
};
ThetaResult theta(const PiecewiseFn& g, double tol = 1e-7, const BuildOptions& opt = {});

// Normalization of an analytic-valued cocycle to psi_T = 0 via
// psi_gamma = tpsi_gamma - (tpsi_T|Av+)|(1 - gamma); requires the parabolicity
// certificate tpsi_T|Av+ = tpsi_T|Av-.
Cocycle parabolic_normalize(const Cocycle& tpsi, double certificate_tol = 1e-7,
                            const BuildOptions& opt = {});

// The periodic obstruction
//   P = tpsi_TST|(S - T^-1S) + tpsi_T|(T^-1S + 1) - tpsi_T|Av+ - tpsi_TST|S Av-;
// P == 0 iff the class comes from a 1-eigenfunction of the pair operator.
struct Obstruction {
  AnalyticFn p;              // on a period-covering interval
  double periodicity = 0.0;  // sup |P - P|T|
  double sup = 0.0;          // sup |P| over one period
};
Obstruction parabolic_obstruction(const Cocycle& tpsi);

}  // namespace mtrans
