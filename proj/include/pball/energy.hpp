#ifndef PBALL_ENERGY_HPP
#define PBALL_ENERGY_HPP

// The reduced energy
//
//   Psi(d, tau) = -bN DeltaU(tau) U(tau) d^-(N-2) + cN H(0,0) d^(N-4)
//
// (U the unit bubble), its critical point d*, and the discrete energy
//
//   I(v) = 1/2 int |Delta v|^2 - 1/(p+1) int (v_+)^(p+1)
//
// of radial fields. The hinged-plate energy of the solution family expands as
// (2/N) aN + eps^kappa Psi(d, tau) + o(eps^kappa); the leading constant
// carries the factor 2/N relative to aN = int U^(2N/(N-4)).

#include <vector>

#include "pball/core.hpp"
#include "pball/grid.hpp"
#include "pball/quadrature.hpp"

namespace pball {

struct PsiModel {
    Dimension dim;
    EnergyConstants constants;
    double h00 = 0.0; // regular part at the center of the unit ball

    PsiModel(Dimension d, EnergyConstants c, double h00_);
};

double psi_eval(const PsiModel& model, double d, const Point& tau);

/// Gradient (d-derivative first, then the tau components), in closed form.
std::vector<double> psi_gradient(const PsiModel& model, double d, const Point& tau);

struct CriticalPoint {
    double d_star = 0.0;
    Point tau_star;              // always the origin for this energy
    double gradient_residual = 0.0;
    double d_second_derivative = 0.0;   // > 0: minimum in d
    double tau_eigenvalue = 0.0;        // common eigenvalue of the tau block
    bool saddle = false;                // measured signature, not asserted
};

/// tau* = 0 and the (2N-6)-th root of (N-2) bN N(N-4) alpha^2 / ((N-4) cN H00),
/// polished by Newton on dPsi/dd; the Hessian signature is measured.
CriticalPoint psi_critical_point(const PsiModel& model);

/// Leading constant of the energy expansion: (2/N) aN.
double energy_leading_constant(const PsiModel& model);

/// Discrete I(field) over the field's own annulus (trapezoid in r against
/// the measure r^(N-1) meas(S^(N-1))). Requires the Laplacian companion.
double energy_eval(const Dimension& dim, const RadialField& field);

} // namespace pball

#endif // PBALL_ENERGY_HPP
