#ifndef PBALL_NAVIER_HPP
#define PBALL_NAVIER_HPP

// Radial solvers on the annulus eps < r < 1 with hinged boundary data
// (u = Delta u = 0 at both ends):
//
//  * solve_linear_navier:  Delta^2 phi = rhs, split into two Dirichlet
//    Laplace solves -Delta psi = rhs, -Delta phi = psi (both M-matrices).
//  * solve_nonlinear:      Delta u = w, Delta w = (u_+)^p by damped Newton.
//    The iteration runs in the expanded variables v(y) = eps^(sigma(N-4)/2)
//    u(eps^sigma y), which keep every quantity O(1) uniformly in eps; the
//    reported residual is the sup norm of the expanded discrete system.
//  * continuation_in_eps:  marches a decreasing eps schedule, reusing each
//    converged solution (in expanded variables, on top of the re-predicted
//    projected bubble) as the next initial guess.
//
// Discretization: the grid is uniform in z = log r, where the radial
// Laplacian becomes (u_zz + (N-2) u_z) / r^2; standard second-order central
// stencils apply exactly.

#include <utility>
#include <vector>

#include "pball/core.hpp"
#include "pball/green.hpp"
#include "pball/grid.hpp"

namespace pball {

/// Dirichlet Laplace inverse on the grid: solves -Delta u = rhs, u = 0 at
/// both ends. Exposed for reuse by the projection and the Newton predictor.
RadialField solve_dirichlet_laplace(const Dimension& dim, const RadialField& rhs);

/// Delta^2 phi = rhs with phi = Delta phi = 0 at r = inner and r = outer.
/// The returned field carries Delta phi in .lap. Throws on grid/domain
/// mismatch or if the discrete residual exceeds 1e-10 relative.
RadialField solve_linear_navier(const Dimension& dim, const AnnulusDomain& dom,
                                const RadialField& rhs);

struct NewtonConfig {
    double tolerance = 1e-9;       // sup norm of the expanded discrete system
    int max_iterations = 60;
    int max_backtracks = 8;
    double trivial_threshold = 1e-6; // max |u| below this flags the zero solution
};

struct SolveReport {
    bool converged = false;
    bool trivial = false;
    bool positivity_violated = false;
    int newton_iterations = 0;
    double final_residual = 0.0;
    double eps = 0.0;
    double mu_estimate = 0.0;
    double d_estimate = 0.0; // mu_estimate / eps^sigma
    RadialField u; // physical solution, .lap filled
    RadialField w; // its Laplacian as a field

    explicit SolveReport(RadialGrid g) : u(g), w(std::move(g)) {}
};

/// Damped Newton for Delta u = w, Delta w = (u_+)^p from the given initial
/// guess (a physical field on a grid matching dom). Non-convergence is
/// reported in the flags, not thrown.
SolveReport solve_nonlinear(const Dimension& dim, const AnnulusDomain& dom,
                            const RadialField& init, const NewtonConfig& cfg = {});

/// Projected bubble PU_{mu,0}: the linear Navier solve with rhs U_{mu,0}^p.
RadialField projected_bubble(const Dimension& dim, const AnnulusDomain& dom,
                             const RadialGrid& grid, double mu);

/// Newton from the projected-bubble predictor. The projection sits below the
/// mountain-pass level for larger holes and plain Newton then falls into the
/// trivial well, so the predictor is tried at the amplitudes
/// {1, 2, 3, 4, 6, 8} x PU in order; the first converged positive solution
/// wins. Deterministic, and a no-op beyond the first rung once eps is small.
SolveReport solve_from_predictor(const Dimension& dim, const AnnulusDomain& dom,
                                 const RadialGrid& grid, double mu,
                                 const NewtonConfig& cfg = {});

struct ContinuationConfig {
    std::size_t intervals = 600;
    double d_start = 1.0; // predictor weight for the first eps
    NewtonConfig newton;
};

/// Solve along a strictly decreasing eps schedule (first entry <= 0.2).
/// Stops at the first failure; the failing report is included last.
std::vector<SolveReport> continuation_in_eps(const Dimension& dim,
                                             const std::vector<double>& eps_schedule,
                                             const ContinuationConfig& cfg);

/// Least-squares slope of log(y) against log(x).
std::pair<double, double> log_log_fit(const std::vector<double>& x, const std::vector<double>& y);

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double sigma = 0.0;              // exact exponent for the dimension
    double rms_log_residual = 0.0;
    std::vector<double> d_values;    // per-point mu / eps^sigma
};

/// Fit log mu against log eps; needs >= 4 positive pairs spanning a decade.
ScalingFit fit_scaling(const Dimension& dim,
                       const std::vector<std::pair<double, double>>& eps_mu);

} // namespace pball

#endif // PBALL_NAVIER_HPP
