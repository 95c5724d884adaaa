#ifndef PBALL_QUADRATURE_HPP
#define PBALL_QUADRATURE_HPP

// High-accuracy radial quadrature and the integral identities built on it.
//
// All integrals over R^N in this project reduce to 1-D (or 2-D, for shifted
// singular kernels) quadratures in the radius. Panels carry fixed-order
// Gauss-Legendre rules; the unbounded tail is mapped algebraically by
// r = a + s/(1-s). Panel sums are accumulated in a fixed order so results are
// bitwise reproducible for any thread count; integrate_panels_serial is the
// plain-loop reference the parallel kernel is tested against.

#include <cstddef>
#include <functional>
#include <vector>

#include "pball/bubble.hpp"
#include "pball/core.hpp"

namespace pball {

namespace threading {
/// Cap OpenMP parallelism (0 = library default). k == 1 forces serial loops.
void set_max_threads(int k);
bool parallel_enabled();
} // namespace threading

struct GaussRule {
    std::vector<double> nodes;   // on (-1, 1)
    std::vector<double> weights;
};

/// Gauss-Legendre rule with n points (cached).
const GaussRule& gauss_legendre(std::size_t n);

struct Panel {
    double lo = 0.0;
    double hi = 1.0;
    bool tail = false; // integration variable is s with r = tail_start + s/(1-s)
    double tail_start = 0.0;
};

/// Sum of per-panel Gauss quadratures, parallel over panels, summed in panel
/// order (bitwise independent of the thread count).
double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<Panel>& panels, std::size_t points);

/// Serial reference implementation of the same sum.
double integrate_panels_serial(const std::function<double(double)>& f,
                               const std::vector<Panel>& panels, std::size_t points);

/// Panel layout for radial integrals over [0, inf).
struct QuadratureRule {
    std::size_t points_per_panel = 64;
    std::vector<double> breakpoints = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
    std::vector<double> tail_breaks = {0.0, 0.5, 0.8, 0.95, 1.0}; // in s

    QuadratureRule refined() const {
        QuadratureRule r = *this;
        r.points_per_panel = 2 * points_per_panel;
        return r;
    }
    std::vector<Panel> panels() const;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0; // |value - coarse rerun|, self-convergence
};

/// integral_0^inf f(r) dr with a self-convergence estimate (the rule is run
/// at its stated order and once refined; the refined value is reported).
QuadResult integrate_radial(const std::function<double(double)>& f, const QuadratureRule& rule);

// ---------------------------------------------------------------------------
// Constants of the reduced energy
//   aN = integral U^(2N/(N-4)),  bN = (3/4)(N-2) meas(S^(N-1)),
//   cN = (1/2) alpha_N integral U^((N+4)/(N-4)),
// plus the measured bi-Laplacian normalization kN (see identity below).
// ---------------------------------------------------------------------------

struct EnergyConstants {
    int n = 0;
    double aN = 0.0;
    double bN = 0.0;
    double cN = 0.0;
    double sphere_measure = 0.0;
    double kN = 0.0; // measured: R1(0) / U(0)
    QuadResult aN_quad, cN_quad, kN_quad;
};

EnergyConstants compute_energy_constants(const Dimension& dim, const QuadratureRule& rule = {});

// ---------------------------------------------------------------------------
// Representation identities for the entire bubble. With U = U_{1,0}:
//
//   R1(tau) = integral U^p(y) |y+tau|^-(N-4) dy = kN * U(tau)
//   R2(tau) = integral U^p(y) |y+tau|^-(N-2) dy = -(N-2) meas(S^(N-1)) DeltaU(tau)
//
// R1 fixes the bi-Laplacian kernel normalization kN empirically; R2 rests on
// the standard Laplace kernel constant. Shifted kernels are integrated by
// splitting at |y+tau| = 1/2: inside, spherical coordinates centered at -tau
// make the kernel a smooth radial weight; outside, bubble-centered
// coordinates with the polar integral cut exactly at the splitting sphere.
// ---------------------------------------------------------------------------

struct IdentityReport {
    double integral = 0.0;
    double reference = 0.0;
    double rel_residual = 0.0;
    double error_estimate = 0.0;
};

/// R1 against kN * U(tau). Pass the measured kN (or the analytic candidate).
IdentityReport representation_identity_biharmonic(const Dimension& dim, const Point& tau,
                                                  double kN, const QuadratureRule& rule = {});

/// R2 against -(N-2) meas(S^(N-1)) DeltaU(tau).
IdentityReport representation_identity_harmonic(const Dimension& dim, const Point& tau,
                                                const QuadratureRule& rule = {});

/// Measured kN = R1(0) / U(0).
QuadResult measure_biharmonic_normalization(const Dimension& dim, const QuadratureRule& rule = {});

/// integral of U^p(y) |y+tau|^(-a) over R^N (the workhorse behind R1/R2).
double shifted_kernel_integral(const Dimension& dim, double tau_norm, double a,
                               const QuadratureRule& rule);

} // namespace pball

#endif // PBALL_QUADRATURE_HPP
