#ifndef PBALL_GREEN_HPP
#define PBALL_GREEN_HPP

// Regular part H of the Green's function for Delta^2 with hinged boundary
// conditions (G = Delta G = 0) on the unit ball and on annuli eps < r < 1.
//
// H(x, .) is the biharmonic field matching |x-y|^-(N-4) and its Laplacian
// -2(N-4)|x-y|^-(N-2) on the boundary, so G = |x-y|^-(N-4) - H carries the
// full singularity. On these radially symmetric domains every spherical
// harmonic mode decouples: the boundary data are projected onto Gegenbauer
// polynomials and each mode is matched by the exact radial biharmonic basis
// { s^l, s^(l+2), s^(2-N-l), s^(4-N-l) } (the first two only, on the ball).

#include <cstddef>
#include <vector>

#include "pball/bubble.hpp"
#include "pball/core.hpp"

namespace pball {

/// Pierced-ball geometry: inner hole radius (0 = solid ball) and outer radius.
struct AnnulusDomain {
    Dimension dim;
    double inner = 0.0;
    double outer = 1.0;

    AnnulusDomain(Dimension d, double inner_, double outer_ = 1.0)
        : dim(d), inner(inner_), outer(outer_) {
        if (inner < 0.0 || inner >= outer)
            throw std::invalid_argument("AnnulusDomain: need 0 <= inner < outer");
    }
    bool contains(double r) const { return r > inner && r < outer; }
};

// Closed forms on the unit ball (x on the axis through the origin):
//   H(0, y) = (2N-4)/N - ((N-4)/N) |y|^2,   H(0,0) = 2(N-2)/N.
double regular_part_ball_center(const Dimension& dim);
double regular_part_ball_axis(const Dimension& dim, double s);

//   G(0, y) = |y|^(4-N) - H(0, y)  and its Laplacian in y.
double green_ball_center(const Dimension& dim, double s);
double green_ball_center_laplacian(const Dimension& dim, double s);

/// Normalization recovered from the flux of Delta G(0,.) through a sphere of
/// the given radius (finite-difference radial derivative). Recovers
/// 2(N-2)(N-4) meas(S^(N-1)) for the unit-ball closed form.
double measure_normalization_flux(const Dimension& dim, double radius = 0.3, double step = 1e-4);

/// Spherical-harmonic solver for H on a ball or annulus with outer radius 1.
class RegularPart {
  public:
    explicit RegularPart(AnnulusDomain dom, std::size_t max_degree = 32);

    /// H(x, y); both points must lie in the open domain.
    double eval(const Point& x, const Point& y) const;

    /// Same, with |x| = r, |y| = s and cos of the angle between x and y.
    double eval_radial(double r, double s, double cos_angle) const;

    /// |eval at max_degree| minus |eval truncated at max_degree/2|: a tail
    /// estimate for the mode series at the given configuration.
    double tail_estimate(double r, double s, double cos_angle) const;

    std::size_t max_degree() const { return max_degree_; }
    const AnnulusDomain& domain() const { return dom_; }

    /// delta-coefficient carried by G = |x-y|^-(N-4) - H; fixed by the
    /// distributional identity for the kernel, independent of the domain.
    double normalization() const { return dom_.dim.biharmonic_normalization(); }

  private:
    struct ModeSolution {
        double A = 0.0, B = 0.0, C = 0.0, D = 0.0; // vs basis s^l, s^(l+2), (eps/s)^(l+N-2), (eps/s)^(l+N-2) s^2
    };
    std::vector<ModeSolution> solve_modes(double r) const;
    double eval_series(double r, double s, double cos_angle, std::size_t degree) const;

    AnnulusDomain dom_;
    std::size_t max_degree_;
    std::size_t n_theta_;
    std::vector<double> theta_nodes_, theta_weights_; // Gauss rule mapped to [0, pi]
};

/// G(x,y) = |x-y|^-(N-4) - H(x,y) on the given domain. Throws if x == y or
/// either point is outside.
double green_navier(const AnnulusDomain& dom, const Point& x, const Point& y,
                    std::size_t max_degree = 32);

} // namespace pball

#endif // PBALL_GREEN_HPP
