#ifndef PBALL_BUBBLE_HPP
#define PBALL_BUBBLE_HPP

// Closed forms around the bubble
//
//   U_{mu,xi}(x) = alpha_N ( mu / (mu^2 + |x-xi|^2) )^((N-4)/2),
//
// the unique (up to scaling and translation) positive entire solution of
// Delta^2 U = U^p at the critical exponent: its Laplacian, the kernel of the
// linearized operator Z_0..Z_N, the exterior correctors phi1/phi2/Upsilon that
// model the boundary layer at the hole, and the matching coefficients a1, a2.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pball/core.hpp"

namespace pball {

using Point = std::vector<double>;

inline double norm_sq(const Point& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

/// Concentration weight mu > 0 and center xi of a bubble.
struct BubbleParams {
    double mu = 1.0;
    Point xi;

    BubbleParams(double mu_, Point xi_) : mu(mu_), xi(std::move(xi_)) {
        if (mu <= 0.0) throw std::invalid_argument("BubbleParams: mu > 0 required");
    }
};

inline double dist_sq(const Point& x, const Point& xi) {
    if (x.size() != xi.size()) throw std::invalid_argument("point dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - xi[i];
        s += d * d;
    }
    return s;
}

/// U_{mu,xi} as a function of s = |x-xi| (the bubble is radial about xi).
inline double bubble_radial(const Dimension& dim, double mu, double s) {
    const double q = mu * mu + s * s;
    return dim.alpha() * stable_pow(mu / q, 0.5 * (dim.n() - 4));
}

inline double bubble_eval(const Dimension& dim, const BubbleParams& b, const Point& x) {
    return bubble_radial(dim, b.mu, std::sqrt(dist_sq(x, b.xi)));
}

/// Delta U_{mu,xi} as a function of s = |x-xi|:
///   -alpha_N (N-4) mu^((N-4)/2) (2 s^2 + N mu^2) / (mu^2 + s^2)^(N/2).
/// Strictly negative everywhere.
inline double bubble_laplacian_radial(const Dimension& dim, double mu, double s) {
    const int n = dim.n();
    const double q = mu * mu + s * s;
    return -dim.alpha() * (n - 4) * stable_pow(mu, 0.5 * (n - 4)) *
           (2.0 * s * s + n * mu * mu) / stable_pow(q, 0.5 * n);
}

inline double bubble_laplacian(const Dimension& dim, const BubbleParams& b, const Point& x) {
    return bubble_laplacian_radial(dim, b.mu, std::sqrt(dist_sq(x, b.xi)));
}

/// Kernel of the linearization Delta^2 - p U^(p-1) at the bubble:
///   Z_0 = dU/dmu,   Z_i = dU/dxi_i  (i = 1..N).
inline double kernel_field(const Dimension& dim, const BubbleParams& b, int i, const Point& x) {
    const int n = dim.n();
    if (i < 0 || i > n) throw std::invalid_argument("kernel_field: index must be in 0..N");
    const double s2 = dist_sq(x, b.xi);
    const double mu = b.mu;
    const double q = mu * mu + s2;
    const double qpow = stable_pow(q, 0.5 * (n - 2));
    if (i == 0) {
        return dim.alpha() * 0.5 * (n - 4) * stable_pow(mu, 0.5 * (n - 6)) * (s2 - mu * mu) / qpow;
    }
    return dim.alpha() * (n - 4) * stable_pow(mu, 0.5 * (n - 4)) * (x[i - 1] - b.xi[i - 1]) / qpow;
}

// ---------------------------------------------------------------------------
// Exterior correctors (defined for |x| >= 1)
//
// phi1 = |x|^-(N-4) and phi2 = |x|^-(N-2) are biharmonic outside the unit
// ball; Upsilon = phi1 + phi2 is the unique decaying solution with
// Upsilon = 2 and Delta Upsilon = -2(N-4) on the unit sphere.
// ---------------------------------------------------------------------------

enum class Corrector { Phi1, Phi2, Upsilon };

inline double corrector_radial(const Dimension& dim, Corrector which, double r) {
    if (r < 1.0) throw std::invalid_argument("corrector: |x| >= 1 required");
    const int n = dim.n();
    switch (which) {
        case Corrector::Phi1: return stable_pow(r, -(n - 4.0));
        case Corrector::Phi2: return stable_pow(r, -(n - 2.0));
        case Corrector::Upsilon: return stable_pow(r, -(n - 4.0)) + stable_pow(r, -(n - 2.0));
    }
    throw std::logic_error("corrector: unreachable");
}

inline double corrector_eval(const Dimension& dim, Corrector which, const Point& x) {
    return corrector_radial(dim, which, std::sqrt(norm_sq(x)));
}

/// Laplacians away from the origin: Delta phi1 = -2(N-4) |x|^-(N-2),
/// Delta phi2 = 0.
inline double corrector_laplacian_radial(const Dimension& dim, Corrector which, double r) {
    if (r < 1.0) throw std::invalid_argument("corrector: |x| >= 1 required");
    const int n = dim.n();
    switch (which) {
        case Corrector::Phi1:
        case Corrector::Upsilon: return -2.0 * (n - 4) * stable_pow(r, -(n - 2.0));
        case Corrector::Phi2: return 0.0;
    }
    throw std::logic_error("corrector: unreachable");
}

// ---------------------------------------------------------------------------
// Reduced parameters and the hole-matching coefficients
// ---------------------------------------------------------------------------

/// Rescaled bubble parameters (d, tau) at hole radius eps:
///   mu = d eps^sigma,  xi = mu tau,
/// with d in [delta, 1/delta] and |tau| <= 1/delta for a fixed delta > 0.
struct ReducedParams {
    double d;
    Point tau;
    double eps;
    double delta;

    ReducedParams(const Dimension& dim, double d_, Point tau_, double eps_, double delta_ = 0.05)
        : d(d_), tau(std::move(tau_)), eps(eps_), delta(delta_) {
        if (delta <= 0.0 || delta >= 1.0) throw std::invalid_argument("ReducedParams: 0 < delta < 1");
        if (d < delta || d > 1.0 / delta)
            throw std::invalid_argument("ReducedParams: d outside [delta, 1/delta]");
        if (std::sqrt(norm_sq(tau)) > 1.0 / delta)
            throw std::invalid_argument("ReducedParams: |tau| > 1/delta");
        if (eps <= 0.0) throw std::invalid_argument("ReducedParams: eps > 0 required");
        sigma_ = dim.sigma().value();
    }

    double mu() const { return d * stable_pow(eps, sigma_); }

    Point xi() const {
        Point out(tau.size());
        const double m = mu();
        for (std::size_t i = 0; i < tau.size(); ++i) out[i] = m * tau[i];
        return out;
    }

  private:
    double sigma_;
};

/// Coefficients of the boundary-layer correctors in the projection expansion:
///   a1 = -Delta U(tau) / (2(N-4)) * eps^2 / mu^(N/2),
///   a2 =  U(tau) / mu^((N-4)/2) + Delta U(tau) / (2(N-4)) * eps^2 / mu^(N/2),
/// with U, Delta U the unit bubble (mu = 1, xi = 0) evaluated at tau.
struct HoleCoefficients {
    double a1 = 0.0;
    double a2 = 0.0;
};

inline HoleCoefficients hole_coefficients(const Dimension& dim, const ReducedParams& rp) {
    const int n = dim.n();
    const double t = std::sqrt(norm_sq(rp.tau));
    const double u = bubble_radial(dim, 1.0, t);
    const double lap = bubble_laplacian_radial(dim, 1.0, t);
    const double mu = rp.mu();
    const double ratio = rp.eps * rp.eps / stable_pow(mu, 0.5 * n);
    HoleCoefficients c;
    c.a1 = -lap / (2.0 * (n - 4)) * ratio;
    c.a2 = u / stable_pow(mu, 0.5 * (n - 4)) + lap / (2.0 * (n - 4)) * ratio;
    return c;
}

/// Same coefficients written out explicitly in (d, tau, eps); kept as an
/// independent algebraic route for cross-checks.
inline HoleCoefficients hole_coefficients_explicit(const Dimension& dim, const ReducedParams& rp) {
    const int n = dim.n();
    const double alpha = dim.alpha();
    const double t2 = norm_sq(rp.tau);
    const double mu = rp.mu();
    HoleCoefficients c;
    c.a1 = 0.5 * alpha * rp.eps * rp.eps * (2.0 * t2 + n) /
           (stable_pow(mu, 0.5 * n) * stable_pow(1.0 + t2, 0.5 * n));
    c.a2 = alpha / (stable_pow(mu, 0.5 * (n - 4)) * stable_pow(1.0 + t2, 0.5 * (n - 4))) - c.a1;
    return c;
}

} // namespace pball

#endif // PBALL_BUBBLE_HPP
