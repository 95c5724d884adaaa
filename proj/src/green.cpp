#include "pball/green.hpp"

#include <cmath>
#include <stdexcept>

#include "pball/quadrature.hpp"

namespace pball {

double regular_part_ball_center(const Dimension& dim) {
    return 2.0 * (dim.n() - 2) / static_cast<double>(dim.n());
}

double regular_part_ball_axis(const Dimension& dim, double s) {
    const int n = dim.n();
    return (2.0 * n - 4.0) / n - (n - 4.0) / n * s * s;
}

double green_ball_center(const Dimension& dim, double s) {
    if (s <= 0.0 || s >= 1.0) throw std::invalid_argument("green_ball_center: 0 < |y| < 1");
    return stable_pow(s, 4.0 - dim.n()) - regular_part_ball_axis(dim, s);
}

double green_ball_center_laplacian(const Dimension& dim, double s) {
    if (s <= 0.0 || s >= 1.0) throw std::invalid_argument("green_ball_center_laplacian: 0 < |y| < 1");
    const int n = dim.n();
    // Delta |y|^(4-N) = -2(N-4)|y|^(2-N);  Delta of the quadratic part is 2(N-4).
    return -2.0 * (n - 4) * stable_pow(s, 2.0 - n) + 2.0 * (n - 4);
}

double measure_normalization_flux(const Dimension& dim, double radius, double step) {
    if (radius - step <= 0.0 || radius + step >= 1.0)
        throw std::invalid_argument("measure_normalization_flux: sphere not inside the ball");
    const double deriv = (green_ball_center_laplacian(dim, radius + step) -
                          green_ball_center_laplacian(dim, radius - step)) /
                         (2.0 * step);
    return dim.sphere_measure() * stable_pow(radius, dim.n() - 1.0) * deriv;
}

// ---------------------------------------------------------------------------
// Mode solver
// ---------------------------------------------------------------------------

namespace {

/// Gegenbauer C_l^nu(t) for l = 0..lmax via the three-term recurrence.
void gegenbauer_column(double nu, double t, std::size_t lmax, std::vector<double>& out) {
    out.resize(lmax + 1);
    out[0] = 1.0;
    if (lmax == 0) return;
    out[1] = 2.0 * nu * t;
    for (std::size_t l = 2; l <= lmax; ++l) {
        const double ld = static_cast<double>(l);
        out[l] = (2.0 * t * (ld + nu - 1.0) * out[l - 1] - (ld + 2.0 * nu - 2.0) * out[l - 2]) / ld;
    }
}

} // namespace

RegularPart::RegularPart(AnnulusDomain dom, std::size_t max_degree)
    : dom_(std::move(dom)), max_degree_(max_degree) {
    if (dom_.outer != 1.0)
        throw std::invalid_argument("RegularPart: outer radius is fixed to 1");
    n_theta_ = std::max<std::size_t>(128, 4 * (max_degree_ + 1));
    const GaussRule& g = gauss_legendre(n_theta_);
    theta_nodes_.resize(n_theta_);
    theta_weights_.resize(n_theta_);
    for (std::size_t k = 0; k < n_theta_; ++k) {
        theta_nodes_[k] = 0.5 * M_PI * (1.0 + g.nodes[k]);
        theta_weights_[k] = 0.5 * M_PI * g.weights[k];
    }
}

std::vector<RegularPart::ModeSolution> RegularPart::solve_modes(double r) const {
    const int n = dom_.dim.n();
    const double nu = 0.5 * (n - 2);
    const double eps = dom_.inner;
    const std::size_t lmax = max_degree_;

    // Project the boundary data of H(x,.) onto Gegenbauer modes on each
    // boundary sphere: value data (r^2 + s_b^2 - 2 r s_b t)^(-(N-4)/2) and
    // Laplacian data -2(N-4)(...)^(-(N-2)/2).
    std::vector<double> c1_out(lmax + 1, 0.0), c2_out(lmax + 1, 0.0);
    std::vector<double> c1_in(lmax + 1, 0.0), c2_in(lmax + 1, 0.0);
    std::vector<double> norm(lmax + 1, 0.0);

    std::vector<double> geg;
    for (std::size_t k = 0; k < n_theta_; ++k) {
        const double th = theta_nodes_[k];
        const double t = std::cos(th);
        const double w = theta_weights_[k] * std::pow(std::sin(th), n - 2);
        gegenbauer_column(nu, t, lmax, geg);

        const double q_out = r * r + 1.0 - 2.0 * r * t;
        const double v1_out = stable_pow(q_out, -0.5 * (n - 4.0));
        const double v2_out = -2.0 * (n - 4) * stable_pow(q_out, -0.5 * (n - 2.0));
        double v1_in = 0.0, v2_in = 0.0;
        if (eps > 0.0) {
            const double q_in = r * r + eps * eps - 2.0 * r * eps * t;
            v1_in = stable_pow(q_in, -0.5 * (n - 4.0));
            v2_in = -2.0 * (n - 4) * stable_pow(q_in, -0.5 * (n - 2.0));
        }
        for (std::size_t l = 0; l <= lmax; ++l) {
            const double gw = geg[l] * w;
            norm[l] += geg[l] * gw;
            c1_out[l] += v1_out * gw;
            c2_out[l] += v2_out * gw;
            c1_in[l] += v1_in * gw;
            c2_in[l] += v2_in * gw;
        }
    }
    for (std::size_t l = 0; l <= lmax; ++l) {
        c1_out[l] /= norm[l];
        c2_out[l] /= norm[l];
        c1_in[l] /= norm[l];
        c2_in[l] /= norm[l];
    }

    // Per mode: Delta(s^(l+2) Y_l) = 2(2l+N) s^l Y_l and
    // Delta(s^(4-N-l) Y_l) = -2(2l+N-4) s^(2-N-l) Y_l, so the Laplacian data
    // determine B and D, then the value data determine A and C. The interior
    // basis is scaled by eps^(l+N-2) so nothing large is ever formed.
    std::vector<ModeSolution> modes(lmax + 1);
    for (std::size_t l = 0; l <= lmax; ++l) {
        const double ld = static_cast<double>(l);
        const double cB = 2.0 * (2.0 * ld + n);
        const double cD = 2.0 * (2.0 * ld + n - 4.0);
        ModeSolution m;
        if (eps == 0.0) {
            m.B = c2_out[l] / cB;
            m.A = c1_out[l] - m.B;
        } else {
            const double e_l = stable_pow(eps, ld);
            const double e_ln2 = stable_pow(eps, ld + n - 2.0);
            const double denom = 1.0 - stable_pow(eps, 2.0 * ld + n - 2.0);
            m.B = (c2_out[l] - c2_in[l] * e_ln2) / (cB * denom);
            const double d_tilde = cB * m.B * e_l - c2_in[l]; // = cD * D
            m.D = d_tilde / cD;
            const double q1 = c1_out[l] - m.B - m.D * e_ln2;
            const double q2 = c1_in[l] - m.B * e_l * eps * eps - m.D * eps * eps;
            m.A = (q1 - q2 * e_ln2) / denom;
            m.C = q2 - m.A * e_l;
        }
        modes[l] = m;
    }
    return modes;
}

double RegularPart::eval_series(double r, double s, double cos_angle, std::size_t degree) const {
    const int n = dom_.dim.n();
    const double eps = dom_.inner;
    const auto modes = solve_modes(r);
    std::vector<double> geg;
    gegenbauer_column(0.5 * (n - 2), cos_angle, degree, geg);

    double acc = 0.0;
    for (std::size_t l = 0; l <= degree; ++l) {
        const double ld = static_cast<double>(l);
        const ModeSolution& m = modes[l];
        double radial = m.A * stable_pow(s, ld) + m.B * stable_pow(s, ld + 2.0);
        if (eps > 0.0) {
            const double decay = stable_pow(eps / s, ld + n - 2.0);
            radial += m.C * decay + m.D * decay * s * s;
        }
        acc += radial * geg[l];
    }
    return acc;
}

double RegularPart::eval_radial(double r, double s, double cos_angle) const {
    const bool r_ok = (dom_.inner == 0.0) ? (r >= 0.0 && r < 1.0) : dom_.contains(r);
    const bool s_ok = (dom_.inner == 0.0) ? (s >= 0.0 && s < 1.0) : dom_.contains(s);
    if (!r_ok || !s_ok) throw std::invalid_argument("RegularPart: point outside the open domain");
    if (cos_angle < -1.0 || cos_angle > 1.0)
        throw std::invalid_argument("RegularPart: cos_angle outside [-1, 1]");
    return eval_series(r, s, cos_angle, max_degree_);
}

double RegularPart::tail_estimate(double r, double s, double cos_angle) const {
    const double full = eval_series(r, s, cos_angle, max_degree_);
    const double half = eval_series(r, s, cos_angle, max_degree_ / 2);
    return std::fabs(full - half);
}

double RegularPart::eval(const Point& x, const Point& y) const {
    const double r = std::sqrt(norm_sq(x));
    const double s = std::sqrt(norm_sq(y));
    double ca = 0.0;
    if (r > 0.0 && s > 0.0) {
        double dot = 0.0;
        if (x.size() != y.size()) throw std::invalid_argument("RegularPart: dimension mismatch");
        for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
        ca = std::min(1.0, std::max(-1.0, dot / (r * s)));
    }
    return eval_radial(r, s, ca);
}

double green_navier(const AnnulusDomain& dom, const Point& x, const Point& y,
                    std::size_t max_degree) {
    const double d2 = dist_sq(x, y);
    if (d2 == 0.0) throw std::invalid_argument("green_navier: x == y is singular");
    RegularPart H(dom, max_degree);
    return stable_pow(std::sqrt(d2), 4.0 - dom.dim.n()) - H.eval(x, y);
}

} // namespace pball
