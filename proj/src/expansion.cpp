#include "pball/expansion.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pball/navier.hpp"
#include "pball/quadrature.hpp"

namespace pball {

namespace {

void require_radial(const ReducedParams& rp) {
    if (norm_sq(rp.tau) != 0.0)
        throw std::invalid_argument("expansion verifier: tau = 0 required (radial build)");
}

} // namespace

RadialField compute_projection(const Dimension& dim, const AnnulusDomain& dom,
                               const ReducedParams& rp, std::size_t intervals) {
    require_radial(rp);
    if (dom.inner != rp.eps) throw std::invalid_argument("compute_projection: eps mismatch");
    const RadialGrid grid(dom.inner, dom.outer, intervals);
    return projected_bubble(dim, dom, grid, rp.mu());
}

RadialField assemble_remainder(const Dimension& dim, const AnnulusDomain& dom,
                               const ReducedParams& rp, const RadialField& pu) {
    require_radial(rp);
    if (!pu.lap) throw std::invalid_argument("assemble_remainder: PU needs its Laplacian companion");
    if (pu.grid.inner() != dom.inner || pu.grid.outer() != dom.outer)
        throw std::invalid_argument("assemble_remainder: grid/domain mismatch");

    const int n = dim.n();
    const double mu = rp.mu();
    const double mu_pow = stable_pow(mu, 0.5 * (n - 4));
    const HoleCoefficients hc = hole_coefficients(dim, rp);
    const double eps = rp.eps;

    RadialField r_field(pu.grid);
    r_field.lap.emplace(pu.size());
    for (std::size_t i = 0; i < pu.size(); ++i) {
        const double r = pu.grid.node(i);
        const double u = bubble_radial(dim, mu, r);
        const double h = regular_part_ball_axis(dim, r);
        const double p1 = corrector_radial(dim, Corrector::Phi1, r / eps);
        const double p2 = corrector_radial(dim, Corrector::Phi2, r / eps);
        r_field.values[i] = pu.values[i] - u + dim.alpha() * mu_pow * h + hc.a1 * p1 + hc.a2 * p2;

        const double lap_u = bubble_laplacian_radial(dim, mu, r);
        const double lap_h = -2.0 * (n - 4); // Delta of the quadratic regular part
        const double lap_p1 = corrector_laplacian_radial(dim, Corrector::Phi1, r / eps) / (eps * eps);
        (*r_field.lap)[i] =
            (*pu.lap)[i] - lap_u + dim.alpha() * mu_pow * lap_h + hc.a1 * lap_p1;
    }
    return r_field;
}

ExpansionReport check_bounds(const Dimension& dim, const ReducedParams& rp,
                             const RadialField& pu, const RadialField& remainder) {
    require_radial(rp);
    if (!remainder.lap) throw std::invalid_argument("check_bounds: remainder needs Delta R");

    const int n = dim.n();
    const double eps = rp.eps;
    const double mu = rp.mu();
    const double c_high = stable_pow(eps, n - 1.0) * stable_pow(mu, -0.5 * (n + 2.0));
    const double c_low = stable_pow(eps, n - 1.0) * stable_pow(mu, -0.5 * (n - 2.0));

    ExpansionReport rep;
    rep.eps = eps;
    rep.d = rp.d;
    rep.intervals = remainder.grid.intervals();
    const HoleCoefficients hc = hole_coefficients(dim, rp);
    const double t_high = std::fabs(hc.a1) * stable_pow(eps, n - 4.0);
    const double t_low = std::fabs(hc.a2) * stable_pow(eps, n - 2.0);
    for (std::size_t i = 0; i < remainder.size(); ++i) {
        const double r = remainder.grid.node(i);
        const double bracket = c_high * stable_pow(r, -(n - 4.0)) + c_low * stable_pow(r, -(n - 2.0));
        const double bracket_lap = c_high * stable_pow(r, -(n - 2.0));
        rep.sup_ratio_R = std::max(rep.sup_ratio_R, std::fabs(remainder.values[i]) / bracket);
        rep.sup_ratio_dR =
            std::max(rep.sup_ratio_dR, std::fabs((*remainder.lap)[i]) / bracket_lap);

        const double sharp = t_high * stable_pow(r, -(n - 4.0)) + t_low * stable_pow(r, -(n - 2.0));
        const double sharp_lap =
            2.0 * (n - 4) * t_high * stable_pow(r, -(n - 2.0)) + c_high * stable_pow(r, -(n - 2.0));
        rep.sup_ratio_R_sharp = std::max(rep.sup_ratio_R_sharp, std::fabs(remainder.values[i]) / sharp);
        rep.sup_ratio_dR_sharp =
            std::max(rep.sup_ratio_dR_sharp, std::fabs((*remainder.lap)[i]) / sharp_lap);
    }

    const double mu_pow = stable_pow(mu, 0.5 * (n - 4));
    rep.rhat_hole = std::fabs(remainder.values.front()) / mu_pow;
    rep.rhat_outer = std::fabs(remainder.values.back()) / mu_pow;

    // ||E||_** in expanded variables: V is the exact rescale of PU onto the
    // grid y = r eps^-sigma, and E = (V_+)^p - U_{d,0}(y)^p.
    const double sigma = dim.sigma().value();
    const double vscale = stable_pow(eps, sigma * 0.5 * (n - 4));
    const double yscale = stable_pow(eps, -sigma);
    const double p = dim.p();
    for (std::size_t i = 0; i < pu.size(); ++i) {
        const double y = pu.grid.node(i) * yscale;
        const double v = vscale * pu.values[i];
        const double fv = v > 0.0 ? stable_pow(v, p) : 0.0;
        const double fu = stable_pow(bubble_radial(dim, rp.d, y), p);
        const double weight = stable_pow(1.0 + y * y, 4.0);
        rep.e_starstar = std::max(rep.e_starstar, weight * std::fabs(fv - fu));
    }
    return rep;
}

ExpansionSweep verify_expansion(const Dimension& dim, const std::vector<double>& eps_list,
                                double d, std::size_t intervals) {
    if (eps_list.size() < 2)
        throw std::invalid_argument("verify_expansion: need at least 2 eps values for a trend");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (eps_list[i] >= eps_list[i - 1])
            throw std::invalid_argument("verify_expansion: eps list must be strictly decreasing");

    ExpansionSweep sweep;
    sweep.reports.resize(eps_list.size(), ExpansionReport{});
    const auto ncases = static_cast<std::ptrdiff_t>(eps_list.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (threading::parallel_enabled())
#endif
    for (std::ptrdiff_t k = 0; k < ncases; ++k) {
        const double eps = eps_list[static_cast<std::size_t>(k)];
        const AnnulusDomain dom(dim, eps, 1.0);
        const ReducedParams rp(dim, d, Point(static_cast<std::size_t>(dim.n()), 0.0), eps);
        const RadialField pu = compute_projection(dim, dom, rp, intervals);
        const RadialField rem = assemble_remainder(dim, dom, rp, pu);
        sweep.reports[static_cast<std::size_t>(k)] = check_bounds(dim, rp, pu, rem);
    }

    std::vector<double> eps(eps_list), v1, v2, v3, v4, v5, v6, v7;
    for (const auto& r : sweep.reports) {
        v1.push_back(r.sup_ratio_R);
        v2.push_back(r.sup_ratio_dR);
        v3.push_back(r.e_starstar);
        v4.push_back(r.rhat_hole);
        v5.push_back(r.rhat_outer);
        v6.push_back(r.sup_ratio_R_sharp);
        v7.push_back(r.sup_ratio_dR_sharp);
    }
    sweep.ratio_slope_R = log_log_fit(eps, v1).first;
    sweep.ratio_slope_dR = log_log_fit(eps, v2).first;
    sweep.e_slope = log_log_fit(eps, v3).first;
    sweep.hole_slope = log_log_fit(eps, v4).first;
    sweep.outer_slope = log_log_fit(eps, v5).first;
    sweep.ratio_slope_R_sharp = log_log_fit(eps, v6).first;
    sweep.ratio_slope_dR_sharp = log_log_fit(eps, v7).first;
    return sweep;
}

} // namespace pball
