#include "pball/navier.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "pball/bubble.hpp"
#include "pball/linalg.hpp"

namespace pball {

namespace {

/// Second-order stencil of the radial Laplacian on a log-uniform grid:
/// Delta u_i = (cp u_{i+1} + cd u_i + cm u_{i-1}) / r_i^2 in z = log r.
struct LaplaceStencil {
    double cp, cd, cm;

    LaplaceStencil(const Dimension& dim, const RadialGrid& grid) {
        const double h = grid.log_spacing();
        if (h >= 2.0 / (dim.n() - 2))
            throw std::invalid_argument("grid too coarse for an M-matrix Laplacian");
        cp = 1.0 / (h * h) + (dim.n() - 2) / (2.0 * h);
        cm = 1.0 / (h * h) - (dim.n() - 2) / (2.0 * h);
        cd = -2.0 / (h * h);
    }

    double apply(const std::vector<double>& u, const RadialGrid& g, std::size_t i) const {
        const double r = g.node(i);
        return (cp * u[i + 1] + cd * u[i] + cm * u[i - 1]) / (r * r);
    }
};

} // namespace

RadialField solve_dirichlet_laplace(const Dimension& dim, const RadialField& rhs) {
    const std::size_t m = rhs.grid.intervals();
    const LaplaceStencil st(dim, rhs.grid);
    const std::size_t n = m - 1;

    BandedMatrix A(n, 1, 1);
    std::vector<double> b(n);
    for (std::size_t i = 1; i < m; ++i) {
        const double r = rhs.grid.node(i);
        const double inv = 1.0 / (r * r);
        const std::size_t row = i - 1;
        A.at(row, row) = -st.cd * inv;
        if (i > 1) A.at(row, row - 1) = -st.cm * inv;
        if (i < m - 1) A.at(row, row + 1) = -st.cp * inv;
        b[row] = rhs.values[i];
    }
    A.factor();
    A.solve(b);

    RadialField out(rhs.grid);
    for (std::size_t i = 1; i < m; ++i) out.values[i] = b[i - 1];
    return out;
}

RadialField solve_linear_navier(const Dimension& dim, const AnnulusDomain& dom,
                                const RadialField& rhs) {
    if (dom.inner <= 0.0)
        throw std::invalid_argument("solve_linear_navier: the grid formulation needs inner > 0");
    if (rhs.grid.inner() != dom.inner || rhs.grid.outer() != dom.outer)
        throw std::invalid_argument("solve_linear_navier: grid does not match the domain");

    RadialField psi = solve_dirichlet_laplace(dim, rhs);
    RadialField phi = solve_dirichlet_laplace(dim, psi);

    // residual certificate for both Dirichlet solves: componentwise backward
    // error |Ax - b|_i / (|A||x| + |b|)_i, the scale the factorization can
    // actually deliver against
    const LaplaceStencil st(dim, rhs.grid);
    const auto backward_error = [&](const std::vector<double>& x, const std::vector<double>& b) {
        double worst = 0.0;
        for (std::size_t i = 1; i < rhs.grid.intervals(); ++i) {
            const double r = rhs.grid.node(i);
            const double inv = 1.0 / (r * r);
            const double resid = -st.apply(x, rhs.grid, i) - b[i];
            const double denom = inv * (std::fabs(st.cp * x[i + 1]) + std::fabs(st.cd * x[i]) +
                                        std::fabs(st.cm * x[i - 1])) +
                                 std::fabs(b[i]) + 1e-300;
            worst = std::max(worst, std::fabs(resid) / denom);
        }
        return worst;
    };
    const double res = std::max(backward_error(psi.values, rhs.values),
                                backward_error(phi.values, psi.values));
    if (res > 1e-10)
        throw std::runtime_error("solve_linear_navier: discrete residual above 1e-10 relative");

    phi.lap.emplace(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) (*phi.lap)[i] = -psi.values[i];
    return phi;
}

RadialField projected_bubble(const Dimension& dim, const AnnulusDomain& dom,
                             const RadialGrid& grid, double mu) {
    const double p = dim.p();
    RadialField rhs = RadialField::sample(
        grid, [&](double r) { return stable_pow(bubble_radial(dim, mu, r), p); });
    return solve_linear_navier(dim, dom, rhs);
}

// ---------------------------------------------------------------------------
// Nonlinear solve
// ---------------------------------------------------------------------------

namespace {

struct NewtonSystem {
    const Dimension& dim;
    const RadialGrid& grid;
    LaplaceStencil st;
    double p;

    NewtonSystem(const Dimension& d, const RadialGrid& g)
        : dim(d), grid(g), st(d, g), p(d.p()) {}

    static double fplus(double v, double p) { return v > 0.0 ? std::pow(v, p) : 0.0; }

    double residual(const std::vector<double>& v, const std::vector<double>& w,
                    std::vector<double>* out_f = nullptr) const {
        const std::size_t m = grid.intervals();
        double sup = 0.0;
        if (out_f) out_f->assign(2 * (m - 1), 0.0);
        for (std::size_t i = 1; i < m; ++i) {
            const double f1 = st.apply(v, grid, i) - w[i];
            const double f2 = st.apply(w, grid, i) - fplus(v[i], p);
            if (out_f) {
                (*out_f)[2 * (i - 1)] = f1;
                (*out_f)[2 * (i - 1) + 1] = f2;
            }
            sup = std::max({sup, std::fabs(f1), std::fabs(f2)});
        }
        return sup;
    }

    /// One Newton direction: solve J delta = -F.
    void direction(const std::vector<double>& v, const std::vector<double>& w,
                   std::vector<double>& delta) const {
        const std::size_t m = grid.intervals();
        const std::size_t n = 2 * (m - 1);
        BandedMatrix J(n, 2, 2);
        std::vector<double> f;
        residual(v, w, &f);
        for (double& x : f) x = -x;

        for (std::size_t i = 1; i < m; ++i) {
            const double inv = 1.0 / (grid.node(i) * grid.node(i));
            const std::size_t rv = 2 * (i - 1);     // row of Delta v - w
            const std::size_t rw = rv + 1;          // row of Delta w - f(v)
            const std::size_t cv = rv, cw = rv + 1; // columns of v_i, w_i

            J.at(rv, cv) = st.cd * inv;
            J.at(rv, cw) = -1.0;
            J.at(rw, cw) = st.cd * inv;
            J.at(rw, cv) = -(v[i] > 0.0 ? p * std::pow(v[i], p - 1.0) : 0.0);
            if (i > 1) {
                J.at(rv, cv - 2) = st.cm * inv;
                J.at(rw, cw - 2) = st.cm * inv;
            }
            if (i < m - 1) {
                J.at(rv, cv + 2) = st.cp * inv;
                J.at(rw, cw + 2) = st.cp * inv;
            }
        }
        J.factor();
        J.solve(f);
        delta = std::move(f);
    }
};

/// Quadratic refinement of the discrete peak on the (uniform-in-z) grid.
double refined_peak(const std::vector<double>& u) {
    std::size_t imax = 0;
    for (std::size_t i = 1; i < u.size(); ++i)
        if (u[i] > u[imax]) imax = i;
    if (imax == 0 || imax + 1 == u.size()) return u[imax];
    const double a = u[imax - 1], b = u[imax], c = u[imax + 1];
    const double curv = c - 2.0 * b + a;
    if (curv >= 0.0) return b;
    return b - (c - a) * (c - a) / (8.0 * curv);
}

} // namespace

SolveReport solve_nonlinear(const Dimension& dim, const AnnulusDomain& dom,
                            const RadialField& init, const NewtonConfig& cfg) {
    if (dom.inner <= 0.0) throw std::invalid_argument("solve_nonlinear: inner > 0 required");
    if (init.grid.inner() != dom.inner || init.grid.outer() != dom.outer)
        throw std::invalid_argument("solve_nonlinear: grid does not match the domain");
    for (double v : init.values)
        if (!std::isfinite(v)) throw std::invalid_argument("solve_nonlinear: initial guess not finite");

    const int n = dim.n();
    const double eps = dom.inner;
    const double sigma = dim.sigma().value();
    const double half_order = 0.5 * (n - 4);
    const double expand = stable_pow(eps, -sigma);          // y = expand * r
    const double vscale = stable_pow(eps, sigma * half_order); // v = vscale * u

    const RadialGrid ygrid = init.grid.scaled(expand);
    const std::size_t m = ygrid.intervals();
    NewtonSystem sys(dim, ygrid);

    std::vector<double> v(init.values);
    for (double& x : v) x *= vscale;
    v.front() = 0.0;
    v.back() = 0.0;
    std::vector<double> w(m + 1, 0.0);
    for (std::size_t i = 1; i < m; ++i) w[i] = sys.st.apply(v, ygrid, i);

    SolveReport rep(init.grid);
    rep.eps = eps;

    double res = sys.residual(v, w);
    int it = 0;
    bool ok = res <= cfg.tolerance;
    std::vector<double> delta;
    while (!ok && it < cfg.max_iterations) {
        sys.direction(v, w, delta);
        double step = 1.0;
        bool accepted = false;
        for (int bt = 0; bt <= cfg.max_backtracks; ++bt) {
            std::vector<double> v_try(v), w_try(w);
            for (std::size_t i = 1; i < m; ++i) {
                v_try[i] += step * delta[2 * (i - 1)];
                w_try[i] += step * delta[2 * (i - 1) + 1];
            }
            const double res_try = sys.residual(v_try, w_try);
            if (res_try < res) {
                v = std::move(v_try);
                w = std::move(w_try);
                res = res_try;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        ++it;
        if (!accepted) break;
        ok = res <= cfg.tolerance;
    }

    rep.newton_iterations = it;
    rep.final_residual = res;

    // map back to physical variables
    const double uscale = 1.0 / vscale;
    const double wscale = uscale * expand * expand; // Delta picks up expand^2
    rep.u.values.resize(m + 1);
    rep.w.values.resize(m + 1);
    for (std::size_t i = 0; i <= m; ++i) {
        rep.u.values[i] = uscale * v[i];
        rep.w.values[i] = wscale * w[i];
    }
    rep.u.lap = rep.w.values;

    const double umax = refined_peak(rep.u.values);
    rep.trivial = ok && umax < cfg.trivial_threshold;
    bool positive = true;
    for (std::size_t i = 1; i < m; ++i)
        if (!(rep.u.values[i] > 0.0)) { positive = false; break; }
    rep.positivity_violated = !positive;
    rep.converged = ok && !rep.trivial && positive;

    if (rep.converged) {
        rep.mu_estimate = stable_pow(dim.alpha() / umax, 2.0 / (n - 4));
        rep.d_estimate = rep.mu_estimate / stable_pow(eps, sigma);
    }
    return rep;
}

SolveReport solve_from_predictor(const Dimension& dim, const AnnulusDomain& dom,
                                 const RadialGrid& grid, double mu, const NewtonConfig& cfg) {
    const RadialField predictor = projected_bubble(dim, dom, grid, mu);
    SolveReport best(grid);
    for (double boost : {1.0, 2.0, 3.0, 4.0, 6.0, 8.0}) {
        RadialField init = predictor;
        for (double& x : init.values) x *= boost;
        SolveReport rep = solve_nonlinear(dim, dom, init, cfg);
        if (rep.converged) return rep;
        if (boost == 1.0) best = std::move(rep);
    }
    return best; // the unboosted attempt, flags telling why it failed
}

// ---------------------------------------------------------------------------
// Continuation and scaling fit
// ---------------------------------------------------------------------------

std::vector<SolveReport> continuation_in_eps(const Dimension& dim,
                                             const std::vector<double>& eps_schedule,
                                             const ContinuationConfig& cfg) {
    if (eps_schedule.empty()) throw std::invalid_argument("continuation: empty schedule");
    if (eps_schedule.front() > 0.2)
        throw std::invalid_argument("continuation: first eps must be <= 0.2");
    for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
        if (eps_schedule[i] <= 0.0) throw std::invalid_argument("continuation: eps must be positive");
        if (i > 0 && eps_schedule[i] >= eps_schedule[i - 1])
            throw std::invalid_argument("continuation: schedule must be strictly decreasing");
    }
    if (cfg.d_start <= 0.0) throw std::invalid_argument("continuation: d_start > 0 required");

    const double sigma = dim.sigma().value();
    const double half_order = 0.5 * (dim.n() - 4);

    std::vector<SolveReport> reports;
    double d_cur = cfg.d_start;
    std::optional<RadialField> corr; // expanded deviation from the predictor

    for (double eps : eps_schedule) {
        const double mu_pred = d_cur * stable_pow(eps, sigma);
        // resolve both the hole scale and the bubble scale
        const double log_total = std::log(1.0 / eps);
        std::size_t m = cfg.intervals;
        m = std::max(m, static_cast<std::size_t>(std::ceil(8.0 * log_total / std::log(2.0))) + 1);
        if (mu_pred > eps)
            m = std::max(m, static_cast<std::size_t>(
                                std::ceil(8.0 * log_total / std::log(mu_pred / eps))) + 1);

        const RadialGrid grid(eps, 1.0, m);
        if (grid.count_below(2.0 * eps) < 8 || grid.count_below(mu_pred) < 8)
            throw std::runtime_error("continuation: grid resolution check failed");

        const AnnulusDomain dom(dim, eps, 1.0);
        RadialField predictor = projected_bubble(dim, dom, grid, mu_pred);

        SolveReport rep(grid);
        if (corr) {
            // reuse the previous converged solution: transfer its expanded
            // deviation from the predictor onto the new grid
            RadialField init = predictor;
            const double expand = stable_pow(eps, -sigma);
            const double to_phys = stable_pow(eps, -sigma * half_order);
            for (std::size_t i = 1; i < grid.intervals(); ++i)
                init.values[i] += to_phys * interpolate(*corr, grid.node(i) * expand, true);
            rep = solve_nonlinear(dim, dom, init, cfg.newton);
            if (!rep.converged) rep = solve_from_predictor(dim, dom, grid, mu_pred, cfg.newton);
        } else {
            rep = solve_from_predictor(dim, dom, grid, mu_pred, cfg.newton);
        }
        const bool good = rep.converged;
        reports.push_back(std::move(rep));
        if (!good) break;

        const SolveReport& last = reports.back();
        d_cur = last.d_estimate;
        const double expand = stable_pow(eps, -sigma);
        const double to_exp = stable_pow(eps, sigma * half_order);
        RadialField dev(grid.scaled(expand));
        for (std::size_t i = 0; i <= grid.intervals(); ++i)
            dev.values[i] = to_exp * (last.u.values[i] - predictor.values[i]);
        corr = std::move(dev);
    }
    return reports;
}

std::pair<double, double> log_log_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("log_log_fit: need matching vectors with >= 2 points");
    const std::size_t k = x.size();
    double sx = 0.0, sy = 0.0;
    std::vector<double> lx(k), ly(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0) throw std::invalid_argument("log_log_fit: positive data only");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / k, my = sy / k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

ScalingFit fit_scaling(const Dimension& dim,
                       const std::vector<std::pair<double, double>>& eps_mu) {
    if (eps_mu.size() < 4) throw std::invalid_argument("fit_scaling: need at least 4 pairs");
    std::vector<double> eps, mu;
    double lo = 1e300, hi = 0.0;
    for (const auto& [e, m] : eps_mu) {
        if (e <= 0.0 || m <= 0.0) throw std::invalid_argument("fit_scaling: positive entries only");
        eps.push_back(e);
        mu.push_back(m);
        lo = std::min(lo, e);
        hi = std::max(hi, e);
    }
    if (hi / lo < 10.0) throw std::invalid_argument("fit_scaling: pairs must span a decade in eps");

    ScalingFit fit;
    std::tie(fit.slope, fit.intercept) = log_log_fit(eps, mu);
    fit.sigma = dim.sigma().value();
    double ss = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double r = std::log(mu[i]) - (fit.intercept + fit.slope * std::log(eps[i]));
        ss += r * r;
        fit.d_values.push_back(mu[i] / stable_pow(eps[i], fit.sigma));
    }
    fit.rms_log_residual = std::sqrt(ss / eps.size());
    return fit;
}

} // namespace pball
