#include "pball/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pball {

namespace threading {

namespace {
std::atomic<bool> g_parallel{true};
}

void set_max_threads(int k) {
    if (k < 0) throw std::invalid_argument("set_max_threads: k >= 0 required");
    if (k == 1) {
        g_parallel = false;
        return;
    }
    g_parallel = true;
#ifdef _OPENMP
    if (k > 0) omp_set_num_threads(k);
#endif
}

bool parallel_enabled() { return g_parallel.load(); }

} // namespace threading

// ---------------------------------------------------------------------------
// Gauss-Legendre rules
// ---------------------------------------------------------------------------

namespace {

GaussRule make_gauss_legendre(std::size_t n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t k = 0; k < (n + 1) / 2; ++k) {
        // Chebyshev-based initial guess, then Newton on P_n
        double x = std::cos(M_PI * (static_cast<double>(k) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t j = 2; j <= n; ++j) {
                const double jd = static_cast<double>(j);
                const double p2 = ((2.0 * jd - 1.0) * x * p1 - (jd - 1.0) * p0) / jd;
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        rule.nodes[k] = -x;
        rule.nodes[n - 1 - k] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[k] = w;
        rule.weights[n - 1 - k] = w;
    }
    return rule;
}

std::mutex g_rule_mutex;
std::map<std::size_t, GaussRule> g_rules;

} // namespace

const GaussRule& gauss_legendre(std::size_t n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1");
    std::lock_guard<std::mutex> lock(g_rule_mutex);
    auto it = g_rules.find(n);
    if (it == g_rules.end()) it = g_rules.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

// ---------------------------------------------------------------------------
// Panel sums
// ---------------------------------------------------------------------------

namespace {

double panel_sum(const std::function<double(double)>& f, const Panel& p, const GaussRule& g) {
    const double mid = 0.5 * (p.lo + p.hi);
    const double half = 0.5 * (p.hi - p.lo);
    double s = 0.0;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        const double t = mid + half * g.nodes[k];
        double value;
        if (p.tail) {
            const double om = 1.0 - t;
            value = f(p.tail_start + t / om) / (om * om);
        } else {
            value = f(t);
        }
        s += g.weights[k] * value;
    }
    return half * s;
}

} // namespace

double integrate_panels_serial(const std::function<double(double)>& f,
                               const std::vector<Panel>& panels, std::size_t points) {
    const GaussRule& g = gauss_legendre(points);
    double total = 0.0;
    for (const Panel& p : panels) total += panel_sum(f, p, g);
    return total;
}

double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<Panel>& panels, std::size_t points) {
    const GaussRule& g = gauss_legendre(points);
    const auto np = static_cast<std::ptrdiff_t>(panels.size());
    std::vector<double> partial(panels.size(), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (threading::parallel_enabled() && np > 3)
#endif
    for (std::ptrdiff_t i = 0; i < np; ++i)
        partial[static_cast<std::size_t>(i)] = panel_sum(f, panels[static_cast<std::size_t>(i)], g);
    double total = 0.0;
    for (double v : partial) total += v; // fixed order
    return total;
}

std::vector<Panel> QuadratureRule::panels() const {
    if (breakpoints.size() < 2 || tail_breaks.size() < 2)
        throw std::invalid_argument("QuadratureRule: need at least one panel");
    std::vector<Panel> out;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        out.push_back({breakpoints[i], breakpoints[i + 1], false, 0.0});
    const double a = breakpoints.back();
    for (std::size_t i = 0; i + 1 < tail_breaks.size(); ++i) {
        const double hi = std::min(tail_breaks[i + 1], 1.0 - 1e-12);
        out.push_back({tail_breaks[i], hi, true, a});
    }
    return out;
}

QuadResult integrate_radial(const std::function<double(double)>& f, const QuadratureRule& rule) {
    const double coarse = integrate_panels(f, rule.panels(), rule.points_per_panel);
    const double fine = integrate_panels(f, rule.panels(), rule.refined().points_per_panel);
    return {fine, std::fabs(fine - coarse)};
}

// ---------------------------------------------------------------------------
// Energy constants
// ---------------------------------------------------------------------------

EnergyConstants compute_energy_constants(const Dimension& dim, const QuadratureRule& rule) {
    const int n = dim.n();
    const double alpha = dim.alpha();
    const double sphere = dim.sphere_measure();
    const double p = dim.p();

    EnergyConstants out;
    out.n = n;
    out.sphere_measure = sphere;

    // aN = |S^(N-1)| alpha^((p+1)) * int r^(N-1) (1+r^2)^-N dr
    const double ap1 = stable_pow(alpha, p + 1.0);
    out.aN_quad = integrate_radial(
        [n](double r) { return stable_pow(r, n - 1.0) * stable_pow(1.0 + r * r, -static_cast<double>(n)); },
        rule);
    out.aN_quad.value *= sphere * ap1;
    out.aN_quad.error_estimate *= sphere * ap1;
    out.aN = out.aN_quad.value;

    out.bN = 0.75 * (n - 2) * sphere;

    // cN = (1/2) alpha * |S^(N-1)| alpha^p * int r^(N-1) (1+r^2)^-((N+4)/2) dr
    const double apow = stable_pow(alpha, p);
    out.cN_quad = integrate_radial(
        [n](double r) { return stable_pow(r, n - 1.0) * stable_pow(1.0 + r * r, -0.5 * (n + 4.0)); },
        rule);
    out.cN_quad.value *= 0.5 * alpha * sphere * apow;
    out.cN_quad.error_estimate *= 0.5 * alpha * sphere * apow;
    out.cN = out.cN_quad.value;

    out.kN_quad = measure_biharmonic_normalization(dim, rule);
    out.kN = out.kN_quad.value;

    if (!(out.aN > 0.0 && out.bN > 0.0 && out.cN > 0.0 && out.kN > 0.0))
        throw std::runtime_error("compute_energy_constants: constants must be positive");
    return out;
}

// ---------------------------------------------------------------------------
// Shifted kernel integrals
// ---------------------------------------------------------------------------

namespace {

double sphere_measure_lower(int n) {
    // meas(S^(N-2)) for the polar-angle reduction
    const double half = 0.5 * (n - 1);
    return 2.0 * std::pow(M_PI, half) / std::tgamma(half);
}

/// int_0^theta_hi f(cos theta) sin^(N-2) theta dtheta with a fixed Gauss rule.
double polar_integral(const std::function<double(double)>& f, double theta_hi, int n,
                      std::size_t points) {
    const GaussRule& g = gauss_legendre(points);
    const double mid = 0.5 * theta_hi;
    const double half = 0.5 * theta_hi;
    double s = 0.0;
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        const double th = mid + half * g.nodes[k];
        s += g.weights[k] * f(std::cos(th)) * std::pow(std::sin(th), n - 2);
    }
    return half * s;
}

} // namespace

double shifted_kernel_integral(const Dimension& dim, double tau_norm, double a,
                               const QuadratureRule& rule) {
    const int n = dim.n();
    const double alpha_p = stable_pow(dim.alpha(), dim.p());
    // U^p as a function of s^2 = |y|^2: alpha^p (1+s^2)^(-(N+4)/2)
    const auto up = [alpha_p, n](double s2) { return alpha_p * stable_pow(1.0 + s2, -0.5 * (n + 4.0)); };

    if (tau_norm < 1e-14) {
        const auto f = [&, n, a](double r) { return stable_pow(r, n - 1.0 - a) * up(r * r); };
        return dim.sphere_measure() * integrate_panels(f, rule.panels(), rule.points_per_panel);
    }

    const double t = tau_norm;
    const double rho0 = 0.5; // splitting radius around the kernel singularity
    const double lower = sphere_measure_lower(n);
    const std::size_t pts = rule.points_per_panel;

    // Near field: coordinates centered at -tau; kernel becomes rho^(-a).
    const auto inner_f = [&, n, a, t](double rho) {
        const auto g = [&, rho](double c) { return up(rho * rho + t * t - 2.0 * rho * t * c); };
        return stable_pow(rho, n - 1.0 - a) * polar_integral(g, M_PI, n, pts);
    };
    std::vector<Panel> inner_panels = {{0.0, 0.5 * rho0, false, 0.0}, {0.5 * rho0, rho0, false, 0.0}};
    const double inner = lower * integrate_panels(inner_f, inner_panels, pts);

    // Far field: bubble-centered coordinates; the polar integral is cut at
    // the splitting sphere |y + tau| = rho0.
    const auto outer_f = [&, n, a, t, rho0](double r) {
        const double tcut = (rho0 * rho0 - r * r - t * t) / (2.0 * r * t);
        if (tcut >= 1.0) return 0.0; // whole sphere inside the splitting ball
        const auto g = [&, r](double c) {
            const double q = r * r + t * t + 2.0 * r * t * c;
            return stable_pow(q, -0.5 * a);
        };
        const double theta_hi = (tcut <= -1.0) ? M_PI : std::acos(tcut);
        return stable_pow(r, n - 1.0) * up(r * r) * polar_integral(g, theta_hi, n, pts);
    };
    // Panels broken where the cut angle is non-smooth: r = |t - rho0|, t + rho0.
    std::vector<double> breaks = rule.breakpoints;
    breaks.push_back(std::fabs(t - rho0));
    breaks.push_back(t + rho0);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [](double x, double y) { return std::fabs(x - y) < 1e-13; }),
                 breaks.end());
    QuadratureRule outer_rule = rule;
    outer_rule.breakpoints = breaks;
    const double outer = lower * integrate_panels(outer_f, outer_rule.panels(), pts);

    return inner + outer;
}

namespace {

QuadResult shifted_kernel_checked(const Dimension& dim, double tau_norm, double a,
                                  const QuadratureRule& rule) {
    const double coarse = shifted_kernel_integral(dim, tau_norm, a, rule);
    const double fine = shifted_kernel_integral(dim, tau_norm, a, rule.refined());
    return {fine, std::fabs(fine - coarse)};
}

} // namespace

IdentityReport representation_identity_biharmonic(const Dimension& dim, const Point& tau,
                                                  double kN, const QuadratureRule& rule) {
    const double t = std::sqrt(norm_sq(tau));
    const QuadResult q = shifted_kernel_checked(dim, t, dim.n() - 4.0, rule);
    IdentityReport rep;
    rep.integral = q.value;
    rep.error_estimate = q.error_estimate;
    rep.reference = kN * bubble_radial(dim, 1.0, t);
    rep.rel_residual = std::fabs(rep.integral - rep.reference) / std::fabs(rep.reference);
    return rep;
}

IdentityReport representation_identity_harmonic(const Dimension& dim, const Point& tau,
                                                const QuadratureRule& rule) {
    const double t = std::sqrt(norm_sq(tau));
    const QuadResult q = shifted_kernel_checked(dim, t, dim.n() - 2.0, rule);
    IdentityReport rep;
    rep.integral = q.value;
    rep.error_estimate = q.error_estimate;
    rep.reference = -dim.harmonic_normalization() * bubble_laplacian_radial(dim, 1.0, t);
    rep.rel_residual = std::fabs(rep.integral - rep.reference) / std::fabs(rep.reference);
    return rep;
}

QuadResult measure_biharmonic_normalization(const Dimension& dim, const QuadratureRule& rule) {
    const double u0 = dim.alpha(); // U(0) at mu = 1
    const QuadResult q = shifted_kernel_checked(dim, 0.0, dim.n() - 4.0, rule);
    return {q.value / u0, q.error_estimate / u0};
}

} // namespace pball
