#include "pball/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "pball/bubble.hpp"

namespace pball {

PsiModel::PsiModel(Dimension d, EnergyConstants c, double h00_)
    : dim(d), constants(std::move(c)), h00(h00_) {
    if (!(h00 > 0.0)) throw std::invalid_argument("PsiModel: H(0,0) must be positive");
}

namespace {

/// g(t) = -bN DeltaU U at |tau|^2 = t:  bN alpha^2 (N-4)(2t+N)(1+t)^-(N-2).
double hole_term(const PsiModel& m, double t) {
    const int n = m.dim.n();
    const double a2 = m.dim.alpha() * m.dim.alpha();
    return m.constants.bN * a2 * (n - 4) * (2.0 * t + n) * stable_pow(1.0 + t, -(n - 2.0));
}

double hole_term_dt(const PsiModel& m, double t) {
    const int n = m.dim.n();
    const double a2 = m.dim.alpha() * m.dim.alpha();
    return m.constants.bN * a2 * (n - 4) *
           (2.0 * stable_pow(1.0 + t, -(n - 2.0)) -
            (n - 2.0) * (2.0 * t + n) * stable_pow(1.0 + t, -(n - 1.0)));
}

} // namespace

double psi_eval(const PsiModel& model, double d, const Point& tau) {
    if (d <= 0.0) throw std::invalid_argument("psi_eval: d > 0 required");
    const int n = model.dim.n();
    const double t = norm_sq(tau);
    return hole_term(model, t) * stable_pow(d, -(n - 2.0)) +
           model.constants.cN * model.h00 * stable_pow(d, n - 4.0);
}

std::vector<double> psi_gradient(const PsiModel& model, double d, const Point& tau) {
    if (d <= 0.0) throw std::invalid_argument("psi_gradient: d > 0 required");
    const int n = model.dim.n();
    const double t = norm_sq(tau);
    std::vector<double> g(1 + tau.size(), 0.0);
    g[0] = -(n - 2.0) * hole_term(model, t) * stable_pow(d, -(n - 1.0)) +
           (n - 4.0) * model.constants.cN * model.h00 * stable_pow(d, n - 5.0);
    const double dt = hole_term_dt(model, t) * stable_pow(d, -(n - 2.0));
    for (std::size_t i = 0; i < tau.size(); ++i) g[1 + i] = 2.0 * tau[i] * dt;
    return g;
}

CriticalPoint psi_critical_point(const PsiModel& model) {
    const int n = model.dim.n();
    const double g0 = hole_term(model, 0.0); // = bN N(N-4) alpha^2
    const double c = model.constants.cN * model.h00;

    CriticalPoint cp;
    cp.tau_star.assign(static_cast<std::size_t>(n), 0.0);
    double d = stable_pow((n - 2.0) * g0 / ((n - 4.0) * c), 1.0 / (2.0 * n - 6.0));

    // Newton polish on dPsi/dd (closed-form derivatives)
    for (int it = 0; it < 50; ++it) {
        const double grad = -(n - 2.0) * g0 * stable_pow(d, -(n - 1.0)) +
                            (n - 4.0) * c * stable_pow(d, n - 5.0);
        const double hess = (n - 2.0) * (n - 1.0) * g0 * stable_pow(d, -static_cast<double>(n)) +
                            (n - 4.0) * (n - 5.0) * c * stable_pow(d, n - 6.0);
        const double step = grad / hess;
        d -= step;
        if (std::fabs(step) < 1e-16 * d) break;
    }
    cp.d_star = d;
    cp.gradient_residual = std::fabs(-(n - 2.0) * g0 * stable_pow(d, -(n - 1.0)) +
                                     (n - 4.0) * c * stable_pow(d, n - 5.0));
    cp.d_second_derivative = (n - 2.0) * (n - 1.0) * g0 * stable_pow(d, -static_cast<double>(n)) +
                             (n - 4.0) * (n - 5.0) * c * stable_pow(d, n - 6.0);
    cp.tau_eigenvalue = 2.0 * hole_term_dt(model, 0.0) * stable_pow(d, -(n - 2.0));
    cp.saddle = (cp.d_second_derivative > 0.0 && cp.tau_eigenvalue < 0.0);
    return cp;
}

double energy_leading_constant(const PsiModel& model) {
    return 2.0 / model.dim.n() * model.constants.aN;
}

double energy_eval(const Dimension& dim, const RadialField& field) {
    if (!field.lap) throw std::invalid_argument("energy_eval: field needs its Laplacian companion");
    const double p1 = dim.p() + 1.0;
    const auto& u = field.values;
    const auto& w = *field.lap;
    const auto g = [&](std::size_t i) {
        const double up = u[i] > 0.0 ? stable_pow(u[i], p1) : 0.0;
        return stable_pow(field.grid.node(i), dim.n() - 1.0) * (0.5 * w[i] * w[i] - up / p1);
    };
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < field.size(); ++i)
        acc += 0.5 * (g(i) + g(i + 1)) * (field.grid.node(i + 1) - field.grid.node(i));
    return dim.sphere_measure() * acc;
}

} // namespace pball
