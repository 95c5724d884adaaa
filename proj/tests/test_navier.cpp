#include "doctest.h"

#include <cmath>
#include <map>
#include <random>

#include "oracles.hpp"
#include "pball/bubble.hpp"
#include "pball/navier.hpp"

using namespace pball;

namespace {

using oracles::LaurentPoly;
using oracles::manufactured_solution;

SolveReport solve_at(const Dimension& dim, double eps, double d_pred, std::size_t intervals,
                     const NewtonConfig& cfg = {}) {
    const AnnulusDomain dom(dim, eps, 1.0);
    const RadialGrid grid(eps, 1.0, intervals);
    const double mu = d_pred * stable_pow(eps, dim.sigma().value());
    return solve_from_predictor(dim, dom, grid, mu, cfg);
}

} // namespace

TEST_SUITE("navier") {

TEST_CASE("zero right-hand side gives the zero solution exactly") {
    const Dimension dim(5);
    const AnnulusDomain dom(dim, 0.1, 1.0);
    const RadialGrid grid(0.1, 1.0, 128);
    const RadialField zero(grid);
    const RadialField phi = solve_linear_navier(dim, dom, zero);
    for (double v : phi.values) CHECK(v == 0.0);
}

TEST_CASE("manufactured solution converges at second order") {
    const Dimension dim(5);
    const double eps = 0.1;
    const AnnulusDomain dom(dim, eps, 1.0);
    const LaurentPoly phi_star = manufactured_solution(eps);
    const LaurentPoly lap_phi = phi_star.laplacian(5);
    const LaurentPoly rhs_poly = lap_phi.laplacian(5);

    // the manufactured pair satisfies the hinged boundary conditions
    CHECK(std::fabs(phi_star.eval(eps)) < 1e-15);
    CHECK(std::fabs(phi_star.eval(1.0)) < 1e-15);
    CHECK(std::fabs(lap_phi.eval(eps)) < 1e-12);
    CHECK(std::fabs(lap_phi.eval(1.0)) < 1e-12);

    std::vector<double> errors;
    for (std::size_t m : {200u, 400u, 800u}) {
        const RadialGrid grid(eps, 1.0, m);
        const RadialField rhs =
            RadialField::sample(grid, [&](double r) { return rhs_poly.eval(r); });
        const RadialField phi = solve_linear_navier(dim, dom, rhs);
        double err = 0.0;
        for (std::size_t i = 0; i < phi.size(); ++i)
            err = std::max(err, std::fabs(phi.values[i] - phi_star.eval(grid.node(i))));
        errors.push_back(err);
    }
    const double order1 = std::log2(errors[0] / errors[1]);
    const double order2 = std::log2(errors[1] / errors[2]);
    CHECK(order1 >= 1.9);
    CHECK(order2 >= 1.9);
}

TEST_CASE("discrete maximum principle on 20 random nonnegative right-hand sides") {
    const Dimension dim(6);
    const double eps = 0.1;
    const AnnulusDomain dom(dim, eps, 1.0);
    const RadialGrid grid(eps, 1.0, 150);
    std::mt19937 rng(314);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        RadialField rhs(grid);
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs.values[i] = u(rng);
        const RadialField phi = solve_linear_navier(dim, dom, rhs);
        for (std::size_t i = 0; i < phi.size(); ++i) {
            CHECK(phi.values[i] >= 0.0);
            CHECK(-(*phi.lap)[i] >= 0.0); // the companion -Delta phi = psi >= 0
        }
    }
}

TEST_CASE("projection bounds: 0 <= PU <= U") {
    const Dimension dim(5);
    const double eps = 0.1;
    const AnnulusDomain dom(dim, eps, 1.0);
    const RadialGrid grid(eps, 1.0, 400);
    const double mu = 0.3;
    const RadialField pu = projected_bubble(dim, dom, grid, mu);
    for (std::size_t i = 0; i < pu.size(); ++i) {
        CHECK(pu.values[i] >= 0.0);
        CHECK(pu.values[i] <= bubble_radial(dim, mu, grid.node(i)) + 1e-14);
    }
    CHECK(pu.values.front() == 0.0);
    CHECK(pu.values.back() == 0.0);
}

TEST_CASE("zero initial guess converges to the trivial solution and is flagged") {
    const Dimension dim(5);
    const double eps = 0.1;
    const AnnulusDomain dom(dim, eps, 1.0);
    const RadialGrid grid(eps, 1.0, 200);
    const RadialField zero(grid);
    const SolveReport rep = solve_nonlinear(dim, dom, zero);
    CHECK(rep.trivial);
    CHECK_FALSE(rep.converged);
    CHECK(rep.final_residual <= 1e-9);
}

TEST_CASE("the unboosted projection sits below the mountain pass at eps = 0.1") {
    // the raw predictor loses enough amplitude that plain Newton lands on
    // the trivial branch; the amplitude ladder exists for exactly this
    const Dimension dim(5);
    const double eps = 0.1;
    const AnnulusDomain dom(dim, eps, 1.0);
    const RadialGrid grid(eps, 1.0, 400);
    const RadialField predictor = projected_bubble(dim, dom, grid, 1.75 * stable_pow(eps, 0.75));
    const SolveReport raw = solve_nonlinear(dim, dom, predictor);
    CHECK_FALSE(raw.converged);
    CHECK(raw.trivial);
}

TEST_CASE("N = 5, eps = 0.1: the predictor ladder reaches the positive solution") {
    const Dimension dim(5);
    const SolveReport rep = solve_at(dim, 0.1, 1.75, 600);
    CHECK(rep.converged);
    CHECK_FALSE(rep.positivity_violated);
    CHECK(rep.final_residual <= 1e-9);
    CHECK(rep.newton_iterations < 30);
    CHECK(rep.mu_estimate > 0.0);
    // interior positivity, zero exactly at the boundary nodes
    CHECK(rep.u.values.front() == 0.0);
    CHECK(rep.u.values.back() == 0.0);
    for (std::size_t i = 1; i + 1 < rep.u.size(); ++i) CHECK(rep.u.values[i] > 0.0);
}

TEST_CASE("residual certificate with independent fourth-order stencils") {
    // The certificate is dominated by the scheme's own h^2 defect, so the
    // grid must be deep (M = 20480 puts it below 1e-6); at that resolution
    // the attainable sup residual of the discrete system is ~2e-7 (the
    // 1/h^2-amplified roundoff floor), which sets the Newton tolerance.
    const Dimension dim(5);
    const double eps = 0.1;
    const SolveReport rep = solve_at(dim, eps, 1.75, 20480, NewtonConfig{1e-6, 60, 8, 1e-6});
    REQUIRE(rep.converged);

    // rebuild the expanded fields the iteration worked with
    const double sigma = dim.sigma().value();
    const double vscale = stable_pow(eps, sigma * 0.5 * (5 - 4));
    const RadialGrid ygrid = rep.u.grid.scaled(stable_pow(eps, -sigma));
    RadialField v(ygrid), w(ygrid);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v.values[i] = vscale * rep.u.values[i];
        w.values[i] = vscale * stable_pow(eps, 2.0 * sigma) * rep.w.values[i];
    }
    const double p = dim.p();
    double sup = 0.0;
    for (std::size_t i = 2; i + 2 < v.size(); ++i) {
        const double r1 = oracles::laplacian_log5(v, 5, i) - w.values[i];
        const double r2 = oracles::laplacian_log5(w, 5, i) -
                          (v.values[i] > 0.0 ? std::pow(v.values[i], p) : 0.0);
        sup = std::max({sup, std::fabs(r1), std::fabs(r2)});
    }
    CHECK(sup <= 1e-6);
}

TEST_CASE("a single-entry schedule reduces to one predictor solve") {
    const Dimension dim(5);
    ContinuationConfig cfg;
    cfg.intervals = 400;
    cfg.d_start = 1.75;
    const auto reports = continuation_in_eps(dim, {0.1}, cfg);
    REQUIRE(reports.size() == 1);
    const SolveReport direct = solve_at(dim, 0.1, 1.75, 400);
    CHECK(reports[0].converged);
    CHECK(reports[0].mu_estimate == doctest::Approx(direct.mu_estimate).epsilon(1e-14));
}

TEST_CASE("mu estimates decrease along a converged schedule") {
    const Dimension dim(5);
    ContinuationConfig cfg;
    cfg.intervals = 300;
    cfg.d_start = 1.75;
    const auto reports = continuation_in_eps(dim, {0.15, 0.1, 0.06, 0.035}, cfg);
    REQUIRE(reports.size() == 4);
    for (const auto& r : reports) CHECK(r.converged);
    for (std::size_t k = 1; k < reports.size(); ++k)
        CHECK(reports[k].mu_estimate < reports[k - 1].mu_estimate);
}

TEST_CASE("doubling the grid moves mu by less than 0.5 percent") {
    const Dimension dim(5);
    const SolveReport coarse = solve_at(dim, 0.05, 1.75, 400);
    const SolveReport fine = solve_at(dim, 0.05, 1.75, 800);
    REQUIRE(coarse.converged);
    REQUIRE(fine.converged);
    CHECK(std::fabs(coarse.mu_estimate - fine.mu_estimate) / fine.mu_estimate < 0.005);
}

TEST_CASE("continuation input validation") {
    const Dimension dim(5);
    ContinuationConfig cfg;
    CHECK_THROWS_AS(continuation_in_eps(dim, {}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(continuation_in_eps(dim, {0.5, 0.1}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(continuation_in_eps(dim, {0.1, 0.2}, cfg), std::invalid_argument);
    CHECK_THROWS_AS(continuation_in_eps(dim, {0.1, -0.05}, cfg), std::invalid_argument);
}

TEST_CASE("solver input validation") {
    const Dimension dim(5);
    const AnnulusDomain dom(dim, 0.1, 1.0);
    const RadialGrid wrong(0.2, 1.0, 100);
    CHECK_THROWS_AS(solve_nonlinear(dim, dom, RadialField(wrong)), std::invalid_argument);
    const RadialGrid grid(0.1, 1.0, 100);
    RadialField bad(grid);
    bad.values[3] = std::nan("");
    CHECK_THROWS_AS(solve_nonlinear(dim, dom, bad), std::invalid_argument);
    CHECK_THROWS_AS(solve_linear_navier(dim, dom, RadialField(wrong)), std::invalid_argument);
}

TEST_CASE("fit_scaling recovers an exact power law") {
    const Dimension dim(5);
    std::vector<std::pair<double, double>> pairs;
    for (int k = 0; k <= 6; ++k) {
        const double eps = 0.2 * std::pow(0.5, k);
        pairs.emplace_back(eps, 2.0 * std::pow(eps, 0.75));
    }
    const ScalingFit fit = fit_scaling(dim, pairs);
    CHECK(fit.slope == doctest::Approx(0.75).epsilon(1e-12));
    for (double d : fit.d_values) CHECK(d == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.rms_log_residual < 1e-12);
}

TEST_CASE("fit_scaling with 1 percent multiplicative noise stays within 0.02 of 3/4") {
    const Dimension dim(5);
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> noise(-0.01, 0.01);
    std::vector<std::pair<double, double>> pairs;
    for (int k = 0; k < 12; ++k) {
        const double eps = 0.2 * std::pow(0.62, k);
        pairs.emplace_back(eps, 2.0 * std::pow(eps, 0.75) * (1.0 + noise(rng)));
    }
    const ScalingFit fit = fit_scaling(dim, pairs);
    CHECK(std::fabs(fit.slope - 0.75) < 0.02);
}

TEST_CASE("fit_scaling rejects degenerate input") {
    const Dimension dim(5);
    std::vector<std::pair<double, double>> three = {{0.1, 1.0}, {0.05, 0.5}, {0.01, 0.2}};
    CHECK_THROWS_AS(fit_scaling(dim, three), std::invalid_argument);
    std::vector<std::pair<double, double>> narrow = {
        {0.10, 1.0}, {0.09, 0.9}, {0.08, 0.8}, {0.07, 0.7}};
    CHECK_THROWS_AS(fit_scaling(dim, narrow), std::invalid_argument);
    std::vector<std::pair<double, double>> negative = {
        {0.1, 1.0}, {0.05, -0.5}, {0.01, 0.2}, {0.005, 0.1}};
    CHECK_THROWS_AS(fit_scaling(dim, negative), std::invalid_argument);
}

} // TEST_SUITE
