#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pball/bubble.hpp"

using namespace pball;

namespace {

Point zero_point(int n) { return Point(static_cast<std::size_t>(n), 0.0); }

Point random_point(std::mt19937& rng, int n, double radius) {
    std::normal_distribution<double> g(0.0, 1.0);
    Point x(static_cast<std::size_t>(n));
    double s = 0.0;
    for (double& v : x) {
        v = g(rng);
        s += v * v;
    }
    std::uniform_real_distribution<double> u(0.05, radius);
    const double scale = u(rng) / std::sqrt(s);
    for (double& v : x) v *= scale;
    return x;
}

} // namespace

TEST_SUITE("bubble") {

TEST_CASE("value at the center and radial symmetry") {
    const Dimension dim(5);
    const BubbleParams b(1.0, zero_point(5));
    CHECK(bubble_eval(dim, b, zero_point(5)) ==
          doctest::Approx(std::pow(105.0, 0.125)).epsilon(1e-15));

    Point x = zero_point(5), y = zero_point(5);
    x[0] = 0.3;
    x[2] = 0.4; // |x| = 0.5
    y[4] = 0.5;
    CHECK(bubble_eval(dim, b, x) == doctest::Approx(bubble_eval(dim, b, y)).epsilon(1e-15));
}

TEST_CASE("scaling identity U_{mu,xi}(xi + mu z) = mu^(-(N-4)/2) U_{1,0}(z)") {
    std::mt19937 rng(2024);
    for (int n : {5, 6, 8}) {
        const Dimension dim(n);
        for (int rep = 0; rep < 20; ++rep) {
            std::uniform_real_distribution<double> mu_dist(0.3, 3.0);
            const double mu = mu_dist(rng);
            const Point xi = random_point(rng, n, 1.0);
            const Point z = random_point(rng, n, 2.0);
            Point x(xi);
            for (int j = 0; j < n; ++j) x[static_cast<std::size_t>(j)] += mu * z[static_cast<std::size_t>(j)];
            const BubbleParams scaled(mu, xi);
            const BubbleParams unit(1.0, zero_point(n));
            const double lhs = bubble_eval(dim, scaled, x);
            const double rhs = stable_pow(mu, -0.5 * (n - 4)) * bubble_eval(dim, unit, z);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
        }
    }
}

TEST_CASE("closed-form Laplacian against the finite-difference oracle") {
    const Dimension dim(5);
    const BubbleParams b(1.0, zero_point(5));
    const auto f = [&](const Point& x) { return bubble_eval(dim, b, x); };

    // at the center: Delta U(0) = -N(N-4) alpha
    const double lap0 = bubble_laplacian(dim, b, zero_point(5));
    CHECK(lap0 == doctest::Approx(-5.0 * dim.alpha()).epsilon(1e-14));
    const double fd0 = oracles::richardson(oracles::laplacian_fd(f, zero_point(5), 1e-2),
                                           oracles::laplacian_fd(f, zero_point(5), 5e-3));
    CHECK(fd0 == doctest::Approx(lap0).epsilon(1e-8));

    std::mt19937 rng(7);
    for (int rep = 0; rep < 25; ++rep) {
        const Point x = random_point(rng, 5, 2.5);
        const double fd = oracles::richardson(oracles::laplacian_fd(f, x, 1e-2),
                                              oracles::laplacian_fd(f, x, 5e-3));
        CHECK(fd == doctest::Approx(bubble_laplacian(dim, b, x)).epsilon(1e-7));
    }
}

TEST_CASE("Laplacian is strictly negative at random points and parameters") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> mu_dist(0.2, 4.0);
    for (int n : {5, 6, 8, 10}) {
        const Dimension dim(n);
        for (int rep = 0; rep < 2500; ++rep) {
            const double mu = mu_dist(rng);
            const BubbleParams b(mu, random_point(rng, n, 2.0));
            CHECK(bubble_laplacian(dim, b, random_point(rng, n, 4.0)) < 0.0);
        }
    }
}

TEST_CASE("bubble solves Delta^2 U = U^p (finite differences, Richardson-confirmed)") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> mu_dist(0.6, 1.8);
    for (int n : {5, 6}) {
        const Dimension dim(n);
        const double p = dim.p();
        double worst = 0.0;
        for (int rep = 0; rep < 60; ++rep) {
            const BubbleParams b(mu_dist(rng), random_point(rng, n, 0.8));
            const Point x = random_point(rng, n, 2.0);
            const auto f = [&](const Point& y) { return bubble_eval(dim, b, y); };
            const double up = stable_pow(bubble_eval(dim, b, x), p);
            // base step 2e-2: the h/2 evaluation stays above the ~1/h^4
            // roundoff floor of the iterated stencil
            const double coarse = oracles::bilaplacian_fd(f, x, 2e-2);
            const double fine = oracles::bilaplacian_fd(f, x, 1e-2);
            const double extrap = oracles::richardson(coarse, fine);
            // the h/2 error must be ~4x smaller: convergence toward the PDE
            CHECK(std::fabs(fine - up) < 0.5 * std::fabs(coarse - up) + 2e-6 * std::max(1.0, up));
            worst = std::max(worst, std::fabs(extrap - up) / std::max(1.0, up));
        }
        CHECK(worst <= 1e-5);
    }
}

TEST_CASE("kernel fields: closed forms, symmetry zeros, derivative oracles") {
    const Dimension dim(5);
    const BubbleParams b(1.0, zero_point(5));

    // Z_0 at the center equals -alpha (N-4)/2
    CHECK(kernel_field(dim, b, 0, zero_point(5)) ==
          doctest::Approx(-dim.alpha() * 0.5 * (5 - 4)).epsilon(1e-15));
    for (int i = 1; i <= 5; ++i) CHECK(kernel_field(dim, b, i, zero_point(5)) == 0.0);
    CHECK_THROWS_AS(kernel_field(dim, b, 6, zero_point(5)), std::invalid_argument);
    CHECK_THROWS_AS(kernel_field(dim, b, -1, zero_point(5)), std::invalid_argument);

    std::mt19937 rng(5);
    for (int rep = 0; rep < 20; ++rep) {
        const Point x = random_point(rng, 5, 2.0);
        const double h = 1e-5;

        // dU/dmu by central difference
        const BubbleParams bp(1.0 + h, zero_point(5)), bm(1.0 - h, zero_point(5));
        const double z0_fd = (bubble_eval(dim, bp, x) - bubble_eval(dim, bm, x)) / (2.0 * h);
        CHECK(z0_fd == doctest::Approx(kernel_field(dim, b, 0, x)).epsilon(1e-6));

        // dU/dxi_i by central difference
        for (int i = 1; i <= 5; ++i) {
            Point xip = zero_point(5), xim = zero_point(5);
            xip[static_cast<std::size_t>(i - 1)] = h;
            xim[static_cast<std::size_t>(i - 1)] = -h;
            const double fd = (bubble_eval(dim, BubbleParams(1.0, xip), x) -
                               bubble_eval(dim, BubbleParams(1.0, xim), x)) /
                              (2.0 * h);
            CHECK(fd == doctest::Approx(kernel_field(dim, b, i, x)).epsilon(1e-6));
        }
    }
}

TEST_CASE("kernel fields solve the linearized equation Delta^2 Z = p U^(p-1) Z") {
    const Dimension dim(5);
    const BubbleParams b(1.0, zero_point(5));
    const double p = dim.p();
    std::mt19937 rng(17);
    for (int i : {0, 1, 3}) {
        for (int rep = 0; rep < 10; ++rep) {
            const Point x = random_point(rng, 5, 1.5);
            const auto z = [&](const Point& y) { return kernel_field(dim, b, i, y); };
            const double rhs =
                p * stable_pow(bubble_eval(dim, b, x), p - 1.0) * kernel_field(dim, b, i, x);
            const double lhs = oracles::bilaplacian_richardson(z, x, 1e-2);
            CHECK(std::fabs(lhs - rhs) <= 1e-5 * std::max(1.0, std::fabs(rhs)));
        }
    }
}

TEST_CASE("correctors: boundary data, decay, biharmonicity") {
    for (int n : {5, 6, 7, 8, 10}) {
        const Dimension dim(n);
        CHECK(corrector_radial(dim, Corrector::Upsilon, 1.0) == 2.0);
        CHECK(corrector_laplacian_radial(dim, Corrector::Upsilon, 1.0) == -2.0 * (n - 4));
        CHECK(corrector_radial(dim, Corrector::Upsilon, 1e12) < 1e-11);
        CHECK_THROWS_AS(corrector_radial(dim, Corrector::Phi1, 0.999), std::invalid_argument);
    }

    const Dimension dim5(5);
    CHECK(corrector_radial(dim5, Corrector::Phi1, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(corrector_radial(dim5, Corrector::Phi2, 2.0) == doctest::Approx(0.125).epsilon(1e-15));

    // Delta^2 phi = 0 away from the origin
    std::mt19937 rng(23);
    for (auto which : {Corrector::Phi1, Corrector::Phi2}) {
        for (int rep = 0; rep < 10; ++rep) {
            Point x = random_point(rng, 5, 1.0);
            const double nx = std::sqrt(norm_sq(x));
            for (double& v : x) v *= 2.0 / nx; // |x| = 2
            const auto f = [&](const Point& y) { return corrector_eval(dim5, which, y); };
            CHECK(std::fabs(oracles::bilaplacian_richardson(f, x, 2e-2)) <= 1e-5);
        }
    }

    // the FD Laplacian of Upsilon matches the closed form at |x| = 1.5
    Point x = zero_point(5);
    x[0] = 1.5;
    const auto ups = [&](const Point& y) { return corrector_eval(dim5, Corrector::Upsilon, y); };
    const double fd = oracles::richardson(oracles::laplacian_fd(ups, x, 1e-2),
                                          oracles::laplacian_fd(ups, x, 5e-3));
    CHECK(fd == doctest::Approx(corrector_laplacian_radial(dim5, Corrector::Upsilon, 1.5))
                    .epsilon(1e-8));
}

TEST_CASE("matching coefficients: the two algebraic routes agree") {
    const Dimension dim(5);
    Point tau = zero_point(5);
    tau[0] = 0.3;
    const ReducedParams rp(dim, 1.0, tau, 1e-2);
    const HoleCoefficients c1 = hole_coefficients(dim, rp);
    const HoleCoefficients c2 = hole_coefficients_explicit(dim, rp);
    CHECK(c1.a1 == doctest::Approx(c2.a1).epsilon(1e-12));
    CHECK(c1.a2 == doctest::Approx(c2.a2).epsilon(1e-12));
}

TEST_CASE("matching coefficients at tau = 0: a1 = alpha N eps^2 / (2 mu^(N/2))") {
    const Dimension dim(5);
    const ReducedParams rp(dim, 1.3, zero_point(5), 5e-2);
    const double mu = rp.mu();
    const HoleCoefficients c = hole_coefficients(dim, rp);
    CHECK(c.a1 == doctest::Approx(dim.alpha() * 5.0 * rp.eps * rp.eps /
                                  (2.0 * stable_pow(mu, 2.5)))
                      .epsilon(1e-13));
    CHECK(c.a2 == doctest::Approx(dim.alpha() * stable_pow(mu, -0.5) - c.a1).epsilon(1e-13));
}

TEST_CASE("a1 + a2 equals the bubble value at the hole center, rescaled") {
    const Dimension dim(6);
    Point tau = zero_point(6);
    tau[1] = 0.5;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const ReducedParams rp(dim, 0.8, tau, eps);
        const HoleCoefficients c = hole_coefficients(dim, rp);
        const double expected =
            bubble_radial(dim, 1.0, 0.5) / stable_pow(rp.mu(), 0.5 * (6 - 4));
        CHECK(c.a1 + c.a2 == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("eps -> 0 limit: a2 mu^((N-4)/2) -> alpha (1+|tau|^2)^(-(N-4)/2)") {
    const Dimension dim(5);
    Point tau = zero_point(5);
    tau[0] = 0.3;
    // the a1 part carries eps^2/mu^2 = eps^(2-2 sigma) = sqrt(eps) for N = 5
    double prev_gap = 1e300;
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) {
        const ReducedParams rp(dim, 1.0, tau, eps);
        const HoleCoefficients c = hole_coefficients(dim, rp);
        const double limit = dim.alpha() * stable_pow(1.09, -0.5);
        const double gap = std::fabs(c.a2 * stable_pow(rp.mu(), 0.5) - limit);
        CHECK(gap < 0.40 * prev_gap); // ~ sqrt(1/10) contraction per decade
        prev_gap = gap;
    }
    CHECK(prev_gap < 0.02);
}

TEST_CASE("reduced parameters validate their compactness box") {
    const Dimension dim(5);
    CHECK_THROWS_AS(ReducedParams(dim, 1e-9, zero_point(5), 0.1), std::invalid_argument);
    CHECK_THROWS_AS(ReducedParams(dim, 1.0, zero_point(5), -0.1), std::invalid_argument);
    Point far = zero_point(5);
    far[0] = 1e3;
    CHECK_THROWS_AS(ReducedParams(dim, 1.0, far, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(BubbleParams(-1.0, zero_point(5)), std::invalid_argument);
}

} // TEST_SUITE
