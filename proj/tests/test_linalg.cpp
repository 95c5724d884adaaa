#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "pball/linalg.hpp"

using namespace pball;

TEST_SUITE("linalg") {

TEST_CASE("banded LU matches dense elimination on random systems") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto [kl, ku] : {std::pair<std::size_t, std::size_t>{1, 1}, {2, 2}, {2, 1}}) {
        for (std::size_t n : {5u, 12u, 40u}) {
            BandedMatrix A(n, kl, ku);
            std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (j + kl >= i && i + ku >= j) {
                        double v = u(rng);
                        if (i == j) v += 3.0; // keep comfortably nonsingular
                        A.at(i, j) = v;
                        dense[i][j] = v;
                    }
            std::vector<double> b(n);
            for (double& x : b) x = u(rng);

            const std::vector<double> expected = oracles::dense_solve(dense, b);
            std::vector<double> got = b;
            A.factor();
            A.solve(got);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(got[i] == doctest::Approx(expected[i]).epsilon(1e-11));
        }
    }
}

TEST_CASE("pivoting handles a zero diagonal start") {
    BandedMatrix A(3, 1, 1);
    A.at(0, 0) = 0.0;
    A.at(0, 1) = 2.0;
    A.at(1, 0) = 1.0;
    A.at(1, 1) = 1.0;
    A.at(1, 2) = 1.0;
    A.at(2, 1) = 4.0;
    A.at(2, 2) = -1.0;
    std::vector<double> b = {2.0, 3.0, 3.0}; // solution (1, 1, 1)
    A.factor();
    A.solve(b);
    CHECK(b[0] == doctest::Approx(1.0));
    CHECK(b[1] == doctest::Approx(1.0));
    CHECK(b[2] == doctest::Approx(1.0));
}

TEST_CASE("singular matrix is reported") {
    BandedMatrix A(2, 1, 1);
    A.at(0, 0) = 1.0;
    A.at(0, 1) = 2.0;
    A.at(1, 0) = 0.5;
    A.at(1, 1) = 1.0;
    CHECK_THROWS_AS(A.factor(), std::runtime_error);
}

TEST_CASE("out-of-band access is rejected") {
    BandedMatrix A(6, 1, 1);
    CHECK_THROWS_AS(A.at(0, 5), std::out_of_range);
}

} // TEST_SUITE
