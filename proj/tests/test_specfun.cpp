#include "doctest.h"

#include "oracles.hpp"

#include <stdexcept>
#include <vector>

#include "emrtm/specfun.hpp"

using namespace emrtm;

TEST_CASE("bessel_j at the origin")
{
    CHECK(bessel_j(0, 0.0) == 1.0);
    CHECK(bessel_j(1, 0.0) == 0.0);
    CHECK(bessel_j(5, 0.0) == 0.0);
}

TEST_CASE("bessel_j matches the power series")
{
    for (int m : {0, 1, 2, 5, 10, 20}) {
        for (double x : {0.1, 1.0, 3.7, 8.0, 14.0}) {
            const double ref = oracle::series_j(m, x);
            CAPTURE(m);
            CAPTURE(x);
            CHECK(std::abs(bessel_j(m, x) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("first zero of J0 from series bisection")
{
    const double root = oracle::bisect([](double x) { return oracle::series_j(0, x); }, 2.0, 3.0);
    CHECK(std::abs(bessel_j(0, root)) <= 1e-10);
}

TEST_CASE("Y0 against the ascending series")
{
    for (double x : {1.0, 0.3, 2.5, 6.0}) {
        CAPTURE(x);
        CHECK(bessel_y(0, x) == doctest::Approx(oracle::series_y0(x)).epsilon(1e-10));
    }
}

TEST_CASE("Y0 has a logarithmic singularity")
{
    double prev = 0.0;
    for (double x = 1e-1; x > 1e-9; x *= 0.1) {
        const double rest = bessel_y(0, x) - (2.0 / std::numbers::pi) * std::log(0.5 * x);
        CHECK(std::abs(rest) < 1.0);
        if (x < 1e-2) {
            CHECK(std::abs(rest - prev) < 1e-3);
        }
        prev = rest;
    }
}

TEST_CASE("Wronskian")
{
    for (double x : {0.5, 5.0, 500.0}) {
        for (int m = 0; m < 30; ++m) {
            const double w = bessel_j(m + 1, x) * bessel_y(m, x) - bessel_j(m, x) * bessel_y(m + 1, x);
            const double ref = 2.0 / (std::numbers::pi * x);
            CAPTURE(x);
            CAPTURE(m);
            CHECK(std::abs(w - ref) <= 1e-10 * std::max(1.0, std::abs(bessel_j(m, x) * bessel_y(m + 1, x))));
        }
    }
}

TEST_CASE("hankel1 is J + iY")
{
    for (int m : {0, 1, 7}) {
        for (double x : {0.2, 3.0, 90.0}) {
            const auto h = hankel1(m, x);
            CHECK(h.real() == bessel_j(m, x));
            CHECK(h.imag() == bessel_y(m, x));
        }
    }
}

TEST_CASE("H0 magnitude for large argument")
{
    const double x = 1e3;
    CHECK(std::abs(hankel1(0, x)) * std::sqrt(x) == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-3));
}

TEST_CASE("H0 against the Hankel asymptotic series")
{
    const double x = 400.0;
    const std::complex<double> i(0.0, 1.0);
    const auto ref = std::sqrt(2.0 / (std::numbers::pi * x)) * std::exp(i * (x - 0.25 * std::numbers::pi))
                     * (1.0 - i / (8.0 * x) - 9.0 / (128.0 * x * x) + 75.0 * i / (1024.0 * x * x * x));
    CHECK(std::abs(hankel1(0, x) - ref) <= 1e-11);
}

TEST_CASE("H0 at kr = 1 against the series oracle")
{
    CHECK(std::abs(hankel1(0, 1.0) - oracle::series_h0(1.0)) <= 1e-10);
}

TEST_CASE("derivatives match central differences")
{
    for (double x : {1.0, 10.0}) {
        for (int m : {0, 1, 3, 8}) {
            const double h = 1e-5;
            const auto fd = oracle::central_diff([m](double t) { return hankel1(m, t); }, x, h);
            const auto recur = (m == 0 ? -hankel1(1, x) : hankel1(m - 1, x) - (double(m) / x) * hankel1(m, x));
            CAPTURE(x);
            CAPTURE(m);
            CHECK(std::abs(hankel1_derivative(m, x) - fd) <= 1e-6 * std::abs(fd));
            CHECK(std::abs(hankel1_derivative(m, x) - recur) <= 1e-12 * std::abs(recur));
            CHECK(bessel_j_derivative(m, x) == doctest::Approx(hankel1_derivative(m, x).real()).epsilon(1e-12));
            CHECK(bessel_y_derivative(m, x) == doctest::Approx(hankel1_derivative(m, x).imag()).epsilon(1e-12));
        }
    }
}

TEST_CASE("three-term recurrence holds for Hankel functions")
{
    const double x = 7.0;
    for (int m = 1; m < 30; ++m) {
        const auto lhs = hankel1(m - 1, x) + hankel1(m + 1, x);
        const auto rhs = (2.0 * m / x) * hankel1(m, x);
        CHECK(std::abs(lhs - rhs) <= 1e-11 * std::abs(rhs));
    }
}

TEST_CASE("sequences agree with the scalar functions")
{
    const int n = 40;
    for (double x : {0.3, 4.0, 60.0}) {
        std::vector<double> j(n + 1), y(n + 1);
        bessel_jy_sequence(n, x, j, y);
        const HankelSequence hs = hankel1_sequence(n, x);
        const BesselSequence bs = bessel_j_sequence(n, x);
        for (int m = 0; m <= n; ++m) {
            CAPTURE(x);
            CAPTURE(m);
            CHECK(j[m] == doctest::Approx(bessel_j(m, x)).epsilon(1e-12).scale(1e-300));
            CHECK(y[m] == doctest::Approx(bessel_y(m, x)).epsilon(1e-12));
            CHECK(std::abs(hs.h[m] - hankel1(m, x)) <= 1e-12 * std::abs(hankel1(m, x)));
            CHECK(std::abs(hs.dh[m] - hankel1_derivative(m, x)) <= 1e-12 * std::abs(hankel1_derivative(m, x)));
            CHECK(std::abs(bs.j[m] - bessel_j(m, x)) <= 1e-13 * std::max(1e-300, std::abs(bs.j[0])));
            CHECK(std::abs(bs.dj[m] - bessel_j_derivative(m, x)) <= 1e-13 * std::max(1.0, std::abs(bs.dj[0])));
        }
    }
}

TEST_CASE("cylinder pair")
{
    const CylinderPair p = bessel_jy01(2.5);
    CHECK(p.j0 == doctest::Approx(oracle::series_j(0, 2.5)).epsilon(1e-13));
    CHECK(p.j1 == doctest::Approx(oracle::series_j(1, 2.5)).epsilon(1e-13));
    CHECK(p.y0 == doctest::Approx(oracle::series_y0(2.5)).epsilon(1e-12));
    CHECK(reflect_sign(3) == -1.0);
    CHECK(reflect_sign(4) == 1.0);
}

TEST_CASE("domain errors")
{
    CHECK_THROWS_AS(bessel_j(-1, 1.0), std::domain_error);
    CHECK_THROWS_AS(bessel_y(0, 0.0), std::domain_error);
    CHECK_THROWS_AS(hankel1(0, -1.0), std::domain_error);
}
