#include <doctest.h>

#include <limits>

#include "polyscatter/error.hpp"
#include "polyscatter/oracle.hpp"
#include "polyscatter/special_fn.hpp"
#include "support.hpp"

using namespace polyscatter;
using special::hankel0_first;
using special::hankel1_first;
using testing::rel_err;

TEST_CASE("hankel0 at reference points") {
    CHECK(rel_err(hankel0_first({1.0, 0.0}), {0.7651976865579666, 0.08825696421567696}) < 1e-14);
    CHECK(rel_err(hankel0_first({0.0, 1.0}), {0.0, -0.2680324820339885}) < 1e-14);
    CHECK(rel_err(hankel0_first({10.0, 0.0}), {-0.2459357644513483, 0.05567116728359939}) < 1e-13);
    CHECK(rel_err(hankel0_first({50.0, 0.0}), {0.05581232766925182, -0.09806499547007708}) < 1e-13);
}

TEST_CASE("hankel1 at reference points") {
    CHECK(rel_err(hankel1_first({1.0, 0.0}), {0.4400505857449335, -0.7812128213002887}) < 1e-14);
    CHECK(rel_err(hankel1_first({10.0, 0.0}), {0.04347274616886144, 0.2490154242069539}) < 1e-13);
}

TEST_CASE("hankel0 rejects points off its domain") {
    CHECK_THROWS_AS(hankel0_first({0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(hankel0_first({1.0, -0.1}), DomainError);
    CHECK_THROWS_AS(hankel0_first({std::numeric_limits<double>::quiet_NaN(), 1.0}), DomainError);
    CHECK_THROWS_AS(hankel1_first({0.0, 0.0}), DomainError);
    // Rounding-level negative imaginary parts are accepted.
    CHECK_NOTHROW(hankel0_first({3.0, -1e-17}));
}

TEST_CASE("hankel0 agrees with the multiprecision series on random upper half-plane points") {
    testing::Gen gen(11);
    for (int i = 0; i < 300; ++i) {
        const Complex z = gen.upper(1e-3, 20.0);
        CHECK(rel_err(hankel0_first(z), oracle::hankel0(z)) < 1e-12);
    }
}

TEST_CASE("hankel1 agrees with the multiprecision series") {
    testing::Gen gen(12);
    for (int i = 0; i < 100; ++i) {
        const Complex z = gen.upper(1e-2, 20.0);
        CHECK(rel_err(hankel1_first(z), oracle::hankel1(z)) < 1e-12);
    }
}

TEST_CASE("Wronskian J1 Y0 - J0 Y1 = 2 / (pi x) across all evaluation paths") {
    for (double x = 0.05; x < 200.0; x *= 1.13) {
        const Complex h0 = hankel0_first({x, 0.0});
        const Complex h1 = hankel1_first({x, 0.0});
        const double w = h1.real() * h0.imag() - h0.real() * h1.imag();
        CHECK(std::abs(w * kPi * x / 2.0 - 1.0) < 1e-12);
    }
}

TEST_CASE("derivative identity H0' = -H1") {
    testing::Gen gen(13);
    for (int i = 0; i < 100; ++i) {
        const Complex z = gen.upper(0.5, 100.0);
        const double h = 1e-5 * std::abs(z);
        const Complex d = (hankel0_first(z + h) - hankel0_first(z - h)) / (2.0 * h);
        CHECK(rel_err(d, -hankel1_first(z)) < 1e-6);
    }
}

TEST_CASE("path seams are continuous") {
    for (double radius : {2.5, 30.0})
        for (double angle : {0.0, 0.3, 1.2, kPi / 2, 2.5, kPi}) {
            const Complex dir = std::polar(1.0, angle);
            const double eps = 1e-9;
            const Complex inner = hankel0_first((radius - eps) * dir);
            const Complex outer = hankel0_first((radius + eps) * dir);
            const Complex slope = -hankel1_first(radius * dir) * dir;
            CHECK(std::abs(outer - inner - 2 * eps * slope) < 1e-12 * std::abs(inner));
        }
}

TEST_CASE("modulus decays monotonically along rays into the upper half-plane") {
    for (double angle : {kPi / 4, kPi / 3, kPi / 2, 2 * kPi / 3, 3 * kPi / 4}) {
        double prev = std::abs(hankel0_first(std::polar(1.0, angle)));
        for (double t = 1.5; t <= 60.0; t += 0.5) {
            const double cur = std::abs(hankel0_first(std::polar(t, angle)));
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("imaginary axis matches the K0 integral") {
    for (double y : {0.1, 0.5, 1.0, 3.0, 9.0}) {
        const Complex ref = Complex(0.0, -2.0 / kPi) * oracle::bessel_k0_integral({y, 0.0});
        CHECK(rel_err(hankel0_first({0.0, y}), ref) < 1e-12);
    }
}

TEST_CASE("helmholtz fundamental solutions") {
    CHECK(rel_err(special::helmholtz_fundamental(1.0, 1.0, 2), Complex(0.0, 0.25) * hankel0_first(1.0)) < 1e-15);
    CHECK(rel_err(special::helmholtz_fundamental(1.0, 1.0, 3), std::exp(Complex(0.0, 1.0)) / (4 * kPi)) < 1e-15);
    CHECK(rel_err(special::helmholtz_fundamental(2.0, Complex(0.0, 1.0), 3), Complex(std::exp(-2.0) / (8 * kPi), 0.0)) <
          1e-15);
    CHECK_THROWS_AS(special::helmholtz_fundamental(0.0, 1.0, 2), DomainError);
    CHECK_THROWS_AS(special::helmholtz_fundamental(1.0, Complex(1.0, -1.0), 3), DomainError);
}

TEST_CASE("2D fundamental solution satisfies the radial Helmholtz equation") {
    // u'' + u'/r + k^2 u = 0, derivatives by central differences.
    testing::Gen gen(14);
    for (int i = 0; i < 50; ++i) {
        const double r = gen.log_uniform(0.05, 10.0);
        const Complex k = std::polar(gen.uniform(0.5, 8.0), gen.uniform(0.0, kPi / 2));
        const double h = 1e-3 * std::min(r, 1.0 / std::abs(k));
        auto u = [&](double s) { return special::helmholtz_fundamental(s, k, 2); };
        const Complex d1 = (u(r + h) - u(r - h)) / (2 * h);
        const Complex d2 = (u(r + h) - 2.0 * u(r) + u(r - h)) / (h * h);
        const Complex lhs = d2 + d1 / r + k * k * u(r);
        CHECK(std::abs(lhs) < 1e-5 * (std::abs(k * k * u(r)) + std::abs(d2) + std::abs(d1 / r)));
    }
}

TEST_CASE("3D fundamental solution satisfies the radial Helmholtz equation") {
    testing::Gen gen(15);
    for (int i = 0; i < 50; ++i) {
        const double r = gen.log_uniform(0.05, 10.0);
        const Complex k = std::polar(gen.uniform(0.5, 8.0), gen.uniform(0.0, kPi / 2));
        const double h = 1e-3 * std::min(r, 1.0 / std::abs(k));
        auto u = [&](double s) { return special::helmholtz_fundamental(s, k, 3); };
        const Complex d1 = (u(r + h) - u(r - h)) / (2 * h);
        const Complex d2 = (u(r + h) - 2.0 * u(r) + u(r - h)) / (h * h);
        const Complex lhs = d2 + 2.0 * d1 / r + k * k * u(r);
        CHECK(std::abs(lhs) < 1e-5 * (std::abs(k * k * u(r)) + std::abs(d2) + std::abs(d1 / r)));
    }
}
