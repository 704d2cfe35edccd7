#include <doctest.h>

#include "polyscatter/error.hpp"
#include "polyscatter/oracle.hpp"
#include "support.hpp"

using namespace polyscatter;
using testing::rel_err;

TEST_CASE("series Bessel values") {
    const auto b = oracle::series_bessel({1.0, 0.0});
    CHECK(std::abs(b.j0 - 0.7651976865579666) < 1e-15);
    CHECK(std::abs(b.y0 - 0.08825696421567696) < 1e-15);
    CHECK(std::abs(b.j1 - 0.4400505857449335) < 1e-15);
    CHECK(std::abs(b.y1 + 0.7812128213002887) < 1e-15);
    CHECK(b.error_bound < 1e-15);
    CHECK(std::abs(oracle::series_bessel({1e-12, 0.0}).j0 - 1.0) < 1e-15);
}

TEST_CASE("series Bessel guards") {
    CHECK_THROWS_AS(oracle::series_bessel({0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(oracle::series_bessel({21.0, 0.0}), RadiusGuard);
    CHECK_THROWS_AS(oracle::hankel0({0.0, 25.0}), RadiusGuard);
}

TEST_CASE("oracle Hankel survives cancellation deep in the upper half-plane") {
    // H0(i y) = -(2i / pi) K0(y); J0 and Y0 are ~1e7 while H0 is ~1e-9 at y = 19.
    for (double y : {5.0, 12.0, 19.0}) {
        const Complex ref = Complex(0.0, -2.0 / kPi) * oracle::bessel_k0_integral({y, 0.0});
        CHECK(rel_err(oracle::hankel0({0.0, y}), ref) < 1e-13);
    }
}

TEST_CASE("K0 integral") {
    CHECK(std::abs(oracle::bessel_k0_integral({1.0, 0.0}) - 0.42102443824070834) < 1e-15);
    CHECK(std::abs(oracle::bessel_k0_integral({2.0, 0.0}) - 0.11389387274953344) < 1e-15);
    CHECK_THROWS_AS(oracle::bessel_k0_integral({0.0, 1.0}), DomainError);
}

TEST_CASE("green reference guards and origin") {
    CHECK_THROWS_AS(oracle::green_reference(1.0, 1.0, 1, 2), DomainError);
    CHECK_THROWS_AS(oracle::green_reference(1.0, 1.0, 2, 4), DomainError);
    CHECK_THROWS_AS(oracle::green_reference(-1.0, 1.0, 2, 3), DomainError);
    CHECK(rel_err(oracle::green_reference(0.0, 1.0, 2, 3), -Complex(1.0, 1.0) / (8 * kPi)) < 1e-15);
    CHECK(rel_err(oracle::green_reference(0.0, 2.0, 2, 2), Complex(0.0, -1.0 / 32.0)) < 1e-14);
}

TEST_CASE("direct volume potential size guard") {
    CHECK_THROWS_AS(oracle::direct_volume_potential(ComplexField(GridSpec(2, 1.0, 128)), 1.0, 2, {0}), SizeGuard);
    CHECK_THROWS_AS(oracle::direct_volume_potential(ComplexField(GridSpec(3, 1.0, 32)), 1.0, 2, {0}), SizeGuard);
}

TEST_CASE("gaussian transform") {
    CHECK(std::abs(oracle::gaussian_hat(0.5, 0.0, 2) - 2 * kPi * 0.25) < 1e-15);
    CHECK(std::abs(oracle::gaussian_hat(0.5, 8.0, 2) - 2 * kPi * 0.25 * std::exp(-8.0)) < 1e-18);
    CHECK(std::abs(oracle::gaussian_hat(1.0, 0.0, 3) - std::pow(2 * kPi, 1.5)) < 1e-13);
}

TEST_CASE("truncated reconstruction keeps band-limited fields") {
    const GridSpec g(2, 1.0, 16);
    RealField a(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec x = g.point(i);
        a[i] = 1.0 + std::cos(kPi * x[0]) + 0.5 * std::sin(2 * kPi * x[1]);
    }
    const RealField same = oracle::truncated_fourier_reconstruction(a, 7.0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(same[i] - a[i]) < 1e-13);
    const RealField low = oracle::truncated_fourier_reconstruction(a, 4.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec x = g.point(i);
        CHECK(std::abs(low[i] - (1.0 + std::cos(kPi * x[0]))) < 1e-13);
    }
}

TEST_CASE("direct fourier of a single cell") {
    const GridSpec g(2, 1.0, 8);
    ComplexField f(g);
    const std::size_t idx = g.flat_index({5, 2, 0});
    f[idx] = 1.0;
    const Vec xi{{1.3, -0.7, 0.0}};
    const Complex want = g.cell_volume() * std::exp(Complex(0.0, -dot(g.point(idx), xi)));
    CHECK(rel_err(oracle::direct_fourier(f, xi), want) < 1e-15);
}

TEST_CASE("Monte-Carlo statistics") {
    const auto s = oracle::mc_stats({Complex(1.0, 0.0), Complex(3.0, 2.0)});
    CHECK(s.count == 2);
    CHECK(std::abs(s.mean - Complex(2.0, 1.0)) < 1e-15);
    // Sample variance of |x - mean|^2 over n - 1: (2 + 2) / 1 = 4, SE = sqrt(4 / 2).
    CHECK(std::abs(s.std_error - std::sqrt(2.0)) < 1e-15);
    CHECK_THROWS_AS(oracle::mc_stats({Complex(1.0, 0.0)}), InsufficientSamples);
}
