#include <doctest.h>

#include "polyscatter/error.hpp"
#include "polyscatter/greens.hpp"
#include "polyscatter/oracle.hpp"
#include "support.hpp"

using namespace polyscatter;
using testing::rel_err;

TEST_CASE("root system values") {
    const RootSystem rs = root_system(2.0, 4);
    REQUIRE(rs.roots.size() == 4);
    for (int j = 0; j < 4; ++j) CHECK(rel_err(rs.roots[j], std::polar(2.0, j * kPi / 4)) < 1e-15);
    CHECK(rs.roots[0] == Complex(2.0, 0.0));
    CHECK(rs.roots[2] == Complex(0.0, 2.0));
    CHECK(root_system(1.0, 2).roots[1] == Complex(0.0, 1.0));
    for (const Complex& k : root_system(3.0, 5).roots) CHECK(k.imag() >= 0.0);
}

TEST_CASE("root system rejects invalid input") {
    CHECK_THROWS_AS(root_system(1.0, 1), DomainError);
    CHECK_THROWS_AS(root_system(0.0, 2), DomainError);
    CHECK_THROWS_AS(root_system(-1.0, 2), DomainError);
}

TEST_CASE("factored symbol equals z^n - kappa^2n") {
    testing::Gen gen(21);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = gen.integer(2, 6);
        const double kappa = gen.log_uniform(0.1, 50.0);
        const RootSystem rs = root_system(kappa, n);
        const Complex z = kappa * kappa * gen.cnormal();
        const Complex want = std::pow(z, n) - std::pow(kappa, 2 * n);
        const double scale = std::max(std::abs(want), std::pow(kappa, 2 * n));
        CHECK(std::abs(factored_symbol(rs, z) - want) / scale < 1e-12);
    }
}

TEST_CASE("splitting weights give the partial fractions of the inverse symbol") {
    testing::Gen gen(22);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = gen.integer(2, 6);
        const double kappa = gen.log_uniform(0.3, 20.0);
        const RootSystem rs = root_system(kappa, n);
        const auto c = splitting_weights(rs);
        const Complex z = kappa * kappa * gen.cnormal();
        Complex sum = 0.0, total = 0.0;
        for (int j = 0; j < n; ++j) {
            sum += c[j] / (z - rs.roots[j] * rs.roots[j]);
            total += c[j];
        }
        CHECK(rel_err(sum, 1.0 / (std::pow(z, n) - std::pow(kappa, 2 * n))) < 1e-11);
        CHECK(std::abs(total) < 1e-13 * std::abs(c[0]) * n);
    }
}

TEST_CASE("Vandermonde determinant matches elimination on the explicit matrix") {
    for (int n : {2, 3, 4, 5})
        for (double kappa : {0.5, 2.0}) {
            const RootSystem rs = root_system(kappa, n);
            std::vector<std::vector<Complex>> V(n, std::vector<Complex>(n));
            for (int l = 0; l < n; ++l)
                for (int j = 0; j < n; ++j) V[l][j] = std::pow(rs.roots[j] * rs.roots[j], l);
            Complex det = 1.0;
            for (int col = 0; col < n; ++col) {
                int piv = col;
                for (int r = col + 1; r < n; ++r)
                    if (std::abs(V[r][col]) > std::abs(V[piv][col])) piv = r;
                if (piv != col) {
                    std::swap(V[piv], V[col]);
                    det = -det;
                }
                det *= V[col][col];
                for (int r = col + 1; r < n; ++r) {
                    const Complex f = V[r][col] / V[col][col];
                    for (int c = col; c < n; ++c) V[r][c] -= f * V[col][c];
                }
            }
            CHECK(rel_err(vandermonde_determinant(rs), det) < 1e-12);
            CHECK(std::abs(det) > 0.0);
        }
}

TEST_CASE("3D Green function at r = 1 for n = 2, kappa = 1") {
    // -(Phi(1, 1) - Phi(1, i)) / 2 with Phi(r, k) = e^{ikr} / (4 pi r).
    const Complex want(-0.00686048780463611, -0.0334810666751455);
    CHECK(rel_err(green(1.0, root_system(1.0, 2), 3), want) < 1e-13);
}

TEST_CASE("Green function agrees with the multiprecision reference") {
    testing::Gen gen(23);
    for (int trial = 0; trial < 120; ++trial) {
        const int d = gen.integer(2, 3);
        const int n = gen.integer(2, 4);
        const double kappa = gen.log_uniform(0.5, 8.0);
        const double r = gen.log_uniform(1e-4, 15.0 / kappa);
        const Complex want = oracle::green_reference(r, kappa, n, d);
        CHECK(rel_err(green(r, root_system(kappa, n), d), want) < 1e-11);
    }
}

TEST_CASE("Green function is continuous across the small-r branch") {
    for (int n : {2, 3, 4})
        for (double kappa : {1.0, 4.0}) {
            const RootSystem rs = root_system(kappa, n);
            const double r0 = 0.5 / kappa;
            const Complex a = green(r0 * (1 - 1e-12), rs, 3);
            const Complex b = green(r0 * (1 + 1e-12), rs, 3);
            CHECK(rel_err(a, b) < 1e-12);
        }
}

TEST_CASE("origin limits") {
    for (double kappa : {0.5, 1.0, 3.0}) {
        const Complex g3 = green_origin_limit(root_system(kappa, 2), 3);
        CHECK(rel_err(g3, -Complex(1.0, 1.0) / (8 * kPi * kappa)) < 1e-14);
        const Complex g2 = green_origin_limit(root_system(kappa, 2), 2);
        CHECK(rel_err(g2, Complex(0.0, -1.0) / (8 * kappa * kappa)) < 1e-14);
    }
    for (int d : {2, 3})
        for (int n : {2, 3, 5}) {
            const RootSystem rs = root_system(2.0, n);
            CHECK(rel_err(green(1e-7, rs, d), green_origin_limit(rs, d)) < 1e-6);
            CHECK(rel_err(green_origin_limit(rs, d), oracle::green_reference(0.0, 2.0, n, d)) < 1e-12);
        }
    CHECK_THROWS_AS(green(0.0, root_system(1.0, 2), 2), DomainError);
}

TEST_CASE("far-field constants and prefactors") {
    CHECK(rel_err(farfield_constant(2).value, Complex(0.1410473958869391, 0.1410473958869391)) < 1e-15);
    CHECK(rel_err(farfield_constant(3).value, Complex(1.0 / (4 * kPi), 0.0)) < 1e-15);
    CHECK(rel_err(farfield_prefactor(root_system(1.0, 2), 3), Complex(-1.0 / (8 * kPi), 0.0)) < 1e-15);
    CHECK(rel_err(farfield_prefactor(root_system(4.0, 2), 2), -0.14104739588693907 / 64.0 * Complex(1.0, 1.0)) < 1e-14);
    CHECK_THROWS_AS(farfield_constant(4), DomainError);
}

TEST_CASE("far-field kernel is the prefactor times a plane-wave phase") {
    testing::Gen gen(24);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = gen.integer(2, 3);
        const RootSystem rs = root_system(gen.uniform(1.0, 10.0), gen.integer(2, 4));
        const Direction xh = d == 2 ? Direction::planar(gen.uniform(0, 2 * kPi))
                                    : Direction::spherical(gen.uniform(0, kPi), gen.uniform(0, 2 * kPi));
        const Vec y{{gen.normal(), gen.normal(), d == 3 ? gen.normal() : 0.0}};
        const Complex k = farfield_kernel(xh, y, rs, d);
        const Complex p = farfield_prefactor(rs, d);
        CHECK(std::abs(std::abs(k) - std::abs(p)) < 1e-14 * std::abs(p));
        CHECK(rel_err(k, p * std::exp(Complex(0.0, -rs.kappa * dot(xh.vec(), y)))) < 1e-13);
    }
}

TEST_CASE("Green function approaches the far-field form at large distance") {
    for (int d : {2, 3})
        for (int n : {2, 3}) {
            const RootSystem rs = root_system(3.0, n);
            const Direction xh = Direction::planar(0.4);
            const Vec y{{0.2, -0.1, 0.0}};
            const double R = 1e4;
            const Complex lead =
                green(norm(R * xh.vec() - y), rs, d) * std::pow(R, 0.5 * (d - 1)) * std::exp(Complex(0.0, -3.0 * R));
            CHECK(rel_err(lead, farfield_kernel(xh, y, rs, d)) < 1e-4);
        }
}
