#include "polyscatter/greens.hpp"

#include <cmath>

#include "polyscatter/special_fn.hpp"

namespace polyscatter {
namespace {

const Complex kI{0.0, 1.0};
constexpr double kTaylorRadius = 0.5;

// S_q = sum_j kappa_j^q
Complex power_sum(const RootSystem& rs, int q) {
    Complex s = 0.0;
    for (int j = 0; j < rs.n; ++j) s += std::polar(std::pow(rs.kappa, q), q * j * kPi / rs.n);
    return s;
}

}  // namespace

RootSystem root_system(double kappa, int n) {
    if (n < 2) throw DomainError("root_system: n must be >= 2");
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw DomainError("root_system: kappa must be positive and finite");
    RootSystem rs;
    rs.kappa = kappa;
    rs.n = n;
    rs.roots.reserve(n);
    for (int j = 0; j < n; ++j) {
        if (j == 0) {
            rs.roots.emplace_back(kappa, 0.0);
        } else if (2 * j == n) {
            rs.roots.emplace_back(0.0, kappa);
        } else {
            rs.roots.push_back(std::polar(kappa, j * kPi / n));
        }
    }
    return rs;
}

Complex factored_symbol(const RootSystem& rs, Complex z) {
    Complex p = 1.0;
    for (const Complex& k : rs.roots) p *= z - k * k;
    return p;
}

std::vector<Complex> splitting_weights(const RootSystem& rs) {
    const double k2n = std::pow(rs.kappa, 2 * rs.n);
    std::vector<Complex> w;
    w.reserve(rs.n);
    for (const Complex& k : rs.roots) w.push_back(k * k / (rs.n * k2n));
    return w;
}

Complex vandermonde_determinant(const RootSystem& rs) {
    Complex det = 1.0;
    for (int i = 0; i < rs.n; ++i) {
        for (int j = i + 1; j < rs.n; ++j) det *= rs.roots[j] * rs.roots[j] - rs.roots[i] * rs.roots[i];
    }
    return det;
}

Complex green(double r, const RootSystem& rs, int d) {
    require_dimension(d);
    if (!(r > 0.0)) throw DomainError("green: r must be positive");
    const double k2n = std::pow(rs.kappa, 2 * rs.n);

    if (d == 3 && rs.kappa * r < kTaylorRadius) {
        // e^{i kappa_j r} / r expanded; the 1/r term cancels because S_2 = 0.
        Complex sum = 0.0;
        Complex ip = 1.0;
        double rp = 1.0 / r;
        double fact = 1.0;
        for (int p = 1; p < 40; ++p) {
            ip *= kI;
            rp *= r;
            fact *= p;
            sum += ip * rp / fact * power_sum(rs, p + 2);
            // Many power sums vanish, so stop on the term bound rather than the term.
            const double bound = rs.n * std::pow(rs.kappa, p + 2) * rp / fact;
            if (bound < 1e-18 * std::abs(sum)) break;
        }
        return -sum / (4.0 * kPi * rs.n * k2n);
    }

    Complex sum = 0.0;
    for (const Complex& k : rs.roots) sum += k * k * special::helmholtz_fundamental(r, k, d);
    return -sum / (rs.n * k2n);
}

Complex green_origin_limit(const RootSystem& rs, int d) {
    require_dimension(d);
    const double k2n = std::pow(rs.kappa, 2 * rs.n);
    if (d == 3) return -kI * power_sum(rs, 3) / (4.0 * kPi * rs.n * k2n);
    Complex s = 0.0;
    for (int j = 0; j < rs.n; ++j) s += double(j) * rs.roots[j] * rs.roots[j];
    return kI * s / (2.0 * rs.n * rs.n * k2n);
}

FarFieldConstant farfield_constant(int d) {
    require_dimension(d);
    if (d == 2) return {2, std::polar(1.0 / std::sqrt(8.0 * kPi), kPi / 4.0)};
    return {3, Complex(1.0 / (4.0 * kPi), 0.0)};
}

Complex farfield_prefactor(const RootSystem& rs, int d) {
    const Complex c = farfield_constant(d).value;
    return -(c / double(rs.n)) * std::pow(rs.kappa, -(2.0 * rs.n - 0.5 * (d + 1)));
}

Complex farfield_kernel(const Direction& x_hat, const Vec& y, const RootSystem& rs, int d) {
    return farfield_prefactor(rs, d) * std::exp(-kI * rs.kappa * dot(x_hat.vec(), y));
}

}  // namespace polyscatter
