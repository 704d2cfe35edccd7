#include "polyscatter/special_fn.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace polyscatter::special {
namespace {

constexpr double kEuler = 0.57721566490153286060651209008240243;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSeriesRadius = 2.5;
constexpr double kAsymptoticRadius = 30.0;
constexpr double kCertifiedTolerance = 1e-11;
const Complex kI{0.0, 1.0};

// Signed zeros matter: log(-x - 0i) lands on the wrong side of the cut.
Complex checked_argument(Complex z, const char* name) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DomainError(std::string(name) + ": non-finite argument");
    }
    const double mag = std::abs(z);
    if (mag == 0.0) throw DomainError(std::string(name) + ": logarithmic singularity at z = 0");
    if (z.imag() < -16.0 * kEps * mag) {
        throw DomainError(std::string(name) + ": argument must lie in the closed upper half-plane");
    }
    if (z.imag() <= 0.0) z = Complex(z.real(), 0.0);
    return z;
}

Complex finite_or_throw(Complex v, const char* name) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw AccuracyError(std::string(name) + ": evaluation produced a non-finite value");
    }
    return v;
}

// J0 + iY0 and J1 + iY1 from their ascending series.
Complex series_h0(Complex z) {
    const Complex q = -0.25 * z * z;
    Complex term = 1.0;
    Complex j0 = 1.0;
    Complex tail = 0.0;  // sum_{k>=1} H_k t_k
    double harmonic = 0.0;
    double magnitude = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= q / (double(k) * double(k));
        harmonic += 1.0 / k;
        j0 += term;
        tail += harmonic * term;
        magnitude += std::abs(term) * (1.0 + harmonic);
        if (std::abs(term) * (1.0 + harmonic) < 1e-18 * std::abs(j0)) break;
    }
    const Complex log_part = std::log(0.5 * z) + kEuler;
    const Complex y0 = (2.0 / kPi) * (log_part * j0 - tail);
    const Complex h0 = j0 + kI * y0;
    const double bound = 8.0 * kEps * magnitude * (1.0 + std::abs(log_part)) / std::abs(h0);
    if (bound > kCertifiedTolerance) throw AccuracyError("hankel0_first: series cancellation exceeds tolerance");
    return h0;
}

Complex series_h1(Complex z) {
    const Complex q = -0.25 * z * z;
    const Complex half = 0.5 * z;
    Complex term = half;  // (z/2)^{2k+1} (-1)^k / (k! (k+1)!)
    Complex j1 = term;
    double psi_sum = -2.0 * kEuler + 1.0;  // psi(1) + psi(2)
    Complex tail = psi_sum * term;
    double magnitude = std::abs(term) * (1.0 + std::abs(psi_sum));
    double hk = 0.0;
    for (int k = 1; k < 200; ++k) {
        term *= q / (double(k) * double(k + 1));
        hk += 1.0 / k;
        // psi(k+1) + psi(k+2) = -2 gamma + 2 H_k + 1/(k+1)
        psi_sum = -2.0 * kEuler + 2.0 * hk + 1.0 / (k + 1);
        j1 += term;
        tail += psi_sum * term;
        magnitude += std::abs(term) * (1.0 + std::abs(psi_sum));
        if (std::abs(term) * (1.0 + std::abs(psi_sum)) < 1e-18 * std::abs(j1)) break;
    }
    const Complex y1 = -2.0 / (kPi * z) + (2.0 / kPi) * std::log(half) * j1 - tail / kPi;
    const Complex h1 = j1 + kI * y1;
    const double bound = 8.0 * kEps * (magnitude * (1.0 + std::abs(std::log(half))) + 1.0 / std::abs(z)) / std::abs(h1);
    if (bound > kCertifiedTolerance) throw AccuracyError("hankel1_first: series cancellation exceeds tolerance");
    return h1;
}

// H_nu(z) = sqrt(2/(pi z)) e^{i(z - nu pi/2 - pi/4)} / Gamma(nu + 1/2)
//           * int_{-inf}^{inf} t^{2 nu} e^{-t^2} (1 + i t^2 / (2z))^{nu - 1/2} dt.
// The integrand is analytic in |Im t| < sqrt(|z|), so the trapezoidal rule
// converges geometrically in 1/step.
Complex integral_hankel(Complex z, int order) {
    const double strip = std::min(0.8 * std::sqrt(std::abs(z)), 4.0);
    constexpr double kLogTarget = 40.0;
    const double step = 2.0 * kPi * strip / (strip * strip + kLogTarget);
    const double bound = 2.0 * std::sqrt(kPi) * std::exp(-kLogTarget);
    if (bound > kCertifiedTolerance) throw AccuracyError("Hankel integral: step too coarse");
    constexpr double kCutoff = 6.5;
    const Complex scale = kI / (2.0 * z);
    const double exponent = order == 0 ? -0.5 : 0.5;

    auto integrand = [&](double t) {
        const double t2 = t * t;
        const Complex factor = std::pow(1.0 + scale * t2, exponent);
        const double weight = order == 0 ? std::exp(-t2) : t2 * std::exp(-t2);
        return weight * factor;
    };

    Complex sum = 0.5 * integrand(0.0);
    for (int k = 1;; ++k) {
        const double t = k * step;
        if (t > kCutoff) break;
        sum += integrand(t);
    }
    sum *= 2.0 * step;

    const double gamma = order == 0 ? std::sqrt(kPi) : 0.5 * std::sqrt(kPi);
    const Complex phase = std::exp(kI * (z - 0.5 * order * kPi - 0.25 * kPi));
    return std::sqrt(2.0 / (kPi * z)) * phase * sum / gamma;
}

Complex asymptotic_hankel(Complex z, int order) {
    const double mu = 4.0 * order * order;
    Complex term = 1.0;
    Complex sum = 1.0;
    double previous = 1.0;
    bool converged = false;
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= kI * (mu - odd * odd) / (8.0 * k * z);
        const double mag = std::abs(term);
        if (mag > previous) break;  // past the smallest term
        sum += term;
        previous = mag;
        if (mag < 1e-17) {
            converged = true;
            break;
        }
    }
    if (!converged && previous > kCertifiedTolerance) {
        throw AccuracyError("Hankel asymptotic expansion cannot reach tolerance at this radius");
    }
    const Complex phase = std::exp(kI * (z - 0.5 * order * kPi - 0.25 * kPi));
    return std::sqrt(2.0 / (kPi * z)) * phase * sum;
}

Complex hankel_first(Complex z, int order, const char* name) {
    z = checked_argument(z, name);
    const double mag = std::abs(z);
    Complex value;
    if (mag <= kSeriesRadius) {
        value = order == 0 ? series_h0(z) : series_h1(z);
    } else if (mag <= kAsymptoticRadius) {
        value = integral_hankel(z, order);
    } else {
        value = asymptotic_hankel(z, order);
    }
    return finite_or_throw(value, name);
}

}  // namespace

Complex hankel0_first(Complex z) { return hankel_first(z, 0, "hankel0_first"); }

Complex hankel1_first(Complex z) { return hankel_first(z, 1, "hankel1_first"); }

Complex helmholtz_fundamental(double r, Complex kappa_j, int d) {
    require_dimension(d);
    if (!(r > 0.0)) throw DomainError("helmholtz_fundamental: r must be positive");
    if (kappa_j.imag() < -16.0 * kEps * std::abs(kappa_j)) {
        throw DomainError("helmholtz_fundamental: wavenumber must have Im >= 0");
    }
    if (d == 2) return 0.25 * kI * hankel0_first(kappa_j * r);
    return finite_or_throw(std::exp(kI * kappa_j * r) / (4.0 * kPi * r), "helmholtz_fundamental");
}

}  // namespace polyscatter::special
