#pragma once

#include <string>
#include <vector>

#include "polyscatter/grid.hpp"

// Reference computations for tests and `verify`. Nothing here calls the
// production special-function, kernel or FFT paths.
namespace polyscatter::oracle {

struct OracleReport {
    std::string quantity;
    std::vector<Complex> values;
    std::string method;
    double error_estimate = 0.0;
};

struct BesselValues {
    Complex j0;
    Complex y0;
    Complex j1;
    Complex y1;
    double error_bound = 0.0;  // relative, for H0 = J0 + i Y0
};

/// J0, Y0, J1, Y1 from ascending series in 50-digit arithmetic. |z| <= 20, z != 0.
BesselValues series_bessel(Complex z);

/// H0(z) = J0 + i Y0 summed in 50-digit arithmetic, then rounded to double.
Complex hankel0(Complex z);

/// H1(z) = J1 + i Y1, same construction.
Complex hankel1(Complex z);

/// K0(z) = int_0^inf exp(-z cosh t) dt, Re z > 0, by the trapezoidal rule.
Complex bessel_k0_integral(Complex z);

/// Polyharmonic Green function from the oracle Hankel values (d = 2) or the
/// closed form in 50-digit arithmetic (d = 3); r = 0 gives the limit value.
Complex green_reference(double r, double kappa, int n, int d);

/// h^d sum_y G(|x - y|) phi(y) at the listed flat indices, over the whole grid,
/// without periodization. N <= 64 for d = 2, N <= 16 for d = 3.
std::vector<Complex> direct_volume_potential(const ComplexField& phi, double kappa, int n,
                                             const std::vector<std::size_t>& points);

/// (2 pi s^2)^{d/2} exp(-s^2 |xi|^2 / 2), the transform of exp(-|x|^2 / (2 s^2)).
double gaussian_hat(double s, double xi_norm, int d);

/// Ideal low-pass of a grid field to |xi| <= radius, via direct separable DFTs.
RealField truncated_fourier_reconstruction(const RealField& a, double radius);

/// h^d sum_x f(x) e^{-i x.xi} with long double accumulation.
Complex direct_fourier(const ComplexField& f, const Vec& xi);

struct McStats {
    Complex mean;
    double std_error = 0.0;
    std::size_t count = 0;
};

McStats mc_stats(const std::vector<Complex>& samples);

}  // namespace polyscatter::oracle
