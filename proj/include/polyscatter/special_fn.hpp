#pragma once

#include "polyscatter/types.hpp"

namespace polyscatter::special {

/// Hankel function of the first kind, order zero, H0(z) = J0(z) + i Y0(z).
///
/// Defined on the closed upper half-plane minus the origin (the only region the
/// root wavenumbers kappa_j * r ever reach). Three evaluation paths:
///   |z| <= 2.5       ascending series for J0 and Y0
///   2.5 < |z| <= 30  Hankel's Laplace-type integral, trapezoidal rule
///   |z| > 30         large-argument asymptotic expansion
/// Relative accuracy is ~1e-14 throughout. Throws DomainError for z = 0 or
/// Im z < 0, AccuracyError if a path cannot certify 1e-11.
Complex hankel0_first(Complex z);

/// Order-one companion, H1(z) = J1(z) + i Y1(z) = -H0'(z). Same domain and paths.
Complex hankel1_first(Complex z);

/// Outgoing fundamental solution of the Helmholtz operator with wavenumber kappa_j:
/// (i/4) H0(kappa_j r) for d = 2, exp(i kappa_j r) / (4 pi r) for d = 3.
Complex helmholtz_fundamental(double r, Complex kappa_j, int d);

}  // namespace polyscatter::special
