#pragma once

#include <vector>

#include "polyscatter/types.hpp"

namespace polyscatter {

/// Roots kappa_j = kappa * exp(i j pi / n), j = 0..n-1, splitting
/// (-Delta)^n - kappa^{2n} into n Helmholtz factors.
struct RootSystem {
    double kappa = 1.0;
    int n = 2;
    std::vector<Complex> roots;
};

RootSystem root_system(double kappa, int n);

/// z^n - kappa^{2n} evaluated through the product of (z - kappa_l^2).
Complex factored_symbol(const RootSystem& rs, Complex z);

/// Coefficients c_j with sum_j c_j / (z - kappa_j^2) = 1 / (z^n - kappa^{2n});
/// c_j = kappa_j^2 / (n kappa^{2n}).
std::vector<Complex> splitting_weights(const RootSystem& rs);

/// Determinant of the Vandermonde matrix V_{lj} = (kappa_j^2)^l.
Complex vandermonde_determinant(const RootSystem& rs);

/// Radial Green function -(1/(n kappa^{2n})) sum_j kappa_j^2 Phi(r, kappa_j).
/// Near the origin the d = 3 sum is summed as a Taylor series to avoid cancellation.
Complex green(double r, const RootSystem& rs, int d);

/// Limit of green(r) as r -> 0+. Finite for n >= 2 in both dimensions.
Complex green_origin_limit(const RootSystem& rs, int d);

struct FarFieldConstant {
    int d = 2;
    Complex value;
};

/// C_2 = exp(i pi/4) / sqrt(8 pi), C_3 = 1 / (4 pi).
FarFieldConstant farfield_constant(int d);

/// Coefficient multiplying exp(-i kappa xhat.y) in the leading term of G at large |x|:
/// -(C_d / n) kappa^{-(2n - (d+1)/2)}.
Complex farfield_prefactor(const RootSystem& rs, int d);

/// Far-field kernel: G(x, y) ~ e^{i kappa |x|} / |x|^{(d-1)/2} * farfield_kernel(xhat, y).
Complex farfield_kernel(const Direction& x_hat, const Vec& y, const RootSystem& rs, int d);

}  // namespace polyscatter
