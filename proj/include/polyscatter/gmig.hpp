#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "polyscatter/grid.hpp"

namespace polyscatter {

/// Isotropic C-infinity bump: amplitude * exp(1 - 1 / (1 - |x - c|^2 / R^2)) inside
/// the ball, zero outside. Peak value equals the amplitude.
struct Bump {
    double amplitude = 1.0;
    Vec center;
    double radius = 0.25;

    double operator()(const Vec& x) const;
};

RealField sample_bump(const Bump& b, const GridSpec& spec);

/// Strengths and orders of the real and imaginary parts of rho.
struct PotentialSpec {
    RealField a1;
    double m1 = 2.0;
    RealField a2;
    double m2 = 2.0;

    /// Leading order m = min(m1, m2).
    double order() const { return std::min(m1, m2); }
    /// Leading strength of the covariance operator.
    RealField strength_c() const;
    /// Leading strength of the relation operator.
    RealField strength_r() const;
};

/// Admissible orders for the forward problem: (d - 2n + 1, d].
bool order_admissible(double m, int d, int n);
/// Reconstruction condition m > (4d - 4n + 2) / 3.
bool reconstruction_condition(double m, int d, int n);

/// Throws ValidationError on negative strengths, support outside the safe ball,
/// grid mismatch or inadmissible orders.
void validate_potential(const PotentialSpec& p, int n);

PotentialSpec make_potential(const GridSpec& spec, const std::vector<Bump>& a1, double m1,
                             const std::vector<Bump>& a2, double m2);

/// Deterministic child seed for a numbered stream.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// sqrt(a) * Re IFFT(|xi|^{-m/2} FFT(W)), W white noise of variance 1/h^d per cell,
/// xi = 0 mode removed.
RealField sample_real_gmig(const RealField& a, double m, std::uint64_t seed);

struct PotentialRealization {
    ComplexField rho;
    PotentialSpec spec;
    std::uint64_t seed = 0;
};

/// rho = rho1 + i rho2 from two independent child seeds. A zero a2 gives a purely real field.
PotentialRealization sample_complex_gmig(const PotentialSpec& spec, std::uint64_t seed);

struct SymbolEstimate {
    Complex mean;
    double std_error = 0.0;
    std::size_t count = 0;
};

enum class SymbolKind { covariance, relation };

/// Monte-Carlo estimate of E[rhohat(xi) conj rhohat(xi)] or E[rhohat(xi) rhohat(-xi)].
SymbolEstimate empirical_symbol(const std::vector<PotentialRealization>& realizations, const Vec& xi,
                                SymbolKind kind);

/// Integral of a real field over the box.
double integrate(const RealField& f);

}  // namespace polyscatter
