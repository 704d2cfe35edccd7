#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyscatter/farfield.hpp"
#include "polyscatter/gmig.hpp"

namespace polyscatter {

struct StrengthEstimate {
    Vec xi;          // 2 tau xhat
    Direction x_hat;
    double tau = 0.0;
    Complex c_hat;   // estimate of the covariance strength transform at xi
    Complex r_hat;   // estimate of the relation strength transform at xi
    double c_se = 0.0;  // batch-means standard errors
    double r_se = 0.0;
    double Q = 0.0;
    std::size_t n_kappa = 0;
};

/// Number of contiguous kappa batches behind the standard errors.
inline constexpr std::size_t kEstimateBatches = 16;

/// Band-averaged estimators over kappa in [Q, 2Q] (trapezoid on the dataset lattice):
///   c_hat = n^2 2^m / |C_d|^2 * (1/Q) int kappa^{m+4n-d-1} U+(kappa + tau) conj U+(kappa)
///   r_hat = n^2 2^m / C_d^2   * (1/Q) int kappa^{m+4n-d-1} U+(kappa + tau) U-(kappa)
/// with U+(k) = u(xhat, -xhat, k) and U-(k) = u(-xhat, xhat, k).
StrengthEstimate strength_fourier_estimate(const SweepDataset& ds, const Direction& x_hat, double tau, double m, double Q);

/// Same estimator with an arbitrary weight exponent (for misweighting diagnostics).
StrengthEstimate strength_fourier_estimate_weighted(const SweepDataset& ds, const Direction& x_hat, double tau, double m,
                                                    double Q, double weight_exponent);

struct ExpectationReport {
    double kappa = 0.0;
    double tau = 0.0;
    std::size_t count = 0;
    Complex mean_c;   // mean of kappa^{m+4n-d-1} U+(kappa+tau) conj U+(kappa)
    double se_c = 0.0;
    Complex target_c;
    Complex mean_r;   // same with U-(kappa) unconjugated
    double se_r = 0.0;
    Complex target_r;
};

/// Monte-Carlo check of the Born-1 correlation identity
///   E[...] = C (kappa / (kappa + tau))^{2n-(d+1)/2} ahat(2 tau xhat),
/// C = |C_d|^2 / (n^2 2^m) for the covariance and C_d^2 / (n^2 2^m) for the relation.
ExpectationReport expectation_check(const PotentialSpec& spec, int n, const Direction& x_hat, double tau, double kappa,
                                    std::size_t n_realizations, std::uint64_t seed);

struct CoverageReport {
    double max_radius = 0.0;       // largest sampled |xi|
    double ring_spacing = 0.0;
    double dc_gap = 0.0;           // smallest nonzero |xi| when xi = 0 is absent
    double max_angular_gap = 0.0;  // radians, between neighbouring sampled directions
    bool flagged = false;
    std::vector<std::string> notes;
};

struct ReconstructionResult {
    std::vector<StrengthEstimate> estimates;
    RealField a_c;
    RealField a_r;
    double a_c_imag_max = 0.0;
    double a_r_imag_max = 0.0;
    CoverageReport coverage;
    /// Relative L2 errors against ground truth, negative when not supplied.
    double a_c_error = -1.0;
    double a_r_error = -1.0;
};

/// Polar-raster Fourier synthesis a(x) = (2 pi)^{-d} sum w(xi) ahat(xi) e^{i x.xi}.
/// Estimates must form a tau raster times a direction set. Hermitian symmetrization
/// precedes synthesis for both strengths. Throws CoverageError when the raster misses
/// the low frequencies or truncates a still-significant spectrum.
ReconstructionResult reconstruct_strengths(const std::vector<StrengthEstimate>& estimates, const GridSpec& target);

/// Adds relative L2 errors against known strengths.
void score_reconstruction(ReconstructionResult& result, const RealField& true_c, const RealField& true_r);

/// Fits m from the decay of the RMS of |U+| over directions:
/// |u| ~ kappa^{-(2n-(d+1)/2) - m/2}.
double fit_order_from_decay(const SweepDataset& ds);

}  // namespace polyscatter
