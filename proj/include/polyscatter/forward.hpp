#pragma once

#include <cstdint>
#include <vector>

#include "polyscatter/gmig.hpp"
#include "polyscatter/grid.hpp"

namespace polyscatter {

struct SolveConfig {
    double tol = 1e-8;
    int max_iter = 200;
    /// Born order used by far-field sweeps; 0 means solve to convergence.
    int born_order = 0;
    /// Restarted GMRES instead of fixed-point iteration.
    bool krylov = false;
    int krylov_restart = 30;
};

void validate_solve_config(const SolveConfig& cfg);

struct WaveField {
    ComplexField values;
    Direction theta;
    double kappa = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// Samples exp(i kappa x.theta).
ComplexField incident_wave(const Direction& theta, double kappa, const GridSpec& spec);

/// H and K = H M_rho at one wavenumber. rho is masked to the safe ball on construction.
class ScatteringOperator {
public:
    ScatteringOperator(const ComplexField& rho, const RootSystem& rs);

    const RootSystem& roots() const { return kernel_.roots(); }
    const GridSpec& spec() const { return kernel_.spec(); }
    const ComplexField& rho() const { return rho_; }
    double kappa() const { return kernel_.roots().kappa; }

    ComplexField apply_H(const ComplexField& phi) const { return kernel_.convolve(phi); }
    ComplexField apply_K(const ComplexField& u) const;
    ComplexField apply_K_adjoint(const ComplexField& v) const;

private:
    PeriodizedKernel kernel_;
    ComplexField rho_;
};

/// One-shot volume potential (builds the kernel).
ComplexField apply_H(const ComplexField& phi, const RootSystem& rs);
/// One-shot K application (builds the kernel).
ComplexField apply_K(const ComplexField& u, const PotentialRealization& rho, const RootSystem& rs);

struct BornSeries {
    std::vector<ComplexField> terms;  // u_0 = u^i, u_j = K u_{j-1}
    bool diverging = false;          // ||u_J|| >= ||u_{J-1}||
};

BornSeries born_terms(const ScatteringOperator& op, const Direction& theta, int J);

/// Solves u - K u = u^i. Throws NonConvergence when the iteration stalls or diverges.
WaveField solve_ls(const ScatteringOperator& op, const Direction& theta, const SolveConfig& cfg = {});
WaveField solve_ls(const PotentialRealization& rho, const Direction& theta, double kappa, int n,
                   const SolveConfig& cfg = {});

/// ||u - K u - u^i|| / ||u^i|| for a candidate total field.
double ls_residual(const ScatteringOperator& op, const ComplexField& u, const ComplexField& u_inc);

/// ||u_J|| / ||u_{J-1}|| of the Born sequence for incidence theta.
double contraction_ratio(const ScatteringOperator& op, const Direction& theta, int J = 8);

/// Largest singular value of K restricted to the safe ball (l2 on grid values),
/// by power iteration on K* K.
double operator_norm_estimate(const ScatteringOperator& op, int iterations = 40, std::uint64_t seed = 7);

}  // namespace polyscatter
