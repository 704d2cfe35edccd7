#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "polyscatter/forward.hpp"

namespace polyscatter {

/// prefactor * h^d sum_y exp(-i kappa xhat.y) rho(y) u(y).
Complex farfield_from_total(const WaveField& u, const ComplexField& rho, const Direction& x_hat, const RootSystem& rs);

/// Backscattering Born approximation u_1(xhat, -xhat, kappa) = prefactor * rhohat(2 kappa xhat).
Complex born1_farfield(const ComplexField& rho, const Direction& x_hat, double kappa, int n);

/// Born order used to produce a record; kFullSolve marks converged solves.
inline constexpr int kFullSolve = 0;

struct FarFieldRecord {
    Direction x_hat;
    Direction theta;
    double kappa = 0.0;
    Complex value;
    int born_order = 1;
};

/// Uniform wavenumber lattice kappa_k = kappa_min + k * step, k = 0..count-1.
struct KappaLattice {
    double kappa_min = 0.0;
    double step = 0.25;
    std::size_t count = 0;

    double at(std::size_t k) const { return kappa_min + static_cast<double>(k) * step; }
    double kappa_max() const { return count == 0 ? kappa_min : at(count - 1); }
    /// Lattice index of kappa, or throws BandCoverageError if kappa is off-lattice or outside.
    std::size_t index_of(double kappa) const;
};

KappaLattice make_lattice(double kappa_lo, double kappa_hi, double step);

/// Backscatter sweep over a direction set. For direction i and lattice index k the
/// records are stored at 2 * (i * count + k) (+x direction, theta = -x) and the next
/// slot (observation -x, theta = +x).
struct SweepDataset {
    int d = 2;
    int n = 2;
    std::vector<Direction> directions;
    KappaLattice lattice;
    int born_order = 1;
    std::uint64_t seed = 0;
    nlohmann::json provenance = nlohmann::json::object();
    std::vector<FarFieldRecord> records;

    /// Index of x_hat in the direction set (tolerance 1e-12), or throws OrientationMissing.
    std::size_t direction_index(const Direction& x_hat) const;
    /// u(x_hat, -x_hat, kappa_k)
    Complex forward(std::size_t dir, std::size_t k) const { return records[2 * (dir * lattice.count + k)].value; }
    /// u(-x_hat, x_hat, kappa_k)
    Complex backward(std::size_t dir, std::size_t k) const { return records[2 * (dir * lattice.count + k) + 1].value; }
};

struct SweepConfig {
    std::vector<Direction> directions;
    double kappa_lo = 8.0;
    double kappa_hi = 16.0;
    double kappa_step = 0.25;
    SolveConfig solver;
    int n = 2;
};

/// Computes both backscatter orientations for every direction and lattice wavenumber.
/// born_order 1 uses direct summation over the support of rho; higher orders sum
/// the first born_order Born terms; 0 solves the Lippmann-Schwinger equation.
SweepDataset backscatter_sweep(const ComplexField& rho, const SweepConfig& cfg, std::uint64_t seed = 0);

/// Evenly spaced directions: angles 2 pi k / count in 2D, a Fibonacci sphere in 3D.
std::vector<Direction> direction_set(int d, std::size_t count);

/// Binary sweep file "PSSW": version u32, d u32, reserved u32, count u64, then
/// per record x_hat[d], theta[d], kappa, re, im as f64. Metadata goes to the sidecar.
void write_sweep(const std::filesystem::path& path, const SweepDataset& ds);
SweepDataset read_sweep(const std::filesystem::path& path);

}  // namespace polyscatter
