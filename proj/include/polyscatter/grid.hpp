#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "polyscatter/greens.hpp"
#include "polyscatter/types.hpp"

namespace polyscatter {

/// Periodic box [-L, L)^d sampled at x_k = -L + k h, h = 2L / N, per axis.
/// Flat indices are row-major with axis 0 slowest.
struct GridSpec {
    int d = 2;
    double L = 1.0;
    int N = 64;

    GridSpec() = default;
    GridSpec(int d_, double L_, int N_);

    double spacing() const { return 2.0 * L / N; }
    std::size_t size() const;
    double cell_volume() const;
    /// Radius of the centred ball on which convolution is exact.
    double safe_radius() const { return 0.45 * L; }

    double coordinate(int k) const { return -L + k * spacing(); }
    Vec point(std::size_t flat) const;
    std::array<int, 3> multi_index(std::size_t flat) const;
    std::size_t flat_index(const std::array<int, 3>& idx) const;

    /// Signed lattice index of DFT bin k: k for k < N/2, k - N otherwise.
    int signed_frequency(int k) const { return k < N / 2 ? k : k - N; }
    /// Angular frequency pi j / L of bin k.
    double frequency(int k) const { return kPi * signed_frequency(k) / L; }
    Vec wavevector(std::size_t flat) const;

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

struct ComplexField {
    GridSpec spec;
    std::vector<Complex> values;

    ComplexField() = default;
    explicit ComplexField(const GridSpec& s) : spec(s), values(s.size(), Complex(0.0, 0.0)) {}
    ComplexField(const GridSpec& s, std::vector<Complex> v);

    std::size_t size() const { return values.size(); }
    Complex& operator[](std::size_t i) { return values[i]; }
    const Complex& operator[](std::size_t i) const { return values[i]; }
};

struct RealField {
    GridSpec spec;
    std::vector<double> values;

    RealField() = default;
    explicit RealField(const GridSpec& s) : spec(s), values(s.size(), 0.0) {}
    RealField(const GridSpec& s, std::vector<double> v);

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

ComplexField to_complex(const RealField& f);
RealField real_part(const ComplexField& f);
RealField imag_part(const ComplexField& f);

double l2_norm(const ComplexField& f);
/// Discrete L2 norm weighted by the cell volume.
double l2_norm_weighted(const ComplexField& f);
double max_abs(const ComplexField& f);

/// Raw unnormalized multidimensional DFT in place; sign -1 forward, +1 backward.
void dft_inplace(std::vector<Complex>& data, int d, int N, int sign);

/// Fourier transform on the lattice xi = (pi/L) Z^d with the integral convention
/// phihat(xi) = int phi(x) e^{-i x.xi} dx. Output uses DFT bin ordering.
ComplexField fft(const ComplexField& f);
ComplexField ifft(const ComplexField& fhat);

/// Multiplies the transform of f by symbol(xi) and transforms back.
ComplexField spectral_multiply(const ComplexField& f, const std::function<Complex(const Vec&)>& symbol);

/// h^d sum_x f(x) e^{-i x.xi} at an arbitrary frequency, skipping zero cells.
Complex fourier_at(const ComplexField& f, const Vec& xi);

/// Fraction of l1 mass lying outside the safe ball.
double mass_outside_safe_ball(const ComplexField& f);

/// Zeroes every cell outside the safe ball.
void mask_to_safe_ball(ComplexField& f);

/// Grid samples of G(|x|) in wrapped layout, smoothly cut off between 0.9L and L,
/// with the origin cell set to the r -> 0 limit. Its transform is cached.
class PeriodizedKernel {
public:
    PeriodizedKernel(const RootSystem& rs, const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }
    const RootSystem& roots() const { return rs_; }
    /// Kernel value at wrapped displacement index (per-axis bins).
    const ComplexField& samples() const { return samples_; }

    /// h^d sum_y G(x - y) phi(y); exact for x, y in the safe ball.
    ComplexField convolve(const ComplexField& phi) const;
    /// Adjoint of convolve with respect to the plain l2 inner product.
    ComplexField convolve_adjoint(const ComplexField& phi) const;

private:
    ComplexField apply(const ComplexField& phi, bool adjoint) const;

    RootSystem rs_;
    GridSpec spec_;
    ComplexField samples_;
    std::vector<Complex> spectrum_;  // DFT(samples) * h^d / N^d
};

PeriodizedKernel periodized_kernel(const RootSystem& rs, const GridSpec& spec);

/// Smooth step: 1 for t <= 0, 0 for t >= 1.
double smooth_cutoff(double t);

}  // namespace polyscatter
