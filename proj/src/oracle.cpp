#include "polyscatter/oracle.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <cmath>
#include <unordered_map>

namespace polyscatter::oracle {
namespace {

using mp_real = boost::multiprecision::cpp_bin_float_50;
using mp_complex = boost::multiprecision::cpp_complex_50;

constexpr double kMaxRadius = 20.0;
constexpr double kOriginProbe = 1e-20;

mp_complex to_mp(Complex z) { return mp_complex(mp_real(z.real()), mp_real(z.imag())); }

Complex to_double(const mp_complex& z) {
    return Complex(static_cast<double>(z.real()), static_cast<double>(z.imag()));
}

struct MpBessel {
    mp_complex j0, y0, j1, y1, h0, h1;
    double bound;
};

MpBessel mp_series(const mp_complex& z) {
    const mp_real pi = boost::math::constants::pi<mp_real>();
    const mp_real gamma = boost::math::constants::euler<mp_real>();
    const mp_complex t = -(z * z) / 4;
    const mp_complex half = z / 2;

    mp_complex a = 1;  // t^k / (k!)^2
    mp_complex b = 1;  // t^k / (k! (k+1)!)
    mp_complex j0 = 1, s0 = 0;
    mp_complex j1s = 1;
    mp_real psi1 = -gamma;      // psi(k+1)
    mp_real psi2 = 1 - gamma;   // psi(k+2)
    mp_complex s1 = psi1 + psi2;
    mp_real hk = 0;
    mp_real largest = 1;
    for (int k = 1; k < 400; ++k) {
        a *= t / (mp_real(k) * k);
        b *= t / (mp_real(k) * (k + 1));
        hk += mp_real(1) / k;
        psi1 += mp_real(1) / k;
        psi2 += mp_real(1) / (k + 1);
        j0 += a;
        s0 += hk * a;
        j1s += b;
        s1 += (psi1 + psi2) * b;
        const mp_real mag = abs(a);
        if (mag > largest) largest = mag;
        if (k > 5 && mag * (1 + hk) < mp_real("1e-60") * largest) break;
    }
    const mp_complex lg = log(half);
    MpBessel out;
    out.j0 = j0;
    out.y0 = (2 / pi) * ((lg + gamma) * j0 - s0);
    out.j1 = half * j1s;
    out.y1 = -2 / (pi * z) + (2 / pi) * lg * out.j1 - half * s1 / pi;
    out.h0 = out.j0 + mp_complex(0, 1) * out.y0;
    out.h1 = out.j1 + mp_complex(0, 1) * out.y1;
    // 50-digit rounding on the largest term, relative to the result.
    const mp_real rel = mp_real("1e-48") * largest * (1 + abs(lg)) / abs(out.h0);
    out.bound = std::max(static_cast<double>(rel), 1.2e-16);
    return out;
}

mp_complex mp_green(const mp_real& r, const mp_real& kappa, int n, int d) {
    const mp_real pi = boost::math::constants::pi<mp_real>();
    const mp_complex i(0, 1);
    mp_complex sum = 0;
    for (int j = 0; j < n; ++j) {
        const mp_real ang = pi * j / n;
        const mp_complex kj(kappa * cos(ang), kappa * sin(ang));
        mp_complex phi;
        if (d == 3) {
            phi = exp(i * kj * r) / (4 * pi * r);
        } else {
            const mp_complex z = kj * r;
            if (static_cast<double>(abs(z)) > kMaxRadius) throw RadiusGuard("green_reference: |kappa_j r| exceeds 20");
            const MpBessel bj = mp_series(z);
            phi = (i / 4) * bj.h0;
        }
        sum += kj * kj * phi;
    }
    return -sum / (n * pow(kappa, 2 * n));
}

void line_dft(std::vector<Complex>& data, std::size_t offset, std::size_t stride, int N, int sign,
              const std::vector<std::complex<long double>>& twiddle) {
    std::vector<std::complex<long double>> out(N);
    for (int k = 0; k < N; ++k) {
        std::complex<long double> s = 0.0L;
        for (int j = 0; j < N; ++j) {
            const auto w = twiddle[(static_cast<std::size_t>(j) * k) % N];
            const std::complex<long double> v(data[offset + j * stride].real(), data[offset + j * stride].imag());
            s += v * (sign < 0 ? w : std::conj(w));
        }
        out[k] = s;
    }
    for (int k = 0; k < N; ++k) data[offset + k * stride] = Complex(double(out[k].real()), double(out[k].imag()));
}

void direct_dft(std::vector<Complex>& data, int d, int N, int sign) {
    std::vector<std::complex<long double>> twiddle(N);
    const long double tau = 2.0L * boost::math::constants::pi<long double>() / N;
    for (int k = 0; k < N; ++k) twiddle[k] = std::polar(1.0L, -tau * k);
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) total *= N;
    for (int axis = 0; axis < d; ++axis) {
        std::size_t stride = 1;
        for (int a = axis + 1; a < d; ++a) stride *= N;
        for (std::size_t base = 0; base < total; ++base) {
            if ((base / stride) % N != 0) continue;
            line_dft(data, base, stride, N, sign, twiddle);
        }
    }
}

}  // namespace

BesselValues series_bessel(Complex z) {
    const double mag = std::abs(z);
    if (mag == 0.0) throw DomainError("series_bessel: z = 0");
    if (mag > kMaxRadius) throw RadiusGuard("series_bessel: |z| exceeds 20");
    if (z.imag() <= 0.0) z = Complex(z.real(), 0.0);
    const MpBessel b = mp_series(to_mp(z));
    return {to_double(b.j0), to_double(b.y0), to_double(b.j1), to_double(b.y1), b.bound};
}

Complex hankel0(Complex z) {
    const double mag = std::abs(z);
    if (mag == 0.0) throw DomainError("hankel0: z = 0");
    if (mag > kMaxRadius) throw RadiusGuard("hankel0: |z| exceeds 20");
    if (z.imag() <= 0.0) z = Complex(z.real(), 0.0);
    // Summed before rounding: J0 and Y0 cancel deep in the upper half-plane.
    return to_double(mp_series(to_mp(z)).h0);
}

Complex hankel1(Complex z) {
    const double mag = std::abs(z);
    if (mag == 0.0) throw DomainError("hankel1: z = 0");
    if (mag > kMaxRadius) throw RadiusGuard("hankel1: |z| exceeds 20");
    if (z.imag() <= 0.0) z = Complex(z.real(), 0.0);
    return to_double(mp_series(to_mp(z)).h1);
}

Complex bessel_k0_integral(Complex z) {
    if (!(z.real() > 0.0)) throw DomainError("bessel_k0_integral: Re z must be positive");
    const long double h = 0.02L;
    const std::complex<long double> zl(z.real(), z.imag());
    std::complex<long double> sum = 0.5L * std::exp(-zl);
    for (int k = 1;; ++k) {
        const long double t = k * h;
        const long double c = std::cosh(t);
        if (zl.real() * c > 800.0L) break;
        sum += std::exp(-zl * c);
    }
    sum *= h;
    return Complex(double(sum.real()), double(sum.imag()));
}

Complex green_reference(double r, double kappa, int n, int d) {
    if (n < 2) throw DomainError("green_reference: n must be >= 2");
    if (d != 2 && d != 3) throw DomainError("green_reference: d must be 2 or 3");
    if (r < 0.0) throw DomainError("green_reference: r must be nonnegative");
    // The r -> 0 limit is approached at r = 1e-20; the deviation is O(r^2 log r).
    const mp_real rr = r == 0.0 ? mp_real(kOriginProbe) : mp_real(r);
    return to_double(mp_green(rr, mp_real(kappa), n, d));
}

std::vector<Complex> direct_volume_potential(const ComplexField& phi, double kappa, int n,
                                             const std::vector<std::size_t>& points) {
    const GridSpec& g = phi.spec;
    if ((g.d == 2 && g.N > 64) || (g.d == 3 && g.N > 16)) {
        throw SizeGuard("direct_volume_potential: grid too large for brute force");
    }
    std::unordered_map<long, Complex> cache;
    std::vector<Complex> out;
    out.reserve(points.size());
    const double hd = std::pow(2.0 * g.L / g.N, g.d);
    const double h = 2.0 * g.L / g.N;
    for (std::size_t p : points) {
        const auto xi = g.multi_index(p);
        std::complex<long double> acc = 0.0L;
        for (std::size_t q = 0; q < phi.size(); ++q) {
            if (phi[q] == Complex(0.0, 0.0)) continue;
            const auto yi = g.multi_index(q);
            long m = 0;
            for (int a = 0; a < g.d; ++a) m += long(xi[a] - yi[a]) * (xi[a] - yi[a]);
            auto it = cache.find(m);
            if (it == cache.end()) {
                it = cache.emplace(m, green_reference(h * std::sqrt(double(m)), kappa, n, g.d)).first;
            }
            acc += std::complex<long double>(it->second.real(), it->second.imag()) *
                   std::complex<long double>(phi[q].real(), phi[q].imag());
        }
        out.emplace_back(double(acc.real() * hd), double(acc.imag() * hd));
    }
    return out;
}

double gaussian_hat(double s, double xi_norm, int d) {
    if (!(s > 0.0)) throw DomainError("gaussian_hat: s must be positive");
    return std::pow(2.0 * kPi * s * s, 0.5 * d) * std::exp(-0.5 * s * s * xi_norm * xi_norm);
}

RealField truncated_fourier_reconstruction(const RealField& a, double radius) {
    const GridSpec& g = a.spec;
    std::vector<Complex> data(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) data[i] = a[i];
    direct_dft(data, g.d, g.N, -1);
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto idx = g.multi_index(i);
        double k2 = 0.0;
        for (int ax = 0; ax < g.d; ++ax) {
            const int j = idx[ax] < g.N / 2 ? idx[ax] : idx[ax] - g.N;
            const double f = kPi * j / g.L;
            k2 += f * f;
        }
        if (k2 > radius * radius) data[i] = 0.0;
    }
    direct_dft(data, g.d, g.N, +1);
    RealField out(g);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = data[i].real() / static_cast<double>(a.size());
    return out;
}

Complex direct_fourier(const ComplexField& f, const Vec& xi) {
    const GridSpec& g = f.spec;
    std::complex<long double> acc = 0.0L;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] == Complex(0.0, 0.0)) continue;
        const auto idx = g.multi_index(i);
        long double phase = 0.0L;
        for (int a = 0; a < g.d; ++a) phase -= (-(long double)g.L + idx[a] * (2.0L * g.L / g.N)) * xi[a];
        acc += std::complex<long double>(f[i].real(), f[i].imag()) * std::polar(1.0L, phase);
    }
    const long double hd = std::pow(2.0L * g.L / g.N, g.d);
    return Complex(double(acc.real() * hd), double(acc.imag() * hd));
}

McStats mc_stats(const std::vector<Complex>& samples) {
    if (samples.size() < 2) throw InsufficientSamples("mc_stats needs at least 2 samples");
    std::complex<long double> mean = 0.0L;
    for (const auto& s : samples) mean += std::complex<long double>(s.real(), s.imag());
    mean /= static_cast<long double>(samples.size());
    long double var = 0.0L;
    for (const auto& s : samples) var += std::norm(std::complex<long double>(s.real(), s.imag()) - mean);
    var /= static_cast<long double>(samples.size() - 1);
    return {Complex(double(mean.real()), double(mean.imag())), double(std::sqrt(var / samples.size())), samples.size()};
}

}  // namespace polyscatter::oracle
