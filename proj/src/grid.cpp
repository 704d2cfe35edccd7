#include "polyscatter/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

namespace polyscatter {
namespace {

std::size_t ipow(int base, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= static_cast<std::size_t>(base);
    return r;
}

int parity_sign(const std::array<int, 3>& idx, int d) {
    int s = 0;
    for (int a = 0; a < d; ++a) s += idx[a];
    return (s & 1) ? -1 : 1;
}

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(int d, int N, int sign) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_tuple(d, N, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::vector<Complex> scratch(ipow(N, d));
        int dims[3] = {N, N, N};
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan plan = fftw_plan_dft(d, dims, buf, buf, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!plan) throw Error("fftw plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

}  // namespace

GridSpec::GridSpec(int d_, double L_, int N_) : d(d_), L(L_), N(N_) {
    require_dimension(d);
    if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("GridSpec: L must be positive");
    if (N < 8 || N % 2 != 0) throw DomainError("GridSpec: N must be even and >= 8");
}

std::size_t GridSpec::size() const { return ipow(N, d); }

double GridSpec::cell_volume() const { return std::pow(spacing(), d); }

std::array<int, 3> GridSpec::multi_index(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = d - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(flat % N);
        flat /= N;
    }
    return idx;
}

std::size_t GridSpec::flat_index(const std::array<int, 3>& idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < d; ++a) flat = flat * N + static_cast<std::size_t>(idx[a]);
    return flat;
}

Vec GridSpec::point(std::size_t flat) const {
    const auto idx = multi_index(flat);
    Vec x;
    for (int a = 0; a < d; ++a) x[a] = coordinate(idx[a]);
    return x;
}

Vec GridSpec::wavevector(std::size_t flat) const {
    const auto idx = multi_index(flat);
    Vec xi;
    for (int a = 0; a < d; ++a) xi[a] = frequency(idx[a]);
    return xi;
}

ComplexField::ComplexField(const GridSpec& s, std::vector<Complex> v) : spec(s), values(std::move(v)) {
    if (values.size() != spec.size()) throw DomainError("ComplexField: value count does not match grid");
}

RealField::RealField(const GridSpec& s, std::vector<double> v) : spec(s), values(std::move(v)) {
    if (values.size() != spec.size()) throw DomainError("RealField: value count does not match grid");
}

ComplexField to_complex(const RealField& f) {
    ComplexField out(f.spec);
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i];
    return out;
}

RealField real_part(const ComplexField& f) {
    RealField out(f.spec);
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].real();
    return out;
}

RealField imag_part(const ComplexField& f) {
    RealField out(f.spec);
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i].imag();
    return out;
}

double l2_norm(const ComplexField& f) {
    double s = 0.0;
    for (const auto& v : f.values) s += std::norm(v);
    return std::sqrt(s);
}

double l2_norm_weighted(const ComplexField& f) { return l2_norm(f) * std::sqrt(f.spec.cell_volume()); }

double max_abs(const ComplexField& f) {
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

void dft_inplace(std::vector<Complex>& data, int d, int N, int sign) {
    if (data.size() != ipow(N, d)) throw DomainError("dft_inplace: size mismatch");
    fftw_plan plan = plan_cache().get(d, N, sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

ComplexField fft(const ComplexField& f) {
    ComplexField out = f;
    dft_inplace(out.values, f.spec.d, f.spec.N, -1);
    const double hd = f.spec.cell_volume();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] *= hd * parity_sign(f.spec.multi_index(i), f.spec.d);
    }
    return out;
}

ComplexField ifft(const ComplexField& fhat) {
    ComplexField out = fhat;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] *= static_cast<double>(parity_sign(fhat.spec.multi_index(i), fhat.spec.d));
    }
    dft_inplace(out.values, fhat.spec.d, fhat.spec.N, +1);
    const double scale = 1.0 / std::pow(2.0 * fhat.spec.L, fhat.spec.d);
    for (auto& v : out.values) v *= scale;
    return out;
}

ComplexField spectral_multiply(const ComplexField& f, const std::function<Complex(const Vec&)>& symbol) {
    ComplexField work = f;
    dft_inplace(work.values, f.spec.d, f.spec.N, -1);
    const double scale = 1.0 / static_cast<double>(f.size());
    for (std::size_t i = 0; i < work.size(); ++i) work[i] *= symbol(f.spec.wavevector(i)) * scale;
    dft_inplace(work.values, f.spec.d, f.spec.N, +1);
    return work;
}

Complex fourier_at(const ComplexField& f, const Vec& xi) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Complex v = f[i];
        if (v.real() == 0.0 && v.imag() == 0.0) continue;
        const double phase = -dot(f.spec.point(i), xi);
        const double c = std::cos(phase);
        const double s = std::sin(phase);
        re += v.real() * c - v.imag() * s;
        im += v.real() * s + v.imag() * c;
    }
    return f.spec.cell_volume() * Complex(re, im);
}

double mass_outside_safe_ball(const ComplexField& f) {
    const double r2 = f.spec.safe_radius() * f.spec.safe_radius();
    double total = 0.0;
    double outside = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = std::abs(f[i]);
        total += a;
        const Vec x = f.spec.point(i);
        if (dot(x, x) > r2) outside += a;
    }
    return total > 0.0 ? outside / total : 0.0;
}

void mask_to_safe_ball(ComplexField& f) {
    const double r2 = f.spec.safe_radius() * f.spec.safe_radius();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec x = f.spec.point(i);
        if (dot(x, x) > r2) f[i] = 0.0;
    }
}

double smooth_cutoff(double t) {
    if (t <= 0.0) return 1.0;
    if (t >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / (1.0 - t));
    const double b = std::exp(-1.0 / t);
    return a / (a + b);
}

PeriodizedKernel::PeriodizedKernel(const RootSystem& rs, const GridSpec& spec)
    : rs_(rs), spec_(spec), samples_(spec) {
    const int N = spec.N;
    const int half = N / 2;
    const double h = spec.spacing();
    const double r_taper = 0.9 * spec.L;
    const std::size_t max_m = static_cast<std::size_t>(spec.d) * half * half;
    std::vector<Complex> by_m(max_m + 1);
    std::vector<char> known(max_m + 1, 0);

    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const auto idx = spec.multi_index(i);
        std::size_t m = 0;
        for (int a = 0; a < spec.d; ++a) {
            const long k = spec.signed_frequency(idx[a]);
            m += static_cast<std::size_t>(k * k);
        }
        if (!known[m]) {
            const double r = h * std::sqrt(static_cast<double>(m));
            Complex value = 0.0;
            if (m == 0) {
                value = green_origin_limit(rs, spec.d);
            } else if (r < spec.L) {
                value = green(r, rs, spec.d) * smooth_cutoff((r - r_taper) / (spec.L - r_taper));
            }
            by_m[m] = value;
            known[m] = 1;
        }
        samples_[i] = by_m[m];
    }

    spectrum_ = samples_.values;
    dft_inplace(spectrum_, spec.d, N, -1);
    const double scale = spec.cell_volume() / static_cast<double>(spec.size());
    for (auto& v : spectrum_) v *= scale;
}

ComplexField PeriodizedKernel::apply(const ComplexField& phi, bool adjoint) const {
    if (!(phi.spec == spec_)) throw DomainError("PeriodizedKernel: grid mismatch");
    const double outside = mass_outside_safe_ball(phi);
    if (outside > 1e-12) {
        throw SupportError("density has relative mass " + std::to_string(outside) + " outside the safe ball");
    }
    ComplexField out = phi;
    dft_inplace(out.values, spec_.d, spec_.N, -1);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= adjoint ? std::conj(spectrum_[i]) : spectrum_[i];
    dft_inplace(out.values, spec_.d, spec_.N, +1);
    return out;
}

ComplexField PeriodizedKernel::convolve(const ComplexField& phi) const { return apply(phi, false); }

ComplexField PeriodizedKernel::convolve_adjoint(const ComplexField& phi) const { return apply(phi, true); }

PeriodizedKernel periodized_kernel(const RootSystem& rs, const GridSpec& spec) { return PeriodizedKernel(rs, spec); }

}  // namespace polyscatter
