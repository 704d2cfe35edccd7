#include "polyscatter/gmig.hpp"

#include <boost/random/normal_distribution.hpp>

#include <cmath>
#include <random>
#include <sstream>

namespace polyscatter {

double Bump::operator()(const Vec& x) const {
    const Vec dx = x - center;
    const double t = dot(dx, dx) / (radius * radius);
    if (t >= 1.0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - t));
}

RealField sample_bump(const Bump& b, const GridSpec& spec) {
    RealField f(spec);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = b(spec.point(i));
    return f;
}

RealField PotentialSpec::strength_c() const {
    if (m1 < m2) return a1;
    if (m2 < m1) return a2;
    RealField out = a1;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += a2[i];
    return out;
}

RealField PotentialSpec::strength_r() const {
    RealField out = m1 <= m2 ? a1 : RealField(a2.spec);
    if (m2 < m1) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = -a2[i];
    } else if (m1 == m2) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] -= a2[i];
    }
    return out;
}

bool order_admissible(double m, int d, int n) { return m > d - 2 * n + 1 && m <= d; }

bool reconstruction_condition(double m, int d, int n) { return m > (4.0 * d - 4.0 * n + 2.0) / 3.0; }

void validate_potential(const PotentialSpec& p, int n) {
    const GridSpec& g = p.a1.spec;
    if (!(p.a2.spec == g)) throw ValidationError("strengths a1 and a2 live on different grids");
    if (p.a1.size() != g.size() || p.a2.size() != g.size()) throw ValidationError("strength grid has wrong size");
    for (double m : {p.m1, p.m2}) {
        if (!order_admissible(m, g.d, n)) {
            std::ostringstream msg;
            msg << "order " << m << " outside (" << g.d - 2 * n + 1 << ", " << g.d << "]";
            throw ValidationError(msg.str());
        }
    }
    const double r2 = g.safe_radius() * g.safe_radius();
    for (const RealField* a : {&p.a1, &p.a2}) {
        for (std::size_t i = 0; i < a->size(); ++i) {
            const double v = (*a)[i];
            if (!std::isfinite(v) || v < 0.0) throw ValidationError("strengths must be finite and nonnegative");
            const Vec x = g.point(i);
            if (v != 0.0 && dot(x, x) > r2) {
                std::ostringstream msg;
                msg << "strength support exceeds radius " << g.safe_radius();
                throw ValidationError(msg.str());
            }
        }
    }
}

PotentialSpec make_potential(const GridSpec& spec, const std::vector<Bump>& a1, double m1,
                             const std::vector<Bump>& a2, double m2) {
    PotentialSpec p{RealField(spec), m1, RealField(spec), m2};
    for (const Bump& b : a1) {
        const RealField f = sample_bump(b, spec);
        for (std::size_t i = 0; i < f.size(); ++i) p.a1[i] += f[i];
    }
    for (const Bump& b : a2) {
        const RealField f = sample_bump(b, spec);
        for (std::size_t i = 0; i < f.size(); ++i) p.a2[i] += f[i];
    }
    return p;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
    std::array<std::uint32_t, 2> out{};
    seq.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

RealField sample_real_gmig(const RealField& a, double m, std::uint64_t seed) {
    const GridSpec& g = a.spec;
    bool any = false;
    for (double v : a.values) {
        if (v < 0.0 || !std::isfinite(v)) throw ValidationError("strength must be finite and nonnegative");
        any = any || v != 0.0;
    }
    RealField out(g);
    if (!any) return out;

    std::mt19937_64 rng(seed);
    boost::random::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(g.cell_volume()));
    std::vector<Complex> w(g.size());
    for (auto& v : w) v = normal(rng);

    dft_inplace(w, g.d, g.N, -1);
    const double scale = 1.0 / static_cast<double>(g.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Vec xi = g.wavevector(i);
        const double k2 = dot(xi, xi);
        w[i] *= k2 == 0.0 ? 0.0 : std::pow(k2, -m / 4.0) * scale;
    }
    dft_inplace(w, g.d, g.N, +1);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] == 0.0 ? 0.0 : std::sqrt(a[i]) * w[i].real();
    return out;
}

PotentialRealization sample_complex_gmig(const PotentialSpec& spec, std::uint64_t seed) {
    const RealField r1 = sample_real_gmig(spec.a1, spec.m1, derive_seed(seed, 1));
    const RealField r2 = sample_real_gmig(spec.a2, spec.m2, derive_seed(seed, 2));
    PotentialRealization out{ComplexField(spec.a1.spec), spec, seed};
    for (std::size_t i = 0; i < out.rho.size(); ++i) out.rho[i] = Complex(r1[i], r2[i]);
    return out;
}

SymbolEstimate empirical_symbol(const std::vector<PotentialRealization>& realizations, const Vec& xi,
                                SymbolKind kind) {
    if (realizations.size() < 2) throw InsufficientSamples("empirical_symbol needs at least 2 realizations");
    std::vector<Complex> samples;
    samples.reserve(realizations.size());
    for (const auto& r : realizations) {
        const Complex plus = fourier_at(r.rho, xi);
        samples.push_back(kind == SymbolKind::covariance ? plus * std::conj(plus) : plus * fourier_at(r.rho, -xi));
    }
    const double count = static_cast<double>(samples.size());
    Complex mean = 0.0;
    for (const auto& s : samples) mean += s;
    mean /= count;
    double var = 0.0;
    for (const auto& s : samples) var += std::norm(s - mean);
    var /= count - 1.0;
    return {mean, std::sqrt(var / count), samples.size()};
}

double integrate(const RealField& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s * f.spec.cell_volume();
}

}  // namespace polyscatter
