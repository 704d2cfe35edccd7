#include "polyscatter/forward.hpp"

#include <boost/random/normal_distribution.hpp>

#include <cmath>
#include <random>
#include <sstream>

namespace polyscatter {
namespace {

const Complex kI{0.0, 1.0};
constexpr double kDivergenceFactor = 1e6;

Complex inner(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm2(const std::vector<Complex>& a) { return std::sqrt(std::real(inner(a, a))); }

[[noreturn]] void fail(const std::string& why, double kappa, double residual) {
    std::ostringstream msg;
    msg << why << " at kappa = " << kappa << " (residual " << residual << ")";
    throw NonConvergence(msg.str(), kappa, residual);
}

WaveField fixed_point(const ScatteringOperator& op, const Direction& theta, const SolveConfig& cfg) {
    const ComplexField u_inc = incident_wave(theta, op.kappa(), op.spec());
    const double inc_norm = l2_norm(u_inc);
    ComplexField u = u_inc;
    double first = -1.0;
    for (int it = 1; it <= cfg.max_iter; ++it) {
        const ComplexField ku = op.apply_K(u);
        double r2 = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) r2 += std::norm(u[i] - ku[i] - u_inc[i]);
        const double residual = std::sqrt(r2) / inc_norm;
        if (!std::isfinite(residual)) fail("non-finite residual", op.kappa(), residual);
        if (residual <= cfg.tol) return {std::move(u), theta, op.kappa(), residual, it};
        if (first < 0.0) first = residual;
        if (residual > kDivergenceFactor * first) fail("fixed-point iteration diverged", op.kappa(), residual);
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = u_inc[i] + ku[i];
    }
    const double residual = ls_residual(op, u, u_inc);
    fail("fixed-point iteration hit max_iter", op.kappa(), residual);
}

// Restarted GMRES for (I - K) u = u^i; iterations counts K applications.
WaveField gmres(const ScatteringOperator& op, const Direction& theta, const SolveConfig& cfg) {
    const ComplexField u_inc = incident_wave(theta, op.kappa(), op.spec());
    const double b_norm = l2_norm(u_inc);
    const std::size_t size = u_inc.size();
    const int restart = std::max(1, cfg.krylov_restart);
    ComplexField x = u_inc;
    int applications = 0;

    auto apply_A = [&](const std::vector<Complex>& v) {
        const ComplexField kv = op.apply_K(ComplexField(op.spec(), v));
        ++applications;
        std::vector<Complex> out(size);
        for (std::size_t i = 0; i < size; ++i) out[i] = v[i] - kv[i];
        return out;
    };

    while (applications < cfg.max_iter) {
        std::vector<Complex> r = apply_A(x.values);
        for (std::size_t i = 0; i < size; ++i) r[i] = u_inc[i] - r[i];
        const double beta = norm2(r);
        const double residual = beta / b_norm;
        if (!std::isfinite(residual)) fail("non-finite residual", op.kappa(), residual);
        if (residual <= cfg.tol) return {std::move(x), theta, op.kappa(), residual, applications};

        std::vector<std::vector<Complex>> V{r};
        for (auto& v : V[0]) v /= beta;
        std::vector<std::vector<Complex>> H(restart + 1, std::vector<Complex>(restart, 0.0));
        std::vector<Complex> cs(restart), sn(restart), g(restart + 1, 0.0);
        g[0] = beta;
        int k = 0;
        for (; k < restart && applications < cfg.max_iter; ++k) {
            std::vector<Complex> w = apply_A(V[k]);
            for (int j = 0; j <= k; ++j) {
                H[j][k] = inner(V[j], w);
                for (std::size_t i = 0; i < size; ++i) w[i] -= H[j][k] * V[j][i];
            }
            const double wn = norm2(w);
            H[k + 1][k] = wn;
            for (int j = 0; j < k; ++j) {
                const Complex t = std::conj(cs[j]) * H[j][k] + std::conj(sn[j]) * H[j + 1][k];
                H[j + 1][k] = -sn[j] * H[j][k] + cs[j] * H[j + 1][k];
                H[j][k] = t;
            }
            const double denom = std::hypot(std::abs(H[k][k]), wn);
            cs[k] = denom == 0.0 ? 1.0 : H[k][k] / denom;
            sn[k] = denom == 0.0 ? 0.0 : Complex(wn / denom);
            H[k][k] = denom;
            H[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] = std::conj(cs[k]) * g[k];
            if (wn == 0.0 || std::abs(g[k + 1]) / b_norm <= 0.1 * cfg.tol) {
                ++k;
                break;
            }
            for (auto& v : w) v /= wn;
            V.push_back(std::move(w));
        }
        std::vector<Complex> y(k);
        for (int i = k - 1; i >= 0; --i) {
            Complex s = g[i];
            for (int j = i + 1; j < k; ++j) s -= H[i][j] * y[j];
            y[i] = s / H[i][i];
        }
        for (int j = 0; j < k; ++j) {
            for (std::size_t i = 0; i < size; ++i) x[i] += y[j] * V[j][i];
        }
    }
    fail("GMRES hit max_iter", op.kappa(), ls_residual(op, x, u_inc));
}

}  // namespace

void validate_solve_config(const SolveConfig& cfg) {
    if (!(cfg.tol > 0.0)) throw ValidationError("solver tol must be positive");
    if (cfg.max_iter < 1) throw ValidationError("solver max_iter must be >= 1");
    if (cfg.born_order < 0) throw ValidationError("born_order must be >= 1, or 0 for a full solve");
    if (cfg.krylov_restart < 1) throw ValidationError("krylov_restart must be >= 1");
}

ComplexField incident_wave(const Direction& theta, double kappa, const GridSpec& spec) {
    ComplexField u(spec);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = std::exp(kI * (kappa * dot(spec.point(i), theta.vec())));
    return u;
}

ScatteringOperator::ScatteringOperator(const ComplexField& rho, const RootSystem& rs)
    : kernel_(rs, rho.spec), rho_(rho) {
    mask_to_safe_ball(rho_);
}

ComplexField ScatteringOperator::apply_K(const ComplexField& u) const {
    ComplexField prod(u.spec);
    for (std::size_t i = 0; i < u.size(); ++i) prod[i] = rho_[i] * u[i];
    return kernel_.convolve(prod);
}

ComplexField ScatteringOperator::apply_K_adjoint(const ComplexField& v) const {
    ComplexField masked = v;
    mask_to_safe_ball(masked);
    ComplexField out = kernel_.convolve_adjoint(masked);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::conj(rho_[i]);
    return out;
}

ComplexField apply_H(const ComplexField& phi, const RootSystem& rs) { return PeriodizedKernel(rs, phi.spec).convolve(phi); }

ComplexField apply_K(const ComplexField& u, const PotentialRealization& rho, const RootSystem& rs) {
    return ScatteringOperator(rho.rho, rs).apply_K(u);
}

BornSeries born_terms(const ScatteringOperator& op, const Direction& theta, int J) {
    if (J < 1) throw DomainError("born_terms: J must be >= 1");
    BornSeries out;
    out.terms.reserve(J + 1);
    out.terms.push_back(incident_wave(theta, op.kappa(), op.spec()));
    for (int j = 1; j <= J; ++j) out.terms.push_back(op.apply_K(out.terms.back()));
    out.diverging = l2_norm(out.terms[J]) >= l2_norm(out.terms[J - 1]);
    return out;
}

WaveField solve_ls(const ScatteringOperator& op, const Direction& theta, const SolveConfig& cfg) {
    validate_solve_config(cfg);
    return cfg.krylov ? gmres(op, theta, cfg) : fixed_point(op, theta, cfg);
}

WaveField solve_ls(const PotentialRealization& rho, const Direction& theta, double kappa, int n,
                   const SolveConfig& cfg) {
    return solve_ls(ScatteringOperator(rho.rho, root_system(kappa, n)), theta, cfg);
}

double ls_residual(const ScatteringOperator& op, const ComplexField& u, const ComplexField& u_inc) {
    const ComplexField ku = op.apply_K(u);
    double r2 = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) r2 += std::norm(u[i] - ku[i] - u_inc[i]);
    return std::sqrt(r2) / l2_norm(u_inc);
}

double contraction_ratio(const ScatteringOperator& op, const Direction& theta, int J) {
    if (J < 2) throw DomainError("contraction_ratio: J must be >= 2");
    ComplexField prev = incident_wave(theta, op.kappa(), op.spec());
    ComplexField cur = op.apply_K(prev);
    for (int j = 2; j <= J; ++j) {
        prev = std::move(cur);
        cur = op.apply_K(prev);
    }
    const double denom = l2_norm(prev);
    return denom == 0.0 ? 0.0 : l2_norm(cur) / denom;
}

double operator_norm_estimate(const ScatteringOperator& op, int iterations, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    boost::random::normal_distribution<double> normal;
    ComplexField v(op.spec());
    for (auto& x : v.values) x = Complex(normal(rng), normal(rng));
    mask_to_safe_ball(v);
    double sigma2 = 0.0;
    for (int it = 0; it < iterations; ++it) {
        const double vn = l2_norm(v);
        if (vn == 0.0) return 0.0;
        for (auto& x : v.values) x /= vn;
        ComplexField w = op.apply_K_adjoint(op.apply_K(v));
        sigma2 = std::real(inner(v.values, w.values));
        v = std::move(w);
    }
    return std::sqrt(std::max(0.0, sigma2));
}

}  // namespace polyscatter
