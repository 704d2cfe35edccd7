#include "polyscatter/inverse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "polyscatter/parallel.hpp"

namespace polyscatter {
namespace {

std::size_t lattice_shift(const KappaLattice& lat, double tau) {
    if (tau < 0.0) throw DomainError("tau must be nonnegative");
    const double s = tau / lat.step;
    const double r = std::round(s);
    if (std::abs(s - r) > 1e-9 * std::max(1.0, s)) {
        std::ostringstream msg;
        msg << "tau " << tau << " is not a multiple of the kappa step " << lat.step;
        throw BandCoverageError(msg.str());
    }
    return static_cast<std::size_t>(r);
}

struct RasterPoint {
    std::size_t ring;
    Vec dir;
    Complex c;
    Complex r;
    int hits;
};

double angle_of(const Vec& v) {
    const double a = std::atan2(v[1], v[0]);
    return a < 0.0 ? a + 2.0 * kPi : a;
}

}  // namespace

StrengthEstimate strength_fourier_estimate_weighted(const SweepDataset& ds, const Direction& x_hat, double tau, double m,
                                                    double Q, double weight_exponent) {
    const std::size_t dir = ds.direction_index(x_hat);
    if (ds.records.size() != 2 * ds.directions.size() * ds.lattice.count) {
        throw OrientationMissing("dataset does not hold both orientations for every direction");
    }
    const std::size_t i0 = ds.lattice.index_of(Q);
    const std::size_t i1 = ds.lattice.index_of(2.0 * Q);
    const std::size_t shift = lattice_shift(ds.lattice, tau);
    if (i1 + shift >= ds.lattice.count) {
        std::ostringstream msg;
        msg << "band [" << Q << ", " << 2.0 * Q + tau << "] exceeds dataset maximum " << ds.lattice.kappa_max();
        throw BandCoverageError(msg.str());
    }

    const std::size_t samples = i1 - i0 + 1;
    const std::size_t batches = std::min(kEstimateBatches, samples);
    std::vector<Complex> batch_c(batches, 0.0), batch_r(batches, 0.0);
    std::vector<double> batch_w(batches, 0.0);
    Complex sum_c = 0.0;
    Complex sum_r = 0.0;
    for (std::size_t i = i0; i <= i1; ++i) {
        const double kappa = ds.lattice.at(i);
        const double w = ((i == i0 || i == i1) ? 0.5 : 1.0) * ds.lattice.step * std::pow(kappa, weight_exponent);
        const Complex shifted = ds.forward(dir, i + shift);
        const Complex pc = w * shifted * std::conj(ds.forward(dir, i));
        const Complex pr = w * shifted * ds.backward(dir, i);
        sum_c += pc;
        sum_r += pr;
        const std::size_t b = (i - i0) * batches / samples;
        batch_c[b] += pc;
        batch_r[b] += pr;
        batch_w[b] += ((i == i0 || i == i1) ? 0.5 : 1.0) * ds.lattice.step;
    }
    const Complex cd = farfield_constant(ds.d).value;
    const double scale = ds.n * ds.n * std::pow(2.0, m) / Q;

    // Each batch is rescaled to a full-band estimate; SE of the mean over batches.
    auto batch_se = [&](const std::vector<Complex>& sums) {
        if (batches < 2) return 0.0;
        std::vector<Complex> est(batches);
        Complex mean = 0.0;
        for (std::size_t b = 0; b < batches; ++b) {
            est[b] = sums[b] * (Q / batch_w[b]);
            mean += est[b];
        }
        mean /= static_cast<double>(batches);
        double var = 0.0;
        for (const auto& e : est) var += std::norm(e - mean);
        var /= static_cast<double>(batches - 1);
        return std::sqrt(var / static_cast<double>(batches));
    };

    StrengthEstimate est;
    est.x_hat = ds.directions[dir];
    est.tau = tau;
    est.xi = (2.0 * tau) * est.x_hat.vec();
    est.c_hat = scale * sum_c / std::norm(cd);
    est.r_hat = scale * sum_r / (cd * cd);
    est.c_se = scale * batch_se(batch_c) / std::norm(cd);
    est.r_se = scale * batch_se(batch_r) / std::norm(cd);
    est.Q = Q;
    est.n_kappa = samples;
    return est;
}

StrengthEstimate strength_fourier_estimate(const SweepDataset& ds, const Direction& x_hat, double tau, double m, double Q) {
    return strength_fourier_estimate_weighted(ds, x_hat, tau, m, Q, m + 4.0 * ds.n - ds.d - 1.0);
}

ExpectationReport expectation_check(const PotentialSpec& spec, int n, const Direction& x_hat, double tau, double kappa,
                                    std::size_t n_realizations, std::uint64_t seed) {
    if (n_realizations < 50) throw InsufficientSamples("expectation_check needs at least 50 realizations");
    const GridSpec& g = spec.a1.spec;
    const int d = g.d;
    const double m = spec.order();
    const RootSystem rs0 = root_system(kappa, n);
    const RootSystem rs1 = root_system(kappa + tau, n);
    const Complex p0 = farfield_prefactor(rs0, d);
    const Complex p1 = farfield_prefactor(rs1, d);
    const double weight = std::pow(kappa, m + 4.0 * n - d - 1.0);
    const Vec xi0 = (2.0 * kappa) * x_hat.vec();
    const Vec xi1 = (2.0 * (kappa + tau)) * x_hat.vec();

    std::vector<Complex> sc(n_realizations), sr(n_realizations);
    parallel_for(n_realizations, [&](std::size_t s) {
        PotentialRealization real = sample_complex_gmig(spec, derive_seed(seed, s));
        mask_to_safe_ball(real.rho);
        const Complex u_shift = p1 * fourier_at(real.rho, xi1);
        const Complex u_plus = p0 * fourier_at(real.rho, xi0);
        const Complex u_minus = p0 * fourier_at(real.rho, -xi0);
        sc[s] = weight * u_shift * std::conj(u_plus);
        sr[s] = weight * u_shift * u_minus;
    });

    auto stats = [](const std::vector<Complex>& v, Complex& mean, double& se) {
        mean = 0.0;
        for (const auto& x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double var = 0.0;
        for (const auto& x : v) var += std::norm(x - mean);
        var /= static_cast<double>(v.size() - 1);
        se = std::sqrt(var / static_cast<double>(v.size()));
    };

    ExpectationReport rep;
    rep.kappa = kappa;
    rep.tau = tau;
    rep.count = n_realizations;
    stats(sc, rep.mean_c, rep.se_c);
    stats(sr, rep.mean_r, rep.se_r);

    const Complex cd = farfield_constant(d).value;
    const double decay = std::pow(kappa / (kappa + tau), 2.0 * n - 0.5 * (d + 1));
    const double base = decay / (n * n * std::pow(2.0, m));
    const Vec xi = (2.0 * tau) * x_hat.vec();
    rep.target_c = base * std::norm(cd) * fourier_at(to_complex(spec.strength_c()), xi);
    rep.target_r = base * cd * cd * fourier_at(to_complex(spec.strength_r()), xi);
    return rep;
}

ReconstructionResult reconstruct_strengths(const std::vector<StrengthEstimate>& estimates, const GridSpec& target) {
    ReconstructionResult out;
    out.estimates = estimates;
    out.a_c = RealField(target);
    out.a_r = RealField(target);
    if (estimates.empty()) throw CoverageError("no estimates to reconstruct from");
    const int d = target.d;

    // Rings by tau.
    std::vector<double> taus;
    for (const auto& e : estimates) {
        if (e.tau < 0.0) throw DomainError("negative tau in estimates");
        bool seen = false;
        for (double t : taus) seen = seen || std::abs(t - e.tau) < 1e-9;
        if (!seen) taus.push_back(e.tau);
    }
    std::sort(taus.begin(), taus.end());
    auto ring_of = [&](double tau) {
        for (std::size_t i = 0; i < taus.size(); ++i) {
            if (std::abs(taus[i] - tau) < 1e-9) return i;
        }
        return taus.size();
    };

    // Hermitian symmetrization: merge each estimate with the mirror of its partner.
    std::vector<RasterPoint> pts;
    auto add = [&](std::size_t ring, const Vec& dir, Complex c, Complex r) {
        for (auto& p : pts) {
            if (p.ring == ring && (taus[ring] == 0.0 || norm(p.dir - dir) < 1e-9)) {
                p.c += c;
                p.r += r;
                ++p.hits;
                return;
            }
        }
        pts.push_back({ring, dir, c, r, 1});
    };
    for (const auto& e : estimates) {
        const std::size_t ring = ring_of(e.tau);
        add(ring, e.x_hat.vec(), e.c_hat, e.r_hat);
        add(ring, -e.x_hat.vec(), std::conj(e.c_hat), std::conj(e.r_hat));
    }
    for (auto& p : pts) {
        p.c /= p.hits;
        p.r /= p.hits;
    }

    std::vector<double> radii(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) radii[i] = 2.0 * taus[i];
    std::vector<double> gaps;
    for (std::size_t i = 1; i < radii.size(); ++i) gaps.push_back(radii[i] - radii[i - 1]);
    double spacing = 0.0;
    if (!gaps.empty()) {
        std::vector<double> sorted = gaps;
        std::sort(sorted.begin(), sorted.end());
        spacing = sorted[sorted.size() / 2];
    }

    CoverageReport& cov = out.coverage;
    cov.max_radius = radii.back();
    cov.ring_spacing = spacing;
    if (radii.front() > 0.0) {
        cov.dc_gap = radii.front();
        if (spacing == 0.0 || radii.front() > spacing) {
            throw CoverageError("frequency raster leaves a hole around xi = 0 wider than the ring spacing");
        }
    }
    if (spacing == 0.0 && radii.front() > 0.0) throw CoverageError("single nonzero ring cannot be synthesized");

    std::vector<double> r_in(radii.size()), r_out(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double lo = i == 0 ? std::max(0.0, radii[0] - 0.5 * spacing) : 0.5 * (radii[i - 1] + radii[i]);
        const double hi = i + 1 < radii.size() ? 0.5 * (radii[i] + radii[i + 1]) : radii[i] + 0.5 * spacing;
        r_in[i] = radii[i] == 0.0 ? 0.0 : lo;
        r_out[i] = hi;
    }

    // Quadrature weights.
    std::vector<double> weight(pts.size(), 0.0);
    double max_gap = 0.0;
    for (std::size_t ring = 0; ring < radii.size(); ++ring) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (pts[i].ring == ring) members.push_back(i);
        }
        if (radii[ring] == 0.0) {
            const double vol = d == 2 ? kPi * r_out[ring] * r_out[ring] : 4.0 / 3.0 * kPi * std::pow(r_out[ring], 3);
            for (auto i : members) weight[i] = vol / members.size();
            continue;
        }
        if (d == 2) {
            std::sort(members.begin(), members.end(),
                      [&](std::size_t a, std::size_t b) { return angle_of(pts[a].dir) < angle_of(pts[b].dir); });
            const std::size_t k = members.size();
            for (std::size_t j = 0; j < k; ++j) {
                const double a = angle_of(pts[members[j]].dir);
                const double prev = angle_of(pts[members[(j + k - 1) % k]].dir);
                const double next = angle_of(pts[members[(j + 1) % k]].dir);
                double gp = a - prev;
                double gn = next - a;
                if (gp <= 0.0) gp += 2.0 * kPi;
                if (gn <= 0.0) gn += 2.0 * kPi;
                max_gap = std::max(max_gap, gn);
                const double span = 0.5 * (gp + gn);
                weight[members[j]] = 0.5 * span * (r_out[ring] * r_out[ring] - r_in[ring] * r_in[ring]);
            }
        } else {
            const double omega = 4.0 * kPi / members.size();
            for (auto i : members) weight[i] = omega / 3.0 * (std::pow(r_out[ring], 3) - std::pow(r_in[ring], 3));
            for (auto i : members) {
                double nearest = kPi;
                for (auto j : members) {
                    if (i == j) continue;
                    const double c = std::clamp(dot(pts[i].dir, pts[j].dir), -1.0, 1.0);
                    nearest = std::min(nearest, std::acos(c));
                }
                max_gap = std::max(max_gap, nearest);
            }
        }
    }
    cov.max_angular_gap = max_gap;
    if (max_gap > kPi / 4.0) {
        cov.flagged = true;
        std::ostringstream msg;
        msg << "largest angular gap " << max_gap * 180.0 / kPi << " deg leaves unsampled cones";
        cov.notes.push_back(msg.str());
    }

    double peak = 0.0;
    double outer = 0.0;
    std::size_t outer_count = 0;
    for (const auto& p : pts) {
        peak = std::max(peak, std::abs(p.c));
        if (p.ring + 1 == radii.size()) {
            outer += std::abs(p.c);
            ++outer_count;
        }
    }
    if (outer_count > 0 && peak > 0.0 && outer / outer_count > 0.5 * peak) {
        throw CoverageError("outermost frequency ring still carries more than half the peak spectrum");
    }

    const double norm_factor = std::pow(2.0 * kPi, -d);
    std::vector<Complex> c_val(target.size()), r_val(target.size());
    parallel_for(target.size(), [&](std::size_t i) {
        const Vec x = target.point(i);
        Complex sc = 0.0;
        Complex sr = 0.0;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            const Vec xi = radii[pts[j].ring] * pts[j].dir;
            const Complex e = std::exp(Complex(0.0, dot(x, xi)));
            sc += weight[j] * pts[j].c * e;
            sr += weight[j] * pts[j].r * e;
        }
        c_val[i] = norm_factor * sc;
        r_val[i] = norm_factor * sr;
    });
    for (std::size_t i = 0; i < target.size(); ++i) {
        out.a_c[i] = c_val[i].real();
        out.a_r[i] = r_val[i].real();
        out.a_c_imag_max = std::max(out.a_c_imag_max, std::abs(c_val[i].imag()));
        out.a_r_imag_max = std::max(out.a_r_imag_max, std::abs(r_val[i].imag()));
    }
    return out;
}

void score_reconstruction(ReconstructionResult& result, const RealField& true_c, const RealField& true_r) {
    auto rel = [](const RealField& a, const RealField& b) {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            num += (a[i] - b[i]) * (a[i] - b[i]);
            den += b[i] * b[i];
        }
        return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    };
    result.a_c_error = rel(result.a_c, true_c);
    result.a_r_error = rel(result.a_r, true_r);
}

double fit_order_from_decay(const SweepDataset& ds) {
    const std::size_t count = ds.lattice.count;
    if (count < 2 || ds.directions.empty()) throw InsufficientSamples("need at least two wavenumbers to fit an order");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
        double ms = 0.0;
        for (std::size_t dir = 0; dir < ds.directions.size(); ++dir) {
            ms += std::norm(ds.forward(dir, k)) + std::norm(ds.backward(dir, k));
        }
        ms /= 2.0 * ds.directions.size();
        const double x = std::log(ds.lattice.at(k));
        const double y = 0.5 * std::log(ms);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double c = static_cast<double>(count);
    const double slope = (c * sxy - sx * sy) / (c * sxx - sx * sx);
    const double alpha = 2.0 * ds.n - 0.5 * (ds.d + 1);
    return -2.0 * (slope + alpha);
}

}  // namespace polyscatter
