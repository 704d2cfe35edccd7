#include "polyscatter/farfield.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "polyscatter/field_io.hpp"
#include "polyscatter/parallel.hpp"

namespace polyscatter {
namespace {

constexpr std::size_t kReseedInterval = 64;

struct SupportCell {
    Vec y;
    double re;
    double im;
};

std::vector<SupportCell> support_cells(const ComplexField& rho) {
    std::vector<SupportCell> cells;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const Complex v = rho[i];
        if (v.real() != 0.0 || v.imag() != 0.0) cells.push_back({rho.spec.point(i), v.real(), v.imag()});
    }
    return cells;
}

// Sum rho(y) e^{-2 i kappa_k p} and rho(y) e^{+2 i kappa_k p}, p = xhat.y, over the lattice.
void born1_sums(const std::vector<SupportCell>& cells, const Direction& x_hat, const KappaLattice& lat,
                std::vector<Complex>& plus, std::vector<Complex>& minus) {
    plus.assign(lat.count, 0.0);
    minus.assign(lat.count, 0.0);
    std::vector<double> pr(kReseedInterval), pi(kReseedInterval), mr(kReseedInterval), mi(kReseedInterval);
    for (std::size_t k0 = 0; k0 < lat.count; k0 += kReseedInterval) {
        const std::size_t len = std::min(kReseedInterval, lat.count - k0);
        std::fill(pr.begin(), pr.end(), 0.0);
        std::fill(pi.begin(), pi.end(), 0.0);
        std::fill(mr.begin(), mr.end(), 0.0);
        std::fill(mi.begin(), mi.end(), 0.0);
        const double kappa0 = lat.at(k0);
        for (const SupportCell& c : cells) {
            const double p = dot(x_hat.vec(), c.y);
            double er = std::cos(2.0 * kappa0 * p);
            double ei = -std::sin(2.0 * kappa0 * p);
            const double sr = std::cos(2.0 * lat.step * p);
            const double si = -std::sin(2.0 * lat.step * p);
            for (std::size_t k = 0; k < len; ++k) {
                // rho * e and rho * conj(e)
                pr[k] += c.re * er - c.im * ei;
                pi[k] += c.re * ei + c.im * er;
                mr[k] += c.re * er + c.im * ei;
                mi[k] += c.im * er - c.re * ei;
                const double nr = er * sr - ei * si;
                ei = er * si + ei * sr;
                er = nr;
            }
        }
        for (std::size_t k = 0; k < len; ++k) {
            plus[k0 + k] = Complex(pr[k], pi[k]);
            minus[k0 + k] = Complex(mr[k], mi[k]);
        }
    }
}

nlohmann::json direction_json(const Direction& x, int d) {
    nlohmann::json a = nlohmann::json::array();
    for (int i = 0; i < d; ++i) a.push_back(x[i]);
    return a;
}

}  // namespace

Complex farfield_from_total(const WaveField& u, const ComplexField& rho, const Direction& x_hat, const RootSystem& rs) {
    const GridSpec& g = rho.spec;
    if (!(u.values.spec == g)) throw DomainError("farfield_from_total: grid mismatch");
    const double r2 = g.safe_radius() * g.safe_radius();
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const Complex v = rho[i];
        if (v.real() == 0.0 && v.imag() == 0.0) continue;
        const Vec y = g.point(i);
        if (dot(y, y) > r2) continue;
        const Complex w = v * u.values[i] * std::exp(Complex(0.0, -rs.kappa * dot(x_hat.vec(), y)));
        re += w.real();
        im += w.imag();
    }
    return farfield_prefactor(rs, g.d) * g.cell_volume() * Complex(re, im);
}

Complex born1_farfield(const ComplexField& rho, const Direction& x_hat, double kappa, int n) {
    const RootSystem rs = root_system(kappa, n);
    ComplexField masked = rho;
    mask_to_safe_ball(masked);
    return farfield_prefactor(rs, rho.spec.d) * fourier_at(masked, 2.0 * kappa * x_hat.vec());
}

std::size_t KappaLattice::index_of(double kappa) const {
    const double pos = (kappa - kappa_min) / step;
    const double rounded = std::round(pos);
    if (std::abs(pos - rounded) > 1e-9 * std::max(1.0, std::abs(pos)) || rounded < 0.0 ||
        rounded >= static_cast<double>(count)) {
        std::ostringstream msg;
        msg << "kappa " << kappa << " is not on the lattice [" << kappa_min << ", " << kappa_max() << "] step "
            << step;
        throw BandCoverageError(msg.str());
    }
    return static_cast<std::size_t>(rounded);
}

KappaLattice make_lattice(double kappa_lo, double kappa_hi, double step) {
    if (!(step > 0.0) || !(kappa_lo > 0.0) || !(kappa_hi >= kappa_lo)) {
        throw ValidationError("kappa band must satisfy 0 < lo <= hi and step > 0");
    }
    KappaLattice lat;
    lat.kappa_min = kappa_lo;
    lat.step = step;
    lat.count = static_cast<std::size_t>(std::floor((kappa_hi - kappa_lo) / step + 1e-9)) + 1;
    return lat;
}

std::size_t SweepDataset::direction_index(const Direction& x_hat) const {
    for (std::size_t i = 0; i < directions.size(); ++i) {
        if (norm(directions[i].vec() - x_hat.vec()) < 1e-12) return i;
    }
    throw OrientationMissing("direction not present in sweep dataset");
}

std::vector<Direction> direction_set(int d, std::size_t count) {
    require_dimension(d);
    std::vector<Direction> dirs;
    dirs.reserve(count);
    if (d == 2) {
        for (std::size_t k = 0; k < count; ++k) dirs.push_back(Direction::planar(2.0 * kPi * k / count));
        return dirs;
    }
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (std::size_t k = 0; k < count; ++k) {
        const double z = 1.0 - (2.0 * k + 1.0) / count;
        const double rxy = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * k;
        dirs.emplace_back(Vec{{rxy * std::cos(phi), rxy * std::sin(phi), z}});
    }
    return dirs;
}

SweepDataset backscatter_sweep(const ComplexField& rho_in, const SweepConfig& cfg, std::uint64_t seed) {
    validate_solve_config(cfg.solver);
    if (cfg.directions.empty()) throw ValidationError("sweep needs at least one direction");
    const GridSpec& g = rho_in.spec;
    ComplexField rho = rho_in;
    mask_to_safe_ball(rho);

    SweepDataset ds;
    ds.d = g.d;
    ds.n = cfg.n;
    ds.directions = cfg.directions;
    ds.lattice = make_lattice(cfg.kappa_lo, cfg.kappa_hi, cfg.kappa_step);
    ds.born_order = cfg.solver.born_order;
    ds.seed = seed;
    const std::size_t count = ds.lattice.count;
    ds.records.resize(2 * cfg.directions.size() * count);

    auto store = [&](std::size_t dir, std::size_t k, Complex fwd, Complex bwd) {
        const Direction& x = ds.directions[dir];
        const double kappa = ds.lattice.at(k);
        ds.records[2 * (dir * count + k)] = {x, -x, kappa, fwd, ds.born_order};
        ds.records[2 * (dir * count + k) + 1] = {-x, x, kappa, bwd, ds.born_order};
    };

    if (cfg.solver.born_order == 1) {
        const auto cells = support_cells(rho);
        const double hd = g.cell_volume();
        parallel_for(ds.directions.size(), [&](std::size_t dir) {
            std::vector<Complex> plus, minus;
            born1_sums(cells, ds.directions[dir], ds.lattice, plus, minus);
            for (std::size_t k = 0; k < count; ++k) {
                const Complex pref = farfield_prefactor(root_system(ds.lattice.at(k), cfg.n), g.d) * hd;
                store(dir, k, pref * plus[k], pref * minus[k]);
            }
        });
        return ds;
    }

    parallel_for(count, [&](std::size_t k) {
        const RootSystem rs = root_system(ds.lattice.at(k), cfg.n);
        const ScatteringOperator op(rho, rs);
        auto total = [&](const Direction& theta) {
            if (cfg.solver.born_order == kFullSolve) return solve_ls(op, theta, cfg.solver);
            BornSeries series = born_terms(op, theta, cfg.solver.born_order - 1);
            WaveField w{series.terms[0], theta, rs.kappa, 0.0, cfg.solver.born_order - 1};
            for (int j = 1; j < cfg.solver.born_order; ++j) {
                for (std::size_t i = 0; i < w.values.size(); ++i) w.values[i] += series.terms[j][i];
            }
            return w;
        };
        for (std::size_t dir = 0; dir < ds.directions.size(); ++dir) {
            const Direction& x = ds.directions[dir];
            const Complex fwd = farfield_from_total(total(-x), rho, x, rs);
            const Complex bwd = farfield_from_total(total(x), rho, -x, rs);
            store(dir, k, fwd, bwd);
        }
    });
    return ds;
}

void write_sweep(const std::filesystem::path& path, const SweepDataset& ds) {
    std::string buf;
    buf.append("PSSW", 4);
    le::put_u32(buf, 1);
    le::put_u32(buf, static_cast<std::uint32_t>(ds.d));
    le::put_u32(buf, 0);
    le::put_u64(buf, ds.records.size());
    for (const auto& r : ds.records) {
        for (int i = 0; i < ds.d; ++i) le::put_f64(buf, r.x_hat[i]);
        for (int i = 0; i < ds.d; ++i) le::put_f64(buf, r.theta[i]);
        le::put_f64(buf, r.kappa);
        le::put_f64(buf, r.value.real());
        le::put_f64(buf, r.value.imag());
    }
    write_file_bytes(path, buf);

    nlohmann::json meta = ds.provenance;
    meta["format"] = "PSSW";
    meta["d"] = ds.d;
    meta["n"] = ds.n;
    meta["born_order"] = ds.born_order;
    meta["seed"] = ds.seed;
    meta["kappa_min"] = ds.lattice.kappa_min;
    meta["kappa_step"] = ds.lattice.step;
    meta["kappa_count"] = ds.lattice.count;
    nlohmann::json dirs = nlohmann::json::array();
    for (const auto& x : ds.directions) dirs.push_back(direction_json(x, ds.d));
    meta["directions"] = dirs;
    write_sidecar(path, meta);
}

SweepDataset read_sweep(const std::filesystem::path& path) {
    const std::string buf = read_file_bytes(path);
    if (buf.size() < 24 || std::memcmp(buf.data(), "PSSW", 4) != 0) throw IoError(path.string() + ": not a sweep file");
    if (le::get_u32(buf.data() + 4) != 1) throw IoError(path.string() + ": unsupported version");
    SweepDataset ds;
    ds.d = static_cast<int>(le::get_u32(buf.data() + 8));
    if (ds.d != 2 && ds.d != 3) throw IoError(path.string() + ": bad dimension");
    const std::uint64_t count = le::get_u64(buf.data() + 16);
    const std::size_t rec_bytes = 8 * (2 * ds.d + 3);
    if (buf.size() != 24 + count * rec_bytes) throw IoError(path.string() + ": truncated records");

    const nlohmann::json meta = read_sidecar(path);
    try {
        ds.n = meta.at("n").get<int>();
        ds.born_order = meta.at("born_order").get<int>();
        ds.seed = meta.at("seed").get<std::uint64_t>();
        ds.lattice.kappa_min = meta.at("kappa_min").get<double>();
        ds.lattice.step = meta.at("kappa_step").get<double>();
        ds.lattice.count = meta.at("kappa_count").get<std::size_t>();
        for (const auto& a : meta.at("directions")) {
            Vec v;
            for (int i = 0; i < ds.d; ++i) v[i] = a.at(i).get<double>();
            ds.directions.emplace_back(v);
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(path.string() + ".json: " + e.what());
    }
    ds.provenance = meta;
    if (count != 2 * ds.directions.size() * ds.lattice.count) throw IoError(path.string() + ": record count mismatch");

    const char* p = buf.data() + 24;
    ds.records.reserve(count);
    for (std::uint64_t r = 0; r < count; ++r, p += rec_bytes) {
        Vec x, t;
        for (int i = 0; i < ds.d; ++i) x[i] = le::get_f64(p + 8 * i);
        for (int i = 0; i < ds.d; ++i) t[i] = le::get_f64(p + 8 * (ds.d + i));
        const double kappa = le::get_f64(p + 16 * ds.d);
        const Complex v(le::get_f64(p + 16 * ds.d + 8), le::get_f64(p + 16 * ds.d + 16));
        ds.records.push_back({Direction(x), Direction(t), kappa, v, ds.born_order});
    }
    return ds;
}

}  // namespace polyscatter
