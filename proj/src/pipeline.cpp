#include "polyscatter/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "polyscatter/field_io.hpp"
#include "polyscatter/oracle.hpp"
#include "polyscatter/special_fn.hpp"

namespace polyscatter {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::uint64_t kRealizationStream = 0;
constexpr std::uint64_t kVerifyStream = 100;

json provenance(const ExperimentConfig& cfg) {
    return {{"config_hash", config_hash(cfg)}, {"seed", cfg.seed}, {"n", cfg.n}};
}

void write_field_with_meta(const fs::path& path, const ComplexField& f, const ExperimentConfig& cfg, json extra) {
    write_field(path, f);
    json meta = provenance(cfg);
    meta.update(extra);
    meta["grid"] = {{"d", f.spec.d}, {"L", f.spec.L}, {"N", f.spec.N}};
    write_sidecar(path, meta);
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

struct Truth {
    RealField a_c;
    RealField a_r;
    ComplexField a_c_complex;
    ComplexField a_r_complex;
};

Truth truth_of(const PotentialSpec& p) {
    Truth t{p.strength_c(), p.strength_r(), {}, {}};
    t.a_c_complex = to_complex(t.a_c);
    t.a_r_complex = to_complex(t.a_r);
    return t;
}

template <typename F>
double timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const char* kPlotStrengths = R"(import csv
import sys
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "cross_section.csv"
rows = [r for r in csv.reader(open(path)) if r and not r[0].startswith("#")]
head, data = rows[0], [[float(x) for x in r] for r in rows[1:]]
x = [r[0] for r in data]
for k in range(1, len(head)):
    plt.plot(x, [r[k] for r in data], label=head[k])
plt.xlabel("x")
plt.legend()
plt.savefig("cross_section.png", dpi=150)
)";

const char* kPlotEstimates = R"(import csv
import sys
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "estimate_vs_Q.csv"
rows = [r for r in csv.reader(open(path)) if r and not r[0].startswith("#")]
data = [[float(x) for x in r] for r in rows[1:]]
plt.loglog([r[0] for r in data], [r[1] for r in data], "o-", label="median relative error, c")
plt.loglog([r[0] for r in data], [r[2] for r in data], "s-", label="median |r - r_true| / max|c_true|")
plt.xlabel("Q")
plt.legend()
plt.savefig("estimate_vs_Q.png", dpi=150)
)";

}  // namespace

Direction direction_from_angles(int d, const std::vector<double>& angles) {
    if (d == 2) {
        if (angles.size() != 1) throw ValidationError("2D incidence takes one angle");
        return Direction::planar(angles[0]);
    }
    if (angles.size() != 2) throw ValidationError("3D incidence takes two angles (theta, phi)");
    return Direction::spherical(angles[0], angles[1]);
}

void write_csv(const fs::path& path, const ExperimentConfig& cfg, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::string text = "# config_hash=" + config_hash(cfg) + " seed=" + std::to_string(cfg.seed) + "\n";
    text += header + "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) text += ",";
            text += num(r[i]);
        }
        text += "\n";
    }
    write_file_bytes(path, text);
}

SampleOutputs run_sample_field(const ExperimentConfig& cfg) {
    SampleOutputs out{build_potential(cfg), {}};
    out.realization = sample_complex_gmig(out.spec, derive_seed(cfg.seed, kRealizationStream));
    const Truth t = truth_of(out.spec);
    write_field_with_meta(cfg.output / "rho.psfd", out.realization.rho, cfg,
                          {{"quantity", "rho"}, {"m1", cfg.m1}, {"m2", cfg.m2}});
    write_field_with_meta(cfg.output / "strength_c.psfd", t.a_c_complex, cfg, {{"quantity", "a_c"}});
    write_field_with_meta(cfg.output / "strength_r.psfd", t.a_r_complex, cfg, {{"quantity", "a_r"}});
    return out;
}

WaveField run_forward(const ExperimentConfig& cfg, const ForwardRequest& req) {
    const SampleOutputs s = run_sample_field(cfg);
    const Direction theta = direction_from_angles(cfg.grid.d, req.theta_angles);
    const RootSystem rs = root_system(req.kappa, cfg.n);
    const ScatteringOperator op(s.realization.rho, rs);
    WaveField u;
    if (cfg.solver.born_order == 0) {
        u = solve_ls(op, theta, cfg.solver);
    } else {
        const BornSeries b = born_terms(op, theta, std::max(1, cfg.solver.born_order));
        u = {b.terms[0], theta, req.kappa, 0.0, cfg.solver.born_order};
        for (std::size_t j = 1; j < b.terms.size(); ++j) {
            for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] += b.terms[j][i];
        }
        u.residual = ls_residual(op, u.values, b.terms[0]);
    }
    const fs::path out = req.out.empty() ? cfg.output / "field.psfd" : req.out;
    json theta_json = json::array();
    for (int i = 0; i < cfg.grid.d; ++i) theta_json.push_back(theta[i]);
    write_field_with_meta(out, u.values, cfg,
                          {{"quantity", "total_field"},
                           {"kappa", req.kappa},
                           {"theta", theta_json},
                           {"residual", u.residual},
                           {"iterations", u.iterations},
                           {"born_order", cfg.solver.born_order == 0 ? json("converge") : json(cfg.solver.born_order)}});
    return u;
}

SweepDataset run_sweep(const ExperimentConfig& cfg) {
    const SampleOutputs s = run_sample_field(cfg);
    SweepConfig sc;
    sc.directions = direction_set(cfg.grid.d, cfg.directions);
    sc.kappa_lo = cfg.kappa_lo;
    sc.kappa_hi = cfg.kappa_hi;
    sc.kappa_step = cfg.kappa_step;
    sc.solver = cfg.solver;
    sc.n = cfg.n;
    SweepDataset ds = backscatter_sweep(s.realization.rho, sc, cfg.seed);
    ds.provenance = provenance(cfg);
    ds.provenance["grid"] = {{"d", cfg.grid.d}, {"L", cfg.grid.L}, {"N", cfg.grid.N}};
    write_sweep(cfg.output / "sweep.pssw", ds);
    return ds;
}

json run_invert(const ExperimentConfig& cfg, const std::optional<fs::path>& sweep_path) {
    const SweepDataset ds = read_sweep(sweep_path.value_or(cfg.output / "sweep.pssw"));
    const PotentialSpec pot = build_potential(cfg);
    const Truth truth = truth_of(pot);
    const double m = cfg.inverse_order();

    double c_scale = 0.0;
    for (double v : truth.a_c.values) c_scale += std::abs(v);
    c_scale *= truth.a_c.spec.cell_volume();

    json summary;
    summary["config_hash"] = config_hash(cfg);
    summary["seed"] = cfg.seed;
    summary["m"] = m;
    json per_q = json::array();
    std::vector<std::vector<double>> rows;
    std::vector<std::vector<double>> q_rows;
    std::vector<StrengthEstimate> last;
    for (double Q : cfg.Q) {
        std::vector<StrengthEstimate> ests;
        std::vector<double> rel_c, dev_r;
        for (const Direction& x : ds.directions) {
            for (double tau : cfg.tau) {
                StrengthEstimate e = strength_fourier_estimate(ds, x, tau, m, Q);
                const Complex tc = fourier_at(truth.a_c_complex, e.xi);
                const Complex tr = fourier_at(truth.a_r_complex, e.xi);
                if (std::abs(tc) > 0.0) rel_c.push_back(std::abs(e.c_hat - tc) / std::abs(tc));
                if (c_scale > 0.0) dev_r.push_back(std::abs(e.r_hat - tr) / c_scale);
                std::vector<double> row{Q, tau};
                for (int i = 0; i < ds.d; ++i) row.push_back(x[i]);
                row.insert(row.end(), {e.c_hat.real(), e.c_hat.imag(), e.r_hat.real(), e.r_hat.imag(), tc.real(),
                                       tc.imag(), tr.real(), tr.imag(), double(e.n_kappa)});
                rows.push_back(std::move(row));
                ests.push_back(e);
            }
        }
        const double mc = median(rel_c);
        const double mr = median(dev_r);
        per_q.push_back({{"Q", Q}, {"median_rel_error_c", mc}, {"median_dev_r", mr}, {"n_estimates", ests.size()}});
        q_rows.push_back({Q, mc, mr});
        last = std::move(ests);
    }
    summary["error_vs_Q"] = per_q;

    std::string header = "Q,tau,";
    header += ds.d == 2 ? "xhat_x,xhat_y," : "xhat_x,xhat_y,xhat_z,";
    header += "c_re,c_im,r_re,r_im,true_c_re,true_c_im,true_r_re,true_r_im,n_kappa";
    write_csv(cfg.output / "estimates.csv", cfg, header, rows);
    write_csv(cfg.output / "estimate_vs_Q.csv", cfg, "Q,median_rel_error_c,median_dev_r", q_rows);

    const GridSpec target(cfg.grid.d, cfg.grid.L, cfg.reconstruction_N);
    json rec;
    try {
        ReconstructionResult r = reconstruct_strengths(last, target);
        const bool bumps_only = !cfg.a1.file && !cfg.a2.file;
        if (bumps_only) {
            const PotentialSpec coarse = make_potential(target, cfg.a1.bumps, cfg.m1, cfg.a2.bumps, cfg.m2);
            score_reconstruction(r, coarse.strength_c(), coarse.strength_r());
            std::vector<std::vector<double>> cs;
            const int mid = target.N / 2;
            for (int k = 0; k < target.N; ++k) {
                std::array<int, 3> idx{mid, mid, mid};
                idx[0] = k;
                const std::size_t f = target.flat_index(idx);
                cs.push_back({target.coordinate(k), coarse.strength_c()[f], r.a_c[f], coarse.strength_r()[f], r.a_r[f]});
            }
            write_csv(cfg.output / "cross_section.csv", cfg, "x,a_c_true,a_c_rec,a_r_true,a_r_rec", cs);
        }
        write_field_with_meta(cfg.output / "reconstruction_c.psfd", to_complex(r.a_c), cfg,
                              {{"quantity", "a_c_reconstructed"}, {"Q", cfg.Q.back()}});
        write_field_with_meta(cfg.output / "reconstruction_r.psfd", to_complex(r.a_r), cfg,
                              {{"quantity", "a_r_reconstructed"}, {"Q", cfg.Q.back()}});
        rec = {{"Q", cfg.Q.back()},
               {"a_c_rel_l2_error", r.a_c_error},
               {"a_r_rel_l2_error", r.a_r_error},
               {"a_c_imag_max", r.a_c_imag_max},
               {"a_r_imag_max", r.a_r_imag_max},
               {"coverage",
                {{"max_radius", r.coverage.max_radius},
                 {"ring_spacing", r.coverage.ring_spacing},
                 {"max_angular_gap_deg", r.coverage.max_angular_gap * 180.0 / kPi},
                 {"flagged", r.coverage.flagged},
                 {"notes", r.coverage.notes}}}};
    } catch (const CoverageError& e) {
        rec = {{"error", e.what()}};
    }
    summary["reconstruction"] = rec;
    summary["fitted_order"] = fit_order_from_decay(ds);
    return summary;
}

json run_verify(const ExperimentConfig& cfg) {
    json checks = json::array();
    bool all_ok = true;
    auto add = [&](const std::string& name, bool ok, json detail) {
        all_ok = all_ok && ok;
        checks.push_back({{"name", name}, {"ok", ok}, {"detail", detail}});
    };
    const std::string hash = config_hash(cfg);

    // Provenance hashes.
    std::size_t sidecars = 0, csvs = 0;
    bool hashes_ok = true;
    std::vector<std::string> mismatched;
    if (fs::exists(cfg.output)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(cfg.output)) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& p : files) {
            const std::string name = p.filename().string();
            if (p.extension() == ".json" && (name.find(".psfd.") != std::string::npos ||
                                             name.find(".pssw.") != std::string::npos)) {
                ++sidecars;
                const json meta = json::parse(read_file_bytes(p));
                if (meta.value("config_hash", "") != hash) {
                    hashes_ok = false;
                    mismatched.push_back(name);
                }
            } else if (p.extension() == ".csv") {
                ++csvs;
                const std::string text = read_file_bytes(p);
                if (text.rfind("# config_hash=" + hash, 0) != 0) {
                    hashes_ok = false;
                    mismatched.push_back(name);
                }
            }
        }
        const fs::path manifest = cfg.output / "manifest.json";
        if (fs::exists(manifest)) {
            const json man = json::parse(read_file_bytes(manifest));
            for (const auto& [file, digest] : man.at("files").items()) {
                const fs::path fp = cfg.output / file;
                if (!fs::exists(fp) || sha256_hex(read_file_bytes(fp)) != digest.get<std::string>()) {
                    hashes_ok = false;
                    mismatched.push_back(file);
                }
            }
        }
    }
    add("provenance_hashes", hashes_ok,
        {{"config_hash", hash}, {"sidecars", sidecars}, {"csv_files", csvs}, {"mismatched", mismatched}});

    // Hankel function against the 50-digit series.
    {
        std::mt19937_64 rng(derive_seed(cfg.seed, kVerifyStream));
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        double worst = 0.0;
        for (int k = 0; k < 40; ++k) {
            const Complex z = std::polar(0.05 + 19.9 * u01(rng), kPi * u01(rng));
            const Complex ref = oracle::hankel0(z);
            worst = std::max(worst, std::abs(special::hankel0_first(z) - ref) / std::abs(ref));
        }
        add("hankel0_vs_series", worst <= 1e-10, {{"max_rel_error", worst}, {"samples", 40}});
    }

    // Root-system factorization.
    {
        const RootSystem rs = root_system(cfg.kappa_lo, cfg.n);
        double worst = 0.0;
        for (int k = 0; k < 10; ++k) {
            const Complex z = std::polar(1.0 + k, 0.7 * k) * std::pow(cfg.kappa_lo, 2);
            const Complex direct = std::pow(z, cfg.n) - std::pow(cfg.kappa_lo, 2 * cfg.n);
            worst = std::max(worst, std::abs(factored_symbol(rs, z) - direct) / std::abs(direct));
        }
        add("root_factorization", worst <= 1e-12, {{"max_rel_error", worst}});
    }

    // FFT convolution against brute-force summation on a small grid.
    {
        const GridSpec small(cfg.grid.d, 1.0, 8);
        const double kappa = 4.0;
        ComplexField phi(small);
        std::vector<std::size_t> pts;
        for (std::size_t i = 0; i < small.size(); ++i) {
            const Vec x = small.point(i);
            if (dot(x, x) <= small.safe_radius() * small.safe_radius()) {
                phi[i] = Complex(1.0 + 0.1 * static_cast<double>(i % 7), 0.3 - 0.05 * static_cast<double>(i % 5));
                pts.push_back(i);
            }
        }
        const ComplexField fast = apply_H(phi, root_system(kappa, cfg.n));
        const auto slow = oracle::direct_volume_potential(phi, kappa, cfg.n, pts);
        double num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            num = std::max(num, std::abs(fast[pts[k]] - slow[k]));
            den = std::max(den, std::abs(slow[k]));
        }
        add("convolution_vs_direct", num / den <= 1e-10, {{"max_rel_error", num / den}});
    }

    // Born-1 correlation identity at the lowest band wavenumber.
    {
        const PotentialSpec pot = build_potential(cfg);
        const Direction x = direction_set(cfg.grid.d, 1)[0];
        const ExpectationReport rep = expectation_check(pot, cfg.n, x, 0.0, cfg.kappa_lo, 60, derive_seed(cfg.seed, kVerifyStream + 1));
        const double z_c = rep.se_c > 0.0 ? std::abs(rep.mean_c - rep.target_c) / rep.se_c : 0.0;
        const double z_r = rep.se_r > 0.0 ? std::abs(rep.mean_r - rep.target_r) / rep.se_r : 0.0;
        add("expectation_identity", z_c <= 4.0 && z_r <= 4.0,
            {{"kappa", rep.kappa}, {"z_score_c", z_c}, {"z_score_r", z_r}, {"realizations", rep.count}});
        write_csv(cfg.output / "verify_expectation.csv", cfg,
                  "kappa,tau,mean_c_re,mean_c_im,se_c,target_c_re,target_c_im,mean_r_re,mean_r_im,se_r,target_r_re,target_r_im",
                  {{rep.kappa, rep.tau, rep.mean_c.real(), rep.mean_c.imag(), rep.se_c, rep.target_c.real(),
                    rep.target_c.imag(), rep.mean_r.real(), rep.mean_r.imag(), rep.se_r, rep.target_r.real(),
                    rep.target_r.imag()}});
    }

    json report = {{"config_hash", hash}, {"seed", cfg.seed}, {"checks", checks}, {"ok", all_ok}};
    write_file_bytes(cfg.output / "verify.json", report.dump(2) + "\n");
    return report;
}

json run_reproduce(const ExperimentConfig& cfg) {
    fs::remove(cfg.output / "manifest.json");
    json timings;
    timings["sample_and_sweep"] = timed([&] { run_sweep(cfg); });
    json summary;
    timings["invert"] = timed([&] { summary = run_invert(cfg); });

    // Keep error-vs-Q rows from earlier runs in this directory for other Q values.
    const fs::path summary_path = cfg.output / "summary.json";
    if (fs::exists(summary_path)) {
        try {
            const json old = json::parse(read_file_bytes(summary_path));
            std::map<double, json> rows;
            for (const auto& r : old.value("error_vs_Q", json::array())) rows[r.at("Q").get<double>()] = r;
            for (const auto& r : summary["error_vs_Q"]) rows[r.at("Q").get<double>()] = r;
            json merged = json::array();
            for (auto& [q, r] : rows) merged.push_back(r);
            summary["error_vs_Q"] = merged;
        } catch (const json::exception&) {
        }
    }
    std::vector<std::vector<double>> q_rows;
    for (const auto& r : summary["error_vs_Q"]) {
        q_rows.push_back({r.at("Q").get<double>(), r.at("median_rel_error_c").get<double>(), r.at("median_dev_r").get<double>()});
    }
    write_csv(cfg.output / "estimate_vs_Q.csv", cfg, "Q,median_rel_error_c,median_dev_r", q_rows);

    summary["warnings"] = cfg.warnings;
    summary["config"] = to_json(cfg);
    write_file_bytes(cfg.output / "plot_strengths.py", kPlotStrengths);
    write_file_bytes(cfg.output / "plot_estimates.py", kPlotEstimates);
    write_file_bytes(summary_path, summary.dump(2) + "\n");

    json verify;
    timings["verify"] = timed([&] { verify = run_verify(cfg); });
    summary["verify_ok"] = verify["ok"];
    write_file_bytes(summary_path, summary.dump(2) + "\n");

    json manifest = {{"config_hash", config_hash(cfg)}, {"seed", cfg.seed}, {"files", json::object()}};
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(cfg.output)) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& p : files) {
        const std::string name = p.filename().string();
        if (name == "manifest.json" || name == "timings.json" || !fs::is_regular_file(p)) continue;
        manifest["files"][name] = sha256_hex(read_file_bytes(p));
    }
    write_file_bytes(cfg.output / "manifest.json", manifest.dump(2) + "\n");
    write_file_bytes(cfg.output / "timings.json", timings.dump(2) + "\n");
    return summary;
}

}  // namespace polyscatter
