#include <CLI11.hpp>

#include <iostream>

#include "polyscatter/pipeline.hpp"

namespace {

using namespace polyscatter;

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<double> tol;
    std::optional<int> max_iter;
    std::optional<std::string> born_order;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--seed", c.seed, "Override the master seed");
    cmd->add_option("--out", c.out, "Override the output directory or file");
    cmd->add_option("--tol", c.tol, "Solver residual tolerance");
    cmd->add_option("--max-iter", c.max_iter, "Solver iteration cap");
    cmd->add_option("--born-order", c.born_order, "Born order (integer) or 'converge'");
}

ExperimentConfig load(const Common& c, bool out_is_dir = true) {
    ExperimentConfig cfg = load_config_file(c.config);
    if (c.seed) cfg.seed = *c.seed;
    if (c.out && out_is_dir) cfg.output = *c.out;
    if (c.tol) cfg.solver.tol = *c.tol;
    if (c.max_iter) cfg.solver.max_iter = *c.max_iter;
    if (c.born_order) {
        if (*c.born_order == "converge") {
            cfg.solver.born_order = 0;
        } else {
            try {
                cfg.solver.born_order = std::stoi(*c.born_order);
            } catch (const std::exception&) {
                throw ValidationError("--born-order takes an integer or 'converge'");
            }
        }
    }
    validate(cfg);
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polyharmonic scattering by random potentials: simulation and strength reconstruction"};
    app.require_subcommand(1);

    Common sample_opts, fwd_opts, sweep_opts, inv_opts, ver_opts, rep_opts;
    auto* sample = app.add_subcommand("sample-field", "Sample one potential realization and its strengths");
    add_common(sample, sample_opts);

    auto* fwd = app.add_subcommand("forward", "Solve for the total field at one wavenumber and incidence");
    add_common(fwd, fwd_opts);
    double kappa = 16.0;
    std::vector<double> theta{0.0};
    fwd->add_option("--kappa", kappa, "Modified wavenumber")->required();
    fwd->add_option("--theta", theta, "Incidence angles: phi (2D) or theta phi (3D)");

    auto* sweep = app.add_subcommand("sweep", "Backscatter far-field sweep over the configured band");
    add_common(sweep, sweep_opts);

    auto* inv = app.add_subcommand("invert", "Estimate strength transforms and reconstruct strengths");
    add_common(inv, inv_opts);
    std::optional<std::string> sweep_path;
    inv->add_option("--sweep", sweep_path, "Sweep dataset (default <out>/sweep.pssw)");

    auto* ver = app.add_subcommand("verify", "Check provenance hashes and run the self-check suite");
    add_common(ver, ver_opts);

    auto* rep = app.add_subcommand("reproduce", "Run sample, sweep, invert and verify end to end");
    add_common(rep, rep_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sample) {
            const ExperimentConfig cfg = load(sample_opts);
            run_sample_field(cfg);
            std::cout << "wrote " << (cfg.output / "rho.psfd").string() << "\n";
        } else if (*fwd) {
            const ExperimentConfig cfg = load(fwd_opts, false);
            ForwardRequest req{kappa, theta, fwd_opts.out ? std::filesystem::path(*fwd_opts.out) : std::filesystem::path()};
            const WaveField u = run_forward(cfg, req);
            std::cout << "kappa " << u.kappa << " residual " << u.residual << " iterations " << u.iterations << "\n";
        } else if (*sweep) {
            const ExperimentConfig cfg = load(sweep_opts);
            const SweepDataset ds = run_sweep(cfg);
            std::cout << "wrote " << ds.records.size() << " records to " << (cfg.output / "sweep.pssw").string() << "\n";
        } else if (*inv) {
            const ExperimentConfig cfg = load(inv_opts);
            const auto summary = run_invert(cfg, sweep_path ? std::optional<std::filesystem::path>(*sweep_path) : std::nullopt);
            std::cout << summary["error_vs_Q"].dump(2) << "\n";
        } else if (*ver) {
            const ExperimentConfig cfg = load(ver_opts);
            const auto report = run_verify(cfg);
            std::cout << report.dump(2) << "\n";
            return report["ok"].get<bool>() ? 0 : 1;
        } else if (*rep) {
            const ExperimentConfig cfg = load(rep_opts);
            const auto summary = run_reproduce(cfg);
            std::cout << summary["error_vs_Q"].dump(2) << "\n";
            if (!summary["verify_ok"].get<bool>()) return 1;
        }
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const NonConvergence& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
