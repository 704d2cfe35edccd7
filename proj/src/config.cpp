#include "polyscatter/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "polyscatter/field_io.hpp"

namespace polyscatter {
namespace {

bool on_step(double value, double step) {
    const double s = value / step;
    return std::abs(s - std::round(s)) <= 1e-9 * std::max(1.0, std::abs(s));
}

std::string fmt(double v) {
    std::ostringstream o;
    o << v;
    return o.str();
}

Bump parse_bump(const nlohmann::json& j, int d) {
    Bump b;
    b.amplitude = j.value("amplitude", 1.0);
    b.radius = j.value("radius", 0.25);
    if (j.contains("center")) {
        const auto& c = j.at("center");
        if (!c.is_array() || static_cast<int>(c.size()) != d) throw ValidationError("bump center must have d entries");
        for (int i = 0; i < d; ++i) b.center[i] = c.at(i).get<double>();
    }
    return b;
}

StrengthConfig parse_strength(const nlohmann::json& j, int d, const std::filesystem::path& base) {
    StrengthConfig s;
    if (j.is_null()) return s;
    if (j.contains("file")) {
        std::filesystem::path p = j.at("file").get<std::string>();
        s.file = p.is_absolute() ? p : base / p;
    }
    if (j.contains("bumps")) {
        for (const auto& b : j.at("bumps")) s.bumps.push_back(parse_bump(b, d));
    }
    return s;
}

nlohmann::json strength_json(const StrengthConfig& s, int d) {
    nlohmann::json j = nlohmann::json::object();
    nlohmann::json bumps = nlohmann::json::array();
    for (const auto& b : s.bumps) {
        nlohmann::json c = nlohmann::json::array();
        for (int i = 0; i < d; ++i) c.push_back(b.center[i]);
        bumps.push_back({{"amplitude", b.amplitude}, {"center", c}, {"radius", b.radius}});
    }
    j["bumps"] = bumps;
    if (s.file) j["file"] = s.file->string();
    return j;
}

}  // namespace

ExperimentConfig load_config(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    ExperimentConfig cfg;
    try {
        const auto& g = j.at("grid");
        cfg.grid.d = g.value("d", 2);
        cfg.grid.L = g.value("L", 1.0);
        cfg.grid.N = g.value("N", 64);
        cfg.n = j.value("n", 2);
        const auto& pot = j.at("potential");
        cfg.m1 = pot.value("m1", 2.0);
        cfg.m2 = pot.value("m2", cfg.m1);
        cfg.a1 = parse_strength(pot.value("a1", nlohmann::json()), cfg.grid.d, base_dir);
        cfg.a2 = parse_strength(pot.value("a2", nlohmann::json()), cfg.grid.d, base_dir);
        if (j.contains("solver")) {
            const auto& s = j.at("solver");
            cfg.solver.tol = s.value("tol", cfg.solver.tol);
            cfg.solver.max_iter = s.value("max_iter", cfg.solver.max_iter);
            if (s.contains("born_order")) {
                const auto& b = s.at("born_order");
                cfg.solver.born_order = b.is_string() ? (b.get<std::string>() == "converge" ? 0 : -1) : b.get<int>();
            }
            cfg.solver.krylov = s.value("krylov", false);
            cfg.solver.krylov_restart = s.value("krylov_restart", cfg.solver.krylov_restart);
        }
        const auto& sw = j.at("sweep");
        cfg.Q = sw.at("Q").get<std::vector<double>>();
        cfg.kappa_step = sw.value("kappa_step", 0.25);
        if (sw.at("tau").is_array()) {
            cfg.tau = sw.at("tau").get<std::vector<double>>();
        } else {
            const auto& t = sw.at("tau");
            const int count = t.at("count").get<int>();
            const double step = t.at("step").get<double>();
            for (int i = 0; i < count; ++i) cfg.tau.push_back(i * step);
        }
        cfg.directions = sw.value("directions", std::size_t{16});
        if (j.contains("inverse")) {
            const auto& inv = j.at("inverse");
            if (inv.contains("m")) cfg.m_inverse = inv.at("m").get<double>();
            cfg.reconstruction_N = inv.value("grid_N", cfg.reconstruction_N);
        }
        cfg.seed = j.value("seed", std::uint64_t{1});
        cfg.output = j.value("output", std::string("out"));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
    const std::string text = read_file_bytes(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    return load_config(j, path.parent_path());
}

void validate(ExperimentConfig& cfg) {
    std::vector<std::string> errors;
    cfg.warnings.clear();
    const int d = cfg.grid.d;
    if (d != 2 && d != 3) errors.push_back("grid.d must be 2 or 3");
    if (!(cfg.grid.L > 0.0)) errors.push_back("grid.L must be positive");
    if (cfg.grid.N < 8 || cfg.grid.N % 2 != 0) errors.push_back("grid.N must be even and >= 8");
    if (cfg.n < 2) errors.push_back("n must be >= 2");

    if (errors.empty()) {
        const double lo = d - 2 * cfg.n + 1;
        for (auto [name, m] : {std::pair{"m1", cfg.m1}, std::pair{"m2", cfg.m2}}) {
            if (!order_admissible(m, d, cfg.n)) {
                errors.push_back(std::string(name) + " = " + fmt(m) + " outside (" + fmt(lo) + ", " + fmt(d) + "]");
            }
        }
        cfg.m = std::min(cfg.m1, cfg.m2);
        const double m_inv = cfg.inverse_order();
        if (!reconstruction_condition(m_inv, d, cfg.n)) {
            cfg.warnings.push_back("m = " + fmt(m_inv) + " does not exceed (4d-4n+2)/3 = " +
                                   fmt((4.0 * d - 4.0 * cfg.n + 2.0) / 3.0) +
                                   "; reconstruction is not covered, forward solves remain valid");
        }
        const double safe = 0.45 * cfg.grid.L;
        double diameter = 0.0;
        for (const auto* s : {&cfg.a1, &cfg.a2}) {
            for (const Bump& b : s->bumps) {
                if (b.amplitude < 0.0) errors.push_back("bump amplitude must be nonnegative");
                if (!(b.radius > 0.0)) errors.push_back("bump radius must be positive");
                if (norm(b.center) + b.radius > safe + 1e-12) {
                    errors.push_back("bump at |c| = " + fmt(norm(b.center)) + " radius " + fmt(b.radius) +
                                     " leaves the support ball of radius " + fmt(safe));
                }
                diameter = std::max(diameter, 2.0 * (norm(b.center) + b.radius));
            }
        }
        if (diameter > 0.0 && cfg.kappa_step > kPi / (4.0 * diameter)) {
            cfg.warnings.push_back("kappa_step " + fmt(cfg.kappa_step) + " exceeds pi/(4 diam D) = " +
                                   fmt(kPi / (4.0 * diameter)));
        }
    }

    if (!(cfg.solver.tol > 0.0)) errors.push_back("solver.tol must be positive");
    if (cfg.solver.max_iter < 1) errors.push_back("solver.max_iter must be >= 1");
    if (cfg.solver.born_order < 0) errors.push_back("solver.born_order must be a positive integer or \"converge\"");
    if (cfg.solver.krylov_restart < 1) errors.push_back("solver.krylov_restart must be >= 1");

    if (!(cfg.kappa_step > 0.0)) errors.push_back("sweep.kappa_step must be positive");
    if (cfg.Q.empty()) errors.push_back("sweep.Q must list at least one band start");
    if (cfg.tau.empty()) errors.push_back("sweep.tau must list at least one value");
    if (cfg.directions < 1) errors.push_back("sweep.directions must be >= 1");
    if (cfg.reconstruction_N < 8 || cfg.reconstruction_N % 2 != 0) errors.push_back("inverse.grid_N must be even and >= 8");

    if (errors.empty()) {
        std::sort(cfg.Q.begin(), cfg.Q.end());
        std::sort(cfg.tau.begin(), cfg.tau.end());
        for (double q : cfg.Q) {
            if (!(q > 0.0)) errors.push_back("sweep.Q entries must be positive");
            if (!on_step(q - cfg.Q.front(), cfg.kappa_step)) {
                errors.push_back("Q = " + fmt(q) + " is not on the kappa lattice starting at " + fmt(cfg.Q.front()));
            }
        }
        for (double t : cfg.tau) {
            if (t < 0.0 || !on_step(t, cfg.kappa_step)) {
                errors.push_back("tau = " + fmt(t) + " must be a nonnegative multiple of kappa_step");
            }
        }
    }

    if (!errors.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& e : errors) msg += "\n  - " + e;
        throw ValidationError(msg);
    }

    cfg.h = 2.0 * cfg.grid.L / cfg.grid.N;
    cfg.kappa_lo = cfg.Q.front();
    cfg.kappa_hi = 2.0 * cfg.Q.back() + cfg.tau.back();
    const double nyquist = kPi * cfg.grid.N / (2.0 * cfg.grid.L);
    if (2.0 * cfg.kappa_hi > nyquist) {
        cfg.warnings.push_back("2 * kappa_max = " + fmt(2.0 * cfg.kappa_hi) + " exceeds the grid Nyquist frequency " +
                               fmt(nyquist));
    }
    cfg.grid = GridSpec(cfg.grid.d, cfg.grid.L, cfg.grid.N);
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["grid"] = {{"d", cfg.grid.d}, {"L", cfg.grid.L}, {"N", cfg.grid.N}};
    j["n"] = cfg.n;
    j["potential"] = {{"m1", cfg.m1},
                      {"m2", cfg.m2},
                      {"a1", strength_json(cfg.a1, cfg.grid.d)},
                      {"a2", strength_json(cfg.a2, cfg.grid.d)}};
    nlohmann::json born = cfg.solver.born_order == 0 ? nlohmann::json("converge") : nlohmann::json(cfg.solver.born_order);
    j["solver"] = {{"tol", cfg.solver.tol},
                   {"max_iter", cfg.solver.max_iter},
                   {"born_order", born},
                   {"krylov", cfg.solver.krylov},
                   {"krylov_restart", cfg.solver.krylov_restart}};
    j["sweep"] = {{"Q", cfg.Q}, {"tau", cfg.tau}, {"kappa_step", cfg.kappa_step}, {"directions", cfg.directions}};
    j["inverse"] = {{"m", cfg.inverse_order()}, {"grid_N", cfg.reconstruction_N}};
    j["seed"] = cfg.seed;
    return j;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 failed");
    }
    std::ostringstream o;
    for (unsigned int i = 0; i < len; ++i) o << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return o.str();
}

std::string config_hash(const ExperimentConfig& cfg) { return sha256_hex(to_json(cfg).dump()); }

PotentialSpec build_potential(const ExperimentConfig& cfg) {
    PotentialSpec p = make_potential(cfg.grid, cfg.a1.bumps, cfg.m1, cfg.a2.bumps, cfg.m2);
    for (auto [path, field] : {std::pair{&cfg.a1.file, &p.a1}, std::pair{&cfg.a2.file, &p.a2}}) {
        if (!*path) continue;
        const ComplexField f = read_field(**path);
        if (!(f.spec == cfg.grid)) throw ValidationError("strength file " + (*path)->string() + " grid mismatch");
        *field = real_part(f);
    }
    validate_potential(p, cfg.n);
    return p;
}

}  // namespace polyscatter
