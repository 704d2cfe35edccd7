#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polyscatter/farfield.hpp"
#include "polyscatter/gmig.hpp"

namespace polyscatter {

struct StrengthConfig {
    std::vector<Bump> bumps;
    std::optional<std::filesystem::path> file;  // real part of a PSFD field, overrides bumps
};

struct ExperimentConfig {
    GridSpec grid;
    int n = 2;
    StrengthConfig a1;
    StrengthConfig a2;
    double m1 = 2.0;
    double m2 = 2.0;
    SolveConfig solver;
    std::vector<double> Q;       // ascending band starts
    std::vector<double> tau;     // ascending, multiples of kappa_step
    double kappa_step = 0.25;
    std::size_t directions = 16;
    std::optional<double> m_inverse;
    int reconstruction_N = 64;
    std::uint64_t seed = 1;
    std::filesystem::path output = "out";

    // Derived by validate().
    double m = 2.0;
    double h = 0.0;
    double kappa_lo = 0.0;
    double kappa_hi = 0.0;
    std::vector<std::string> warnings;

    double inverse_order() const { return m_inverse.value_or(m); }
};

/// Parses and validates a JSON config. Relative strength-file paths resolve against base_dir.
/// Throws ValidationError listing every violated bound.
ExperimentConfig load_config(const nlohmann::json& j, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Re-runs all range checks and refreshes derived fields and warnings.
void validate(ExperimentConfig& cfg);

/// Canonical JSON of the normalized config, excluding the output directory.
nlohmann::json to_json(const ExperimentConfig& cfg);

/// SHA-256 hex digest of the canonical JSON.
std::string config_hash(const ExperimentConfig& cfg);

std::string sha256_hex(const std::string& bytes);

PotentialSpec build_potential(const ExperimentConfig& cfg);

}  // namespace polyscatter
