#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "polyscatter/config.hpp"
#include "polyscatter/inverse.hpp"

namespace polyscatter {

/// Stage runners behind the CLI subcommands. Every file written carries the config
/// hash and seed, in a JSON sidecar for binary files or a leading comment for CSV.

struct SampleOutputs {
    PotentialSpec spec;
    PotentialRealization realization;
};

SampleOutputs run_sample_field(const ExperimentConfig& cfg);

struct ForwardRequest {
    double kappa = 16.0;
    std::vector<double> theta_angles;  // phi in 2D, (theta, phi) in 3D
    std::filesystem::path out;
};

WaveField run_forward(const ExperimentConfig& cfg, const ForwardRequest& req);

SweepDataset run_sweep(const ExperimentConfig& cfg);

/// Estimates on the full tau x direction raster for each Q; reconstruction from the largest Q.
nlohmann::json run_invert(const ExperimentConfig& cfg, const std::optional<std::filesystem::path>& sweep_path = {});

/// Hash checks over the output directory plus a short numerical self-check suite.
/// Returns the report; report["ok"] is false if any check failed.
nlohmann::json run_verify(const ExperimentConfig& cfg);

/// sample -> sweep -> invert -> verify, then summary.json, plot CSVs, plot scripts and
/// a manifest of file digests. Wall-clock timings go to timings.json only.
nlohmann::json run_reproduce(const ExperimentConfig& cfg);

/// Writes CSV text with a leading "# config_hash=... seed=..." line.
void write_csv(const std::filesystem::path& path, const ExperimentConfig& cfg, const std::string& header,
               const std::vector<std::vector<double>>& rows);

/// Direction from CLI angles: phi in 2D, (theta, phi) in 3D.
Direction direction_from_angles(int d, const std::vector<double>& angles);

}  // namespace polyscatter
