#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "polyscatter/grid.hpp"

namespace polyscatter {

/// Binary field file: "PSFD", version u32, d u32, N u32, L f64, then N^d
/// interleaved float32 (re, im) pairs. All little-endian.
void write_field(const std::filesystem::path& path, const ComplexField& f);
ComplexField read_field(const std::filesystem::path& path);

/// JSON metadata written next to a data file as <path>.json.
void write_sidecar(const std::filesystem::path& data_path, const nlohmann::json& meta);
nlohmann::json read_sidecar(const std::filesystem::path& data_path);

namespace le {
void put_u32(std::string& out, std::uint32_t v);
void put_u64(std::string& out, std::uint64_t v);
void put_f32(std::string& out, float v);
void put_f64(std::string& out, double v);
std::uint32_t get_u32(const char* p);
std::uint64_t get_u64(const char* p);
float get_f32(const char* p);
double get_f64(const char* p);
}  // namespace le

std::string read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::string& bytes);

}  // namespace polyscatter
