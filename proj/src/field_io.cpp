#include "polyscatter/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace polyscatter {
namespace le {

namespace {
template <typename U>
void put_uint(std::string& out, U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

template <typename U>
U get_uint(const char* p) {
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}
}  // namespace

void put_u32(std::string& out, std::uint32_t v) { put_uint(out, v); }
void put_u64(std::string& out, std::uint64_t v) { put_uint(out, v); }
void put_f32(std::string& out, float v) { put_uint(out, std::bit_cast<std::uint32_t>(v)); }
void put_f64(std::string& out, double v) { put_uint(out, std::bit_cast<std::uint64_t>(v)); }
std::uint32_t get_u32(const char* p) { return get_uint<std::uint32_t>(p); }
std::uint64_t get_u64(const char* p) { return get_uint<std::uint64_t>(p); }
float get_f32(const char* p) { return std::bit_cast<float>(get_u32(p)); }
double get_f64(const char* p) { return std::bit_cast<double>(get_u64(p)); }

}  // namespace le

namespace {
constexpr char kMagic[4] = {'P', 'S', 'F', 'D'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 24;
}  // namespace

std::string read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_bytes(const std::filesystem::path& path, const std::string& bytes) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to " + path.string());
}

void write_field(const std::filesystem::path& path, const ComplexField& f) {
    std::string buf;
    buf.reserve(kHeaderBytes + 8 * f.size());
    buf.append(kMagic, 4);
    le::put_u32(buf, kVersion);
    le::put_u32(buf, static_cast<std::uint32_t>(f.spec.d));
    le::put_u32(buf, static_cast<std::uint32_t>(f.spec.N));
    le::put_f64(buf, f.spec.L);
    for (const auto& v : f.values) {
        le::put_f32(buf, static_cast<float>(v.real()));
        le::put_f32(buf, static_cast<float>(v.imag()));
    }
    write_file_bytes(path, buf);
}

ComplexField read_field(const std::filesystem::path& path) {
    const std::string buf = read_file_bytes(path);
    if (buf.size() < kHeaderBytes || std::memcmp(buf.data(), kMagic, 4) != 0) {
        throw IoError(path.string() + ": not a field file");
    }
    if (le::get_u32(buf.data() + 4) != kVersion) throw IoError(path.string() + ": unsupported version");
    const int d = static_cast<int>(le::get_u32(buf.data() + 8));
    const int N = static_cast<int>(le::get_u32(buf.data() + 12));
    const double L = le::get_f64(buf.data() + 16);
    GridSpec spec;
    try {
        spec = GridSpec(d, L, N);
    } catch (const DomainError& e) {
        throw IoError(path.string() + ": bad header: " + e.what());
    }
    if (buf.size() != kHeaderBytes + 8 * spec.size()) throw IoError(path.string() + ": truncated payload");
    ComplexField f(spec);
    const char* p = buf.data() + kHeaderBytes;
    for (std::size_t i = 0; i < f.size(); ++i, p += 8) f[i] = Complex(le::get_f32(p), le::get_f32(p + 4));
    return f;
}

void write_sidecar(const std::filesystem::path& data_path, const nlohmann::json& meta) {
    write_file_bytes(data_path.string() + ".json", meta.dump(2) + "\n");
}

nlohmann::json read_sidecar(const std::filesystem::path& data_path) {
    const std::string text = read_file_bytes(data_path.string() + ".json");
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(data_path.string() + ".json: " + e.what());
    }
}

}  // namespace polyscatter
