#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "bepw/core/field.hpp"
#include "bepw/error.hpp"

namespace bepw {

// Field snapshot layout, little-endian:
//   "BEPW0001" | dims u32 | points 3 x u32 | extents 6 x f64 (lo1 hi1 lo2 hi2 lo3 hi3) | payload f64
// Payload is row-major with axis 1 fastest.
inline constexpr char kSnapshotMagic[8] = {'B', 'E', 'P', 'W', '0', '0', '0', '1'};
inline constexpr std::size_t kSnapshotHeaderBytes = 8 + 4 + 3 * 4 + 6 * 8;

namespace detail {

inline void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
    for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>((v >> (8 * b)) & 0xFFu));
}
inline void put_f64(std::vector<unsigned char>& out, double d) {
    const auto v = std::bit_cast<std::uint64_t>(d);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>((v >> (8 * b)) & 0xFFu));
}
inline std::uint32_t get_u32(const unsigned char* p) {
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(p[b]) << (8 * b);
    return v;
}
inline double get_f64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(p[b]) << (8 * b);
    return std::bit_cast<double>(v);
}

}  // namespace detail

inline std::vector<unsigned char> encode_snapshot(const ScalarField& f) {
    const Grid& g = f.grid();
    std::vector<unsigned char> out(kSnapshotMagic, kSnapshotMagic + 8);
    out.reserve(kSnapshotHeaderBytes + 8 * f.size());
    detail::put_u32(out, static_cast<std::uint32_t>(g.dims));
    for (int a = 0; a < 3; ++a) detail::put_u32(out, static_cast<std::uint32_t>(g.points[a]));
    for (int a = 0; a < 3; ++a) {
        detail::put_f64(out, g.lo[a]);
        detail::put_f64(out, g.hi[a]);
    }
    for (double v : f.values()) detail::put_f64(out, v);
    return out;
}

inline ScalarField decode_snapshot(const std::vector<unsigned char>& bytes) {
    if (bytes.size() < kSnapshotHeaderBytes || std::memcmp(bytes.data(), kSnapshotMagic, 8) != 0)
        throw IoError("snapshot: bad magic or truncated header");
    const unsigned char* p = bytes.data() + 8;
    Grid g;
    g.dims = static_cast<int>(detail::get_u32(p));
    p += 4;
    for (int a = 0; a < 3; ++a, p += 4) g.points[a] = detail::get_u32(p);
    for (int a = 0; a < 3; ++a) {
        g.lo[a] = detail::get_f64(p);
        g.hi[a] = detail::get_f64(p + 8);
        p += 16;
    }
    try {
        g.validate();
    } catch (const Error& e) {
        throw IoError(std::string("snapshot: invalid grid header: ") + e.what());
    }
    if (bytes.size() != kSnapshotHeaderBytes + 8 * g.size()) throw IoError("snapshot: payload size does not match header");
    std::vector<double> values(g.size());
    for (auto& v : values) {
        v = detail::get_f64(p);
        p += 8;
    }
    return ScalarField(g, std::move(values));
}

inline void write_snapshot(const std::filesystem::path& path, const ScalarField& f) {
    const auto bytes = encode_snapshot(f);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("snapshot: cannot open " + path.string());
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw IoError("snapshot: write failed for " + path.string());
}

inline ScalarField read_snapshot(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("snapshot: cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return decode_snapshot(bytes);
}

}  // namespace bepw
