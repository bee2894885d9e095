#pragma once

// Binary snapshot format, all multi-byte values little-endian:
//
//   offset  size  content
//   0       4     magic "LERA"
//   4       4     u32 format version (1)
//   8       8     i64 truncation n
//   16      40    f64 nu, alpha, theta1, theta2, t
//   56      ...   stored half-lattice coefficients in lexicographic k order
//                 (k1 slowest), each as 3 x (f64 re, f64 im)

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include "leray/field.hpp"
#include "leray/model.hpp"

namespace leray {

inline constexpr std::uint32_t snapshot_version = 1;
inline constexpr std::size_t snapshot_header_bytes = 56;

struct SnapshotMeta {
    int n = 0;
    double nu = 0.0;
    double alpha = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double t = 0.0;
};

class SnapshotError : public std::runtime_error {
public:
    enum class Kind { io, bad_magic, version_mismatch, truncated_payload, trailing_data, bad_header };
    SnapshotError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

namespace detail {

inline void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
    for (int b = 0; b < 8; ++b)
        out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}
inline void put_f64(std::vector<unsigned char>& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

inline std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b)
        v |= std::uint64_t(p[b]) << (8 * b);
    return v;
}
inline double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_u64(p)); }

}  // namespace detail

inline std::vector<unsigned char> encode_snapshot(const SpectralField& u, const SnapshotMeta& meta) {
    if (meta.n != u.truncation())
        throw std::invalid_argument("encode_snapshot: meta.n does not match field truncation");
    std::vector<unsigned char> out{'L', 'E', 'R', 'A'};
    out.reserve(snapshot_header_bytes + u.size() * 48);
    for (int b = 0; b < 4; ++b)
        out.push_back(static_cast<unsigned char>(snapshot_version >> (8 * b)));
    detail::put_u64(out, static_cast<std::uint64_t>(static_cast<std::int64_t>(meta.n)));
    for (double v : {meta.nu, meta.alpha, meta.theta1, meta.theta2, meta.t})
        detail::put_f64(out, v);
    for (std::size_t i = 0; i < u.size(); ++i)
        for (const auto& z : u[i]) {
            detail::put_f64(out, z.real());
            detail::put_f64(out, z.imag());
        }
    return out;
}

struct DecodedSnapshot {
    SpectralField field;
    SnapshotMeta meta;
};

inline DecodedSnapshot decode_snapshot(const std::vector<unsigned char>& bytes) {
    using Kind = SnapshotError::Kind;
    if (bytes.size() < 4 || std::memcmp(bytes.data(), "LERA", 4) != 0)
        throw SnapshotError(Kind::bad_magic, "snapshot: bad magic bytes");
    if (bytes.size() < snapshot_header_bytes)
        throw SnapshotError(Kind::truncated_payload, "snapshot: truncated header");
    const std::uint32_t version = std::uint32_t(bytes[4]) | std::uint32_t(bytes[5]) << 8 |
                                  std::uint32_t(bytes[6]) << 16 | std::uint32_t(bytes[7]) << 24;
    if (version != snapshot_version)
        throw SnapshotError(Kind::version_mismatch, "snapshot: format version " + std::to_string(version) +
                                                        ", expected " + std::to_string(snapshot_version));
    const auto n = static_cast<std::int64_t>(detail::get_u64(bytes.data() + 8));
    if (n < 1 || n > 1024)
        throw SnapshotError(Kind::bad_header, "snapshot: invalid truncation " + std::to_string(n));
    SnapshotMeta meta;
    meta.n = static_cast<int>(n);
    meta.nu = detail::get_f64(bytes.data() + 16);
    meta.alpha = detail::get_f64(bytes.data() + 24);
    meta.theta1 = detail::get_f64(bytes.data() + 32);
    meta.theta2 = detail::get_f64(bytes.data() + 40);
    meta.t = detail::get_f64(bytes.data() + 48);
    SpectralField field(meta.n);
    const std::size_t expected = snapshot_header_bytes + field.size() * 48;
    if (bytes.size() < expected)
        throw SnapshotError(Kind::truncated_payload, "snapshot: payload has " +
                                                         std::to_string(bytes.size() - snapshot_header_bytes) +
                                                         " bytes, expected " +
                                                         std::to_string(expected - snapshot_header_bytes));
    if (bytes.size() > expected)
        throw SnapshotError(Kind::trailing_data, "snapshot: unexpected trailing bytes");
    const unsigned char* p = bytes.data() + snapshot_header_bytes;
    for (std::size_t i = 0; i < field.size(); ++i)
        for (auto& z : field[i]) {
            z = Complex(detail::get_f64(p), detail::get_f64(p + 8));
            p += 16;
        }
    return {std::move(field), meta};
}

inline SnapshotMeta snapshot_meta(const ModelContext& ctx, double t) {
    return {ctx.truncation(), ctx.nu(), ctx.alpha(), ctx.theta1(), ctx.theta2(), t};
}

inline void write_snapshot(const SpectralField& u, const SnapshotMeta& meta, const std::string& path) {
    const auto bytes = encode_snapshot(u, meta);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw SnapshotError(SnapshotError::Kind::io, "snapshot: cannot open " + path + " for writing");
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os)
        throw SnapshotError(SnapshotError::Kind::io, "snapshot: write failed for " + path);
}

inline DecodedSnapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw SnapshotError(SnapshotError::Kind::io, "snapshot: cannot open " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return decode_snapshot(bytes);
}

}  // namespace leray
