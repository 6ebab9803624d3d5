#pragma once

// Binary field snapshots.
//
// Layout: one ASCII header line "BMHD1 <n_points> <field_kind>\n" followed by
// row-major little-endian IEEE-754 doubles, n_points^2 per scalar component,
// components concatenated x then y. field_kind is "scalar" or "vector".

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "field.hpp"

namespace besov_mhd {

namespace detail {

inline void write_le_doubles(std::ostream& os, const std::vector<double>& v) {
    std::vector<unsigned char> buf(v.size() * 8);
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, &v[i], 8);
        for (int b = 0; b < 8; ++b) buf[i * 8 + b] = static_cast<unsigned char>((bits >> (8 * b)) & 0xffu);
    }
    os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

inline std::vector<double> read_le_doubles(std::istream& is, std::size_t count) {
    std::vector<unsigned char> buf(count * 8);
    is.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(is.gcount()) != buf.size()) throw std::runtime_error("snapshot: truncated payload");
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t bits = 0;
        for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buf[i * 8 + b]) << (8 * b);
        std::memcpy(&v[i], &bits, 8);
    }
    return v;
}

}  // namespace detail

using Snapshot = std::variant<ScalarField, VectorField2>;

inline void write_snapshot(std::ostream& os, const ScalarField& f) {
    os << "BMHD1 " << f.grid().n() << " scalar\n";
    detail::write_le_doubles(os, f.values());
}

inline void write_snapshot(std::ostream& os, const VectorField2& v) {
    os << "BMHD1 " << v.grid().n() << " vector\n";
    detail::write_le_doubles(os, v.x().values());
    detail::write_le_doubles(os, v.y().values());
}

inline Snapshot read_snapshot(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("snapshot: missing header");
    std::istringstream hs(line);
    std::string magic, kind;
    int n = 0;
    if (!(hs >> magic >> n >> kind) || magic != "BMHD1") throw std::runtime_error("snapshot: bad header '" + line + "'");
    const TorusGrid grid(n);
    if (kind == "scalar") return ScalarField::from_values(grid, detail::read_le_doubles(is, grid.size()));
    if (kind == "vector") {
        auto x = detail::read_le_doubles(is, grid.size());
        auto y = detail::read_le_doubles(is, grid.size());
        return VectorField2(ScalarField::from_values(grid, std::move(x)), ScalarField::from_values(grid, std::move(y)));
    }
    throw std::runtime_error("snapshot: unknown field kind '" + kind + "'");
}

template <class Field>
void write_snapshot_file(const std::filesystem::path& path, const Field& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_snapshot(os, f);
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

inline Snapshot read_snapshot_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return read_snapshot(is);
}

}  // namespace besov_mhd
