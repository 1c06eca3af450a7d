#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "hvns/spectral_field.hpp"

namespace hvns {

struct SnapshotMeta {
    double nu = 0.0;
    double eps = 0.0;
    double l = 0.0;
    double t = 0.0;
};

struct LoadedSnapshot {
    SpectralField field;
    SnapshotMeta meta;
    bool solenoidal_warning = false;  // divergence ratio beyond 1e-8 on load
};

namespace detail {
constexpr char kSnapshotMagic[8] = {'H', 'V', 'N', 'S', 'F', 'L', 'D', '1'};

inline void put_f64(std::ostream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}
inline double get_f64(std::istream& in) {
    double v = 0.0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}
}  // namespace detail

/// Binary snapshot: magic "HVNSFLD1"; little-endian int32 N; f64 L, nu, eps,
/// l, t; then 3 components x full complex lattice as interleaved f64
/// (re, im), component-major, row-major. Round trips are bit-exact.
inline void write_snapshot(const SpectralField& field, const SnapshotMeta& meta,
                           const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_snapshot: cannot open " + path.string());
    out.write(detail::kSnapshotMagic, sizeof detail::kSnapshotMagic);
    const std::int32_t n = field.grid.modes_per_dim;
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    detail::put_f64(out, field.grid.period);
    detail::put_f64(out, meta.nu);
    detail::put_f64(out, meta.eps);
    detail::put_f64(out, meta.l);
    detail::put_f64(out, meta.t);
    for (int c = 0; c < 3; ++c)
        out.write(reinterpret_cast<const char*>(field.coeffs[c].data()),
                  static_cast<std::streamsize>(field.coeffs[c].size() * sizeof(complexd)));
    if (!out) throw std::runtime_error("write_snapshot: write failure on " + path.string());
}

inline LoadedSnapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_snapshot: cannot open " + path.string());
    char magic[8] = {};
    in.read(magic, sizeof magic);
    if (!in || std::memcmp(magic, detail::kSnapshotMagic, sizeof magic) != 0)
        throw std::runtime_error("read_snapshot: bad magic in " + path.string());
    std::int32_t n = 0;
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    const double period = detail::get_f64(in);
    LoadedSnapshot snap;
    snap.meta.nu = detail::get_f64(in);
    snap.meta.eps = detail::get_f64(in);
    snap.meta.l = detail::get_f64(in);
    snap.meta.t = detail::get_f64(in);
    if (!in) throw std::runtime_error("read_snapshot: truncated header in " + path.string());

    snap.field = SpectralField(make_grid(n, period));
    const std::size_t per_comp = snap.field.grid.size() * sizeof(complexd);
    for (int c = 0; c < 3; ++c) {
        in.read(reinterpret_cast<char*>(snap.field.coeffs[c].data()),
                static_cast<std::streamsize>(per_comp));
        if (static_cast<std::size_t>(in.gcount()) != per_comp)
            throw std::runtime_error("read_snapshot: truncated payload in " + path.string() +
                                     ": component " + std::to_string(c) + " expected " +
                                     std::to_string(per_comp) + " bytes, got " +
                                     std::to_string(in.gcount()));
    }
    if (max_hermitian_defect(snap.field) > 1e-10)
        throw std::runtime_error("read_snapshot: non-Hermitian coefficients in " + path.string());
    snap.solenoidal_warning = max_divergence_ratio(snap.field) > 1e-8;
    return snap;
}

}  // namespace hvns
