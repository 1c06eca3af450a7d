#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hvns/dynamics.hpp"
#include "hvns/flows.hpp"
#include "hvns/report_io.hpp"
#include "hvns/spectral_field.hpp"

namespace hvns {

/// One forced Fourier mode: integer wavevector plus a complex amplitude per
/// velocity component (the conjugate mirror is implied).
struct ModeSpec {
    std::array<int, 3> mode{};
    std::array<complexd, 3> amp{};
    bool operator==(const ModeSpec&) const = default;
};

/// Flat `key = value` run configuration with dotted section prefixes.
/// Unknown keys are rejected; parse(serialize(parse(x))) is a fixed point.
struct RunConfig {
    int grid_n = 16;
    double grid_l = 2.0 * M_PI;

    double nu = 1.0;
    double eps = 0.0;
    double l = 2.0;

    std::vector<ModeSpec> forcing_modes;
    std::vector<ModeSpec> perturb_modes;
    double perturb_delta = 0.0;

    std::string init_kind = "random";  // random | shear | taylor_green | zero
    double init_amplitude = 1.0;
    double init_decay = 2.0;

    double T = 1.0;
    double dt = 0.01;
    int snapshot_stride = 10;

    std::vector<double> eps_list;
    double window_r = 1.0;
    double t1 = 10.0;
    double gap = 0.5;
    int n_samples = 8;
    double delta0 = 0.0;
    double delta1 = 0.0;

    std::uint64_t seed = 1;

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline ModeSpec parse_mode(const std::string& value, const std::string& key) {
    std::istringstream in(value);
    ModeSpec m;
    double re, im;
    for (int i = 0; i < 3; ++i)
        if (!(in >> m.mode[i])) throw std::invalid_argument("config: bad mode triple in " + key);
    for (int c = 0; c < 3; ++c) {
        if (!(in >> re >> im))
            throw std::invalid_argument("config: bad complex amplitude in " + key);
        m.amp[c] = complexd{re, im};
    }
    std::string rest;
    if (in >> rest) throw std::invalid_argument("config: trailing tokens in " + key);
    return m;
}

inline std::string mode_to_string(const ModeSpec& m) {
    std::ostringstream out;
    out << m.mode[0] << ' ' << m.mode[1] << ' ' << m.mode[2];
    for (int c = 0; c < 3; ++c)
        out << ' ' << fmt_g17(m.amp[c].real()) << ' ' << fmt_g17(m.amp[c].imag());
    return out.str();
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
    // collect key/value pairs first so numbered mode keys can be ordered
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected key = value, got: " + line);
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (!kv.emplace(key, value).second)
            throw std::invalid_argument("config: duplicate key " + key);
    }

    RunConfig c;
    auto as_double = [](const std::string& key, const std::string& v) {
        std::size_t pos = 0;
        double out;
        try {
            out = std::stod(v, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("config: bad number for " + key);
        }
        if (pos != v.size()) throw std::invalid_argument("config: bad number for " + key);
        return out;
    };
    auto as_int = [&](const std::string& key, const std::string& v) {
        const double d = as_double(key, v);
        if (d != std::floor(d)) throw std::invalid_argument("config: expected integer for " + key);
        return static_cast<long long>(d);
    };

    std::map<int, ModeSpec> forcing, perturb;
    for (const auto& [key, value] : kv) {
        if (key == "grid.N") c.grid_n = static_cast<int>(as_int(key, value));
        else if (key == "grid.L") c.grid_l = as_double(key, value);
        else if (key == "physics.nu") c.nu = as_double(key, value);
        else if (key == "physics.eps") c.eps = as_double(key, value);
        else if (key == "physics.l") c.l = as_double(key, value);
        else if (key == "perturb.delta") c.perturb_delta = as_double(key, value);
        else if (key == "init.kind") c.init_kind = value;
        else if (key == "init.amplitude") c.init_amplitude = as_double(key, value);
        else if (key == "init.decay") c.init_decay = as_double(key, value);
        else if (key == "integration.T") c.T = as_double(key, value);
        else if (key == "integration.dt") c.dt = as_double(key, value);
        else if (key == "integration.snapshot_stride")
            c.snapshot_stride = static_cast<int>(as_int(key, value));
        else if (key == "experiment.eps_list") {
            std::istringstream ls(value);
            double v;
            c.eps_list.clear();
            while (ls >> v) c.eps_list.push_back(v);
        } else if (key == "experiment.r") c.window_r = as_double(key, value);
        else if (key == "experiment.t1") c.t1 = as_double(key, value);
        else if (key == "experiment.gap") c.gap = as_double(key, value);
        else if (key == "experiment.n_samples")
            c.n_samples = static_cast<int>(as_int(key, value));
        else if (key == "experiment.delta0") c.delta0 = as_double(key, value);
        else if (key == "experiment.delta1") c.delta1 = as_double(key, value);
        else if (key == "seed") c.seed = static_cast<std::uint64_t>(as_int(key, value));
        else if (key.rfind("forcing.mode.", 0) == 0)
            forcing[static_cast<int>(as_int(key, key.substr(13)))] =
                detail::parse_mode(value, key);
        else if (key.rfind("perturb.mode.", 0) == 0)
            perturb[static_cast<int>(as_int(key, key.substr(13)))] =
                detail::parse_mode(value, key);
        else
            throw std::invalid_argument("config: unknown key " + key);
    }
    for (auto& [idx, m] : forcing) c.forcing_modes.push_back(m);
    for (auto& [idx, m] : perturb) c.perturb_modes.push_back(m);
    if (c.init_kind != "random" && c.init_kind != "shear" && c.init_kind != "taylor_green" &&
        c.init_kind != "zero")
        throw std::invalid_argument("config: unknown init.kind " + c.init_kind);
    return c;
}

inline std::string serialize_config(const RunConfig& c) {
    using detail::fmt_g17;
    std::ostringstream out;
    out << "grid.N = " << c.grid_n << '\n';
    out << "grid.L = " << fmt_g17(c.grid_l) << '\n';
    out << "physics.nu = " << fmt_g17(c.nu) << '\n';
    out << "physics.eps = " << fmt_g17(c.eps) << '\n';
    out << "physics.l = " << fmt_g17(c.l) << '\n';
    for (std::size_t i = 0; i < c.forcing_modes.size(); ++i)
        out << "forcing.mode." << i + 1 << " = " << detail::mode_to_string(c.forcing_modes[i])
            << '\n';
    for (std::size_t i = 0; i < c.perturb_modes.size(); ++i)
        out << "perturb.mode." << i + 1 << " = " << detail::mode_to_string(c.perturb_modes[i])
            << '\n';
    out << "perturb.delta = " << fmt_g17(c.perturb_delta) << '\n';
    out << "init.kind = " << c.init_kind << '\n';
    out << "init.amplitude = " << fmt_g17(c.init_amplitude) << '\n';
    out << "init.decay = " << fmt_g17(c.init_decay) << '\n';
    out << "integration.T = " << fmt_g17(c.T) << '\n';
    out << "integration.dt = " << fmt_g17(c.dt) << '\n';
    out << "integration.snapshot_stride = " << c.snapshot_stride << '\n';
    if (!c.eps_list.empty()) {
        out << "experiment.eps_list =";
        for (double v : c.eps_list) out << ' ' << fmt_g17(v);
        out << '\n';
    }
    out << "experiment.r = " << fmt_g17(c.window_r) << '\n';
    out << "experiment.t1 = " << fmt_g17(c.t1) << '\n';
    out << "experiment.gap = " << fmt_g17(c.gap) << '\n';
    out << "experiment.n_samples = " << c.n_samples << '\n';
    out << "experiment.delta0 = " << fmt_g17(c.delta0) << '\n';
    out << "experiment.delta1 = " << fmt_g17(c.delta1) << '\n';
    out << "seed = " << c.seed << '\n';
    return out.str();
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

inline WaveGrid grid_from(const RunConfig& c) { return make_grid(c.grid_n, c.grid_l); }

inline SpectralField field_from_modes(const WaveGrid& g, const std::vector<ModeSpec>& modes) {
    SpectralField f(g);
    for (const auto& m : modes) add_mode(f, m.mode, m.amp);
    return leray_project(f);
}

inline PhysicsParams physics_from(const RunConfig& c, const WaveGrid& g) {
    PhysicsParams p;
    p.nu = c.nu;
    p.eps = c.eps;
    p.l = c.l;
    if (!c.forcing_modes.empty()) p.forcing.base = field_from_modes(g, c.forcing_modes);
    if (!c.perturb_modes.empty()) {
        p.forcing.perturbation = field_from_modes(g, c.perturb_modes);
        p.forcing.delta = c.perturb_delta;
    }
    p.validate();
    return p;
}

inline SpectralField initial_from(const RunConfig& c, const WaveGrid& g) {
    if (c.init_kind == "zero") return zero_field(g);
    if (c.init_kind == "shear") return shear_field(g, c.init_amplitude);
    if (c.init_kind == "taylor_green") return taylor_green_field(g, c.init_amplitude);
    return random_solenoidal_field(g, c.init_decay, c.init_amplitude, c.seed);
}

}  // namespace hvns
