#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hvns/dynamics.hpp"
#include "hvns/estimates.hpp"

namespace hvns {
namespace detail {

inline std::string fmt_g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::ofstream open_text(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

}  // namespace detail

/// Ledger as machine-readable text: one tab-separated record per entry,
/// deterministic field order and formatting.
inline void write_report(const EstimateReport& report, const std::filesystem::path& path) {
    auto out = detail::open_text(path);
    out << "name\tlhs\trhs\tmargin\tpass\ttol\n";
    for (const auto& e : report.entries)
        out << e.name << '\t' << detail::fmt_g17(e.lhs) << '\t' << detail::fmt_g17(e.rhs) << '\t'
            << detail::fmt_g17(e.margin) << '\t' << (e.pass ? "true" : "false") << '\t'
            << detail::fmt_g17(e.tol) << '\n';
    out << "# rho0=" << detail::fmt_g17(report.rho0) << " t0_theory="
        << detail::fmt_g17(report.t0_theory) << " t0_empirical="
        << detail::fmt_g17(report.t0_empirical) << " r1_empirical="
        << detail::fmt_g17(report.r1_empirical) << " c2_empirical="
        << detail::fmt_g17(report.c2_empirical) << " sb=" << detail::fmt_g17(report.sb) << '\n';
    if (!out) throw std::runtime_error("write failure on " + path.string());
}

/// Dense scalar series as CSV for external plotting.
inline void write_series_csv(const Trajectory& traj, const std::filesystem::path& path) {
    auto out = detail::open_text(path);
    out << "time,energy,enstrophy,hyper,hyper1,forcing_power,dual_dt\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        out << detail::fmt_g17(traj.times[i]) << ',' << detail::fmt_g17(traj.energy[i]) << ','
            << detail::fmt_g17(traj.enstrophy[i]) << ',' << detail::fmt_g17(traj.hyper[i]) << ','
            << detail::fmt_g17(traj.hyper1[i]) << ',' << detail::fmt_g17(traj.forcing_power[i])
            << ',' << detail::fmt_g17(traj.dual_dt[i]) << '\n';
    if (!out) throw std::runtime_error("write failure on " + path.string());
}

/// Flat numeric table (e.g. eps,dist) as CSV.
inline void write_table_csv(const std::string& header,
                            const std::vector<std::vector<double>>& rows,
                            const std::filesystem::path& path) {
    auto out = detail::open_text(path);
    out << header << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << detail::fmt_g17(row[i]);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failure on " + path.string());
}

}  // namespace hvns
