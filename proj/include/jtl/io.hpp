#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "jtl/analysis.hpp"
#include "jtl/solver.hpp"

namespace jtl {

struct ScenarioReport;

/// `digits` significant digits, '.' decimal point regardless of locale.
std::string format_sig(double value, int digits = 6);

/// Shortest text that parses back to exactly `value`.
std::string format_shortest(double value);

/// Columns t, phi_1..phi_N, v_1..v_N, V_src, I_in, I_out.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

/// Long format: t, cell, phi, v, u_cell (cells numbered from 1).
void write_field_csv(const std::filesystem::path& path, const Trajectory& traj);

/// Columns freq, psd.
void write_spectrum_csv(const std::filesystem::path& path, const SpectrumResult& spectrum);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// <id>_summary.json plus, per run k, <id>_<k>_spectrum.csv and (when the
/// trajectory was kept) <id>_<k>_trajectory.csv and <id>_<k>_field.csv.
/// Returns the files written.
std::vector<std::filesystem::path> write_report(const std::filesystem::path& dir,
                                                const ScenarioReport& report);

}  // namespace jtl
