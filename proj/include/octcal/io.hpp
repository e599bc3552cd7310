#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "octcal/calib.hpp"
#include "octcal/lcs.hpp"
#include "octcal/metrics.hpp"
#include "octcal/signal.hpp"

namespace octcal {

/// Signal CSV: header `t_s,value`, 17 significant digits, one row per sample.
void write_signal_csv(const std::filesystem::path& path, const SampledSignal& sig);
SampledSignal read_signal_csv(const std::filesystem::path& path);

/// PhaseEstimate CSV: `n,phase_rad[,amplitude]`.
void write_phase_csv(const std::filesystem::path& path, const PhaseEstimate& est);

/// IpDFT block CSV: `block_index,omega0_rad_per_sample,d_per_sample`.
void write_blocks_csv(const std::filesystem::path& path, const PhaseEstimate& est);

/// Clock CSV: `event_index,t_s,level_rad_per_m`.
void write_clock_csv(const std::filesystem::path& path, const CalibClock& clock,
                     const LevelLadder& ladder);

/// CalibratedScan CSV: `k_rad_per_m,value`.
void write_scan_csv(const std::filesystem::path& path, const CalibratedScan& scan);

/// AScan CSV: `depth_m,magnitude`.
void write_ascan_csv(const std::filesystem::path& path, const AScan& ascan);

/// Report CSV: one row per (cell, statistic).
void write_report_csv(const std::filesystem::path& path, const MetricsReport& report);

/// Minimal line plot (axes, polyline, labels).
void write_svg_plot(const std::filesystem::path& path, const ArrayX& x,
                    const ArrayX& y, const std::string& title,
                    const std::string& x_label, const std::string& y_label);

std::string format_sig17(double v);

}  // namespace octcal
