#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "irds/grid.hpp"
#include "irds/savanna.hpp"
#include "irds/spreading.hpp"

namespace irds {

/// Prefixes every line of `text` with "# ".
std::string comment_block(std::string_view text);

/// Formats a double with 12 significant digits.
std::string num(double v);

/// Converts a state to output units: raw-frame states go to t/ha, years and
/// physical distance; other frames stay normalized.
struct OutputUnits {
    std::optional<Scales> scales;

    double x(double x_norm) const;
    double t(double t_norm) const;
    Pair values(Frame frame, Pair v) const;
};

/// Rows `generation,t,x,component1,component2,frame`.
class SnapshotWriter {
public:
    SnapshotWriter(const std::filesystem::path& path, std::string_view header, OutputUnits units);
    void write(const SystemState& state);

private:
    std::ofstream out_;
    OutputUnits units_;
};

/// Rows `generation,x,component1,component2`, flushed after every generation.
class TraceWriter {
public:
    TraceWriter(const std::filesystem::path& path, std::string_view header, OutputUnits units);
    void write(const SystemState& state);

private:
    std::ofstream out_;
    OutputUnits units_;
};

/// Structured text record in fixed field order.
std::string format_threshold_report(const ThresholdReport& report);
/// `equilibrium,trees,grass,exists,eigenvalue1,eigenvalue2,verdict` plus threshold rows.
std::string format_threshold_csv(const ThresholdReport& report);

std::string format_sweep_csv(std::span<const SweepPoint> points);
/// Reads (d, speed) pairs from a sweep CSV, skipping `#` comments and the header.
std::vector<std::pair<double, double>> read_sweep_csv(const std::filesystem::path& path);

std::string format_fit(const PowerLawFit& fit);
std::string format_front_trace(const FrontTrace& trace, const OutputUnits& units);
std::string format_cstar(const CStarResult& slowest, const CStarResult& fastest);

/// Writes `content` to `path`, throwing Error on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace irds
