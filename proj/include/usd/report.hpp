#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "usd/engine.hpp"

// Serialization shared by the CLI and the verification harness. All output
// is deterministic: fixed field order, shortest round-trip float formatting,
// no locale dependence. The CSV schema is stable within a major version.

namespace usd::report {

/// Shortest round-trip decimal form of v ("nan" for NaN).
std::string format_double(double v);

struct CellSummary {
    std::int64_t x1 = 0, x2 = 0, u = 0;
    double p = 0.0;
    std::optional<double> p_s;  // absent when x2 = 0
    double delta_w0 = 0.0;
    BatchSummary batch;
};

inline constexpr const char* kCsvHeader =
    "x1,x2,u,p,p_s,delta_w0,trials,wins1,wins2,frozen,timeouts,"
    "medT1,meanT1,p95T1,medT2,meanT2,p95T2";

std::string csv_row(const CellSummary& cell);

nlohmann::ordered_json summary_json(const CellSummary& cell);
nlohmann::ordered_json trajectory_json(const TrajectoryRecord& record);

/// Heatmap of empirical win1 fractions over an (x1, p) grid, red (Opinion 2)
/// to green (Opinion 1), with the p_s diagonal drawn as a polyline. win1 is
/// indexed row-major as x1_index * p_count + p_index.
std::string heatmap_svg(const std::vector<std::int64_t>& x1_grid,
                        const std::vector<double>& p_grid, const std::vector<double>& win1_fraction,
                        const std::vector<std::optional<double>>& p_s_by_x1);

}  // namespace usd::report
