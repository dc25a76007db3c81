#include "usd/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace usd::report {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string stats_triplet(const TStats& s) {
    if (s.count == 0) return "nan,nan,nan";
    return format_double(s.median) + "," + format_double(s.mean) + "," + format_double(s.p95);
}

nlohmann::ordered_json stats_json(const TStats& s) {
    nlohmann::ordered_json j;
    j["count"] = s.count;
    if (s.count > 0) {
        j["min"] = s.min;
        j["median"] = s.median;
        j["mean"] = s.mean;
        j["p95"] = s.p95;
        j["max"] = s.max;
    }
    return j;
}

}  // namespace

std::string csv_row(const CellSummary& cell) {
    std::string row;
    row += std::to_string(cell.x1) + "," + std::to_string(cell.x2) + "," + std::to_string(cell.u);
    row += "," + format_double(cell.p);
    row += "," + (cell.p_s ? format_double(*cell.p_s) : std::string("nan"));
    row += "," + format_double(cell.delta_w0);
    const BatchSummary& b = cell.batch;
    row += "," + std::to_string(b.trials) + "," + std::to_string(b.wins1) + "," +
           std::to_string(b.wins2) + "," + std::to_string(b.frozen) + "," +
           std::to_string(b.timeouts);
    row += "," + stats_triplet(b.stats(Outcome::Winner1));
    row += "," + stats_triplet(b.stats(Outcome::Winner2));
    return row;
}

nlohmann::ordered_json summary_json(const CellSummary& cell) {
    nlohmann::ordered_json j;
    j["x1"] = cell.x1;
    j["x2"] = cell.x2;
    j["u"] = cell.u;
    j["p"] = cell.p;
    if (cell.p_s) {
        j["p_s"] = *cell.p_s;
    } else {
        j["p_s"] = nullptr;
    }
    j["delta_w0"] = cell.delta_w0;
    j["trials"] = cell.batch.trials;
    j["wins1"] = cell.batch.wins1;
    j["wins2"] = cell.batch.wins2;
    j["frozen"] = cell.batch.frozen;
    j["timeouts"] = cell.batch.timeouts;
    j["t_winner1"] = stats_json(cell.batch.stats(Outcome::Winner1));
    j["t_winner2"] = stats_json(cell.batch.stats(Outcome::Winner2));
    j["t_frozen"] = stats_json(cell.batch.stats(Outcome::Frozen));
    j["t_timeout"] = stats_json(cell.batch.stats(Outcome::Timeout));
    return j;
}

nlohmann::ordered_json trajectory_json(const TrajectoryRecord& record) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& pt : record.points) {
        arr.push_back({pt.t, pt.c.x1, pt.c.x2, pt.c.u});
    }
    return arr;
}

std::string heatmap_svg(const std::vector<std::int64_t>& x1_grid,
                        const std::vector<double>& p_grid, const std::vector<double>& win1_fraction,
                        const std::vector<std::optional<double>>& p_s_by_x1) {
    if (x1_grid.empty() || p_grid.empty() || win1_fraction.size() != x1_grid.size() * p_grid.size())
        throw std::invalid_argument("heatmap needs a full x1 x p grid of win1 fractions");

    constexpr int cell = 24, margin = 48;
    const int cols = static_cast<int>(x1_grid.size());
    const int rows = static_cast<int>(p_grid.size());
    const int width = margin * 2 + cols * cell;
    const int height = margin * 2 + rows * cell;

    const double p_lo = *std::min_element(p_grid.begin(), p_grid.end());
    const double p_hi = *std::max_element(p_grid.begin(), p_grid.end());
    const double p_span = (p_hi > p_lo) ? (p_hi - p_lo) : 1.0;
    // y of a p value: cell centers of the sorted grid, p increasing upward
    auto y_of_p = [&](double p) {
        const double frac = (p - p_lo) / p_span;
        return margin + (static_cast<double>(rows) - 0.5 - frac * (rows - 1)) * cell;
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";

    std::vector<double> p_sorted = p_grid;
    std::sort(p_sorted.begin(), p_sorted.end());
    for (int col = 0; col < cols; ++col) {
        for (int row = 0; row < rows; ++row) {
            // locate this p in the sorted order so higher p sits higher
            const double p = p_grid[row];
            const auto sorted_row = static_cast<int>(
                std::find(p_sorted.begin(), p_sorted.end(), p) - p_sorted.begin());
            const double frac =
                win1_fraction[static_cast<std::size_t>(col) * p_grid.size() + row];
            const int red = static_cast<int>(std::lround(220.0 * (1.0 - frac) + 30.0 * frac));
            const int green = static_cast<int>(std::lround(40.0 * (1.0 - frac) + 170.0 * frac));
            const int x = margin + col * cell;
            const int y = margin + (rows - 1 - sorted_row) * cell;
            svg << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
                << "\" height=\"" << cell << "\" fill=\"rgb(" << red << "," << green
                << ",60)\"/>\n";
        }
    }

    std::string points;
    for (int col = 0; col < cols; ++col) {
        if (!p_s_by_x1[col]) continue;
        const double ps = *p_s_by_x1[col];
        if (ps < p_lo || ps > p_hi) continue;
        const double x = margin + (col + 0.5) * cell;
        if (!points.empty()) points += " ";
        points += format_double(x) + "," + format_double(y_of_p(ps));
    }
    svg << "  <polyline points=\"" << points
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n";
    svg << "  <text x=\"" << margin << "\" y=\"" << (margin - 12) << "\" font-size=\"12\">win1 "
        << "fraction over (x1, p); line marks p_s = 1 - x1/x2</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace usd::report
