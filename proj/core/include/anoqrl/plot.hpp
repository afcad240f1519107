#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace anoqrl {

struct RunRecord;

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Reads a metrics CSV: x from the first column, y from the "reward" column.
/// The label is the file stem.
PlotSeries read_series(const std::filesystem::path &csv);

PlotSeries series_of(const RunRecord &record);

/// Writes an SVG with one moving-average polyline per series (one vertex per
/// point), a shaded +-1 sigma band, axes, and a legend. Throws UsageError on
/// empty input.
void emit_plot(std::span<const PlotSeries> series, const std::filesystem::path &out,
               std::size_t window = 100, const std::string &title = "");

void emit_plot(std::span<const RunRecord> records, const std::filesystem::path &out,
               std::size_t window = 100);

} // namespace anoqrl
