#include "anoqrl/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "anoqrl/errors.hpp"
#include "anoqrl/harness.hpp"

namespace anoqrl {

namespace {

std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in{line};
    while (std::getline(in, cell, ',')) {
        cells.push_back(cell);
    }
    return cells;
}

std::string xml_escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

constexpr const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

} // namespace

PlotSeries read_series(const std::filesystem::path &csv) {
    std::ifstream in{csv};
    if (!in) {
        throw UsageError("cannot read " + csv.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw UsageError(csv.string() + ": empty file");
    }
    const auto header = split_csv_line(line);
    const auto it = std::find(header.begin(), header.end(), "reward");
    if (it == header.end()) {
        throw UsageError(csv.string() + ": no reward column");
    }
    const std::size_t col = static_cast<std::size_t>(it - header.begin());
    PlotSeries s;
    s.label = csv.stem().string();
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) {
            throw UsageError(csv.string() + ":" + std::to_string(lineno) + ": wrong column count");
        }
        try {
            s.x.push_back(std::stod(cells[0]));
            s.y.push_back(std::stod(cells[col]));
        } catch (const std::exception &) {
            throw UsageError(csv.string() + ":" + std::to_string(lineno) + ": not a number");
        }
    }
    return s;
}

PlotSeries series_of(const RunRecord &record) {
    PlotSeries s;
    s.label = record.label + " seed " + std::to_string(record.config.seed);
    for (std::size_t i = 0; i < record.rewards.size(); ++i) {
        s.x.push_back(record.rows[i].empty() ? static_cast<double>(i) : record.rows[i][0]);
        s.y.push_back(record.rewards[i]);
    }
    return s;
}

void emit_plot(std::span<const PlotSeries> series, const std::filesystem::path &out,
               std::size_t window, const std::string &title) {
    if (series.empty()) {
        throw UsageError("nothing to plot");
    }
    constexpr double width = 800.0;
    constexpr double height = 500.0;
    constexpr double left = 70.0;
    constexpr double right = 20.0;
    constexpr double top = 40.0;
    constexpr double bottom = 60.0;
    constexpr double pw = width - left - right;
    constexpr double ph = height - top - bottom;

    std::vector<Smoothed> smooth;
    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -x_lo;
    double y_lo = x_lo;
    double y_hi = -x_lo;
    for (const auto &s : series) {
        if (s.x.size() != s.y.size()) {
            throw UsageError(s.label + ": x and y lengths differ");
        }
        smooth.push_back(moving_average(s.y, window));
        const auto &m = smooth.back();
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, m.mean[i] - m.stddev[i]);
            y_hi = std::max(y_hi, m.mean[i] + m.stddev[i]);
        }
    }
    if (!std::isfinite(x_lo)) {
        x_lo = 0.0;
        x_hi = 1.0;
        y_lo = 0.0;
        y_hi = 1.0;
    }
    if (x_hi <= x_lo) {
        x_hi = x_lo + 1.0;
    }
    if (y_hi <= y_lo) {
        y_lo -= 0.5;
        y_hi += 0.5;
    }
    auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) { return top + (1.0 - (y - y_lo) / (y_hi - y_lo)) * ph; };

    std::ofstream svg{out};
    if (!svg) {
        throw UsageError("cannot write " + out.string());
    }
    svg << R"(<?xml version="1.0" encoding="UTF-8"?>)" << '\n'
        << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << width << R"(" height=")"
        << height << R"(" viewBox="0 0 )" << width << ' ' << height << R"(">)" << '\n'
        << R"(<rect width="100%" height="100%" fill="white"/>)" << '\n';
    if (!title.empty()) {
        svg << R"(<text x=")" << width / 2 << R"(" y="24" text-anchor="middle" font-size="16">)"
            << xml_escape(title) << "</text>\n";
    }

    // Axes and ticks.
    svg << R"(<g stroke="black" fill="none">)" << '\n'
        << R"(<line x1=")" << left << R"(" y1=")" << top + ph << R"(" x2=")" << left + pw
        << R"(" y2=")" << top + ph << R"("/>)" << '\n'
        << R"(<line x1=")" << left << R"(" y1=")" << top << R"(" x2=")" << left << R"(" y2=")"
        << top + ph << R"("/>)" << '\n'
        << "</g>\n";
    svg << R"(<g font-size="11" fill="black">)" << '\n';
    for (int i = 0; i <= 5; ++i) {
        const double xv = x_lo + (x_hi - x_lo) * i / 5.0;
        const double yv = y_lo + (y_hi - y_lo) * i / 5.0;
        svg << R"(<text x=")" << num(px(xv)) << R"(" y=")" << top + ph + 16
            << R"(" text-anchor="middle">)" << tick_label(xv) << "</text>\n";
        svg << R"(<text x=")" << left - 6 << R"(" y=")" << num(py(yv) + 4)
            << R"(" text-anchor="end">)" << tick_label(yv) << "</text>\n";
    }
    svg << "</g>\n";
    svg << R"(<text x=")" << left + pw / 2 << R"(" y=")" << height - 15
        << R"(" text-anchor="middle" font-size="13">episode</text>)" << '\n'
        << R"(<text x="18" y=")" << top + ph / 2 << R"(" text-anchor="middle" font-size="13" )"
        << R"(transform="rotate(-90 18 )" << top + ph / 2 << R"lit()">)lit"
        << "reward (moving average, window " << window << ")</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto &s = series[k];
        const auto &m = smooth[k];
        const char *color = kPalette[k % std::size(kPalette)];
        if (s.x.empty()) {
            continue;
        }
        svg << R"(<polygon class="band" fill=")" << color << R"(" fill-opacity="0.2" stroke="none" points=")";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            svg << num(px(s.x[i])) << ',' << num(py(m.mean[i] + m.stddev[i])) << ' ';
        }
        for (std::size_t i = s.x.size(); i-- > 0;) {
            svg << num(px(s.x[i])) << ',' << num(py(m.mean[i] - m.stddev[i]))
                << (i ? " " : "");
        }
        svg << R"("/>)" << '\n';
        svg << R"(<polyline class="curve" fill="none" stroke=")" << color
            << R"(" stroke-width="1.5" points=")";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            svg << (i ? " " : "") << num(px(s.x[i])) << ',' << num(py(m.mean[i]));
        }
        svg << R"("/>)" << '\n';
    }

    // Legend.
    svg << R"(<g class="legend" font-size="12">)" << '\n';
    for (std::size_t k = 0; k < series.size(); ++k) {
        const double y = top + 10 + 18.0 * static_cast<double>(k);
        const char *color = kPalette[k % std::size(kPalette)];
        svg << R"(<line x1=")" << left + 10 << R"(" y1=")" << y << R"(" x2=")" << left + 34
            << R"(" y2=")" << y << R"(" stroke=")" << color << R"(" stroke-width="3"/>)" << '\n'
            << R"(<text class="legend-entry" x=")" << left + 40 << R"(" y=")" << y + 4 << R"(">)"
            << xml_escape(series[k].label) << "</text>\n";
    }
    svg << "</g>\n</svg>\n";
    if (!svg) {
        throw UsageError("failed writing " + out.string());
    }
}

void emit_plot(std::span<const RunRecord> records, const std::filesystem::path &out,
               std::size_t window) {
    std::vector<PlotSeries> series;
    for (const auto &r : records) {
        series.push_back(series_of(r));
    }
    emit_plot(series, out, window);
}

} // namespace anoqrl
