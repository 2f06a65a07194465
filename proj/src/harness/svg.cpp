/*
 Copyright 2026 The lqt Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "harness/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>

#include "harness/csv.hpp"
#include "lqt/errors.hpp"

namespace lqt::harness {

namespace {

constexpr double kWidth = 880.0, kHeight = 520.0;
constexpr double kLeft = 80.0, kRight = 180.0, kTop = 50.0, kBottom = 60.0;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr int kPaletteSize = 10;

std::optional<double> parse_cell(const std::string& s) {
    if (s.empty()) return std::nullopt;
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) return std::nullopt;
        return v;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

void plot_csv(const std::filesystem::path& csv_path, const std::filesystem::path& svg_path,
              const std::string& title, const std::string& x_column,
              const std::vector<PlotSeries>& series, const std::string& y_label) {
    const CsvTable table = read_csv(csv_path);
    auto column_index = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < table.header.size(); ++i) {
            if (table.header[i] == name) return i;
        }
        throw ValidationError("plot_csv: column '" + name + "' not in " + csv_path.string());
    };

    const std::size_t xi = column_index(x_column);
    struct Line {
        std::vector<std::pair<double, double>> pts;
        const PlotSeries* spec;
    };
    std::vector<Line> lines;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const PlotSeries& s : series) {
        Line line;
        line.spec = &s;
        const std::size_t yi = column_index(s.column);
        for (const auto& row : table.rows) {
            if (xi >= row.size() || yi >= row.size()) continue;
            const auto x = parse_cell(row[xi]);
            const auto y = parse_cell(row[yi]);
            if (!x || !y) continue;
            line.pts.emplace_back(*x, *y);
            xmin = std::min(xmin, *x);
            xmax = std::max(xmax, *x);
            ymin = std::min(ymin, *y);
            ymax = std::max(ymax, *y);
        }
        lines.push_back(std::move(line));
    }
    if (!std::isfinite(xmin) || !std::isfinite(ymin)) {
        throw ValidationError("plot_csv: no numeric data to plot in " + csv_path.string());
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto sy = [&](double y) { return kTop + plot_h - (y - ymin) / (ymax - ymin) * plot_h; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"28\" font-size=\"17\" "
        << "font-family=\"sans-serif\" text-anchor=\"middle\">" << title << "</text>\n";

    // Grid, ticks, tick labels.
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double fx = xmin + (xmax - xmin) * i / kTicks;
        const double fy = ymin + (ymax - ymin) * i / kTicks;
        const double px = sx(fx), py = sy(fy);
        svg << "<line x1=\"" << px << "\" y1=\"" << kTop << "\" x2=\"" << px << "\" y2=\""
            << kTop + plot_h << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
            << "<line x1=\"" << kLeft << "\" y1=\"" << py << "\" x2=\"" << kLeft + plot_w
            << "\" y2=\"" << py << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
            << "<text x=\"" << px << "\" y=\"" << kTop + plot_h + 20
            << "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\">" << fmt(fx)
            << "</text>\n"
            << "<text x=\"" << kLeft - 8 << "\" y=\"" << py + 4
            << "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"end\">" << fmt(fy)
            << "</text>\n";
    }
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#333333\"/>\n"
        << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
        << "\" font-size=\"13\" font-family=\"sans-serif\" text-anchor=\"middle\">" << x_column
        << "</text>\n"
        << "<text x=\"20\" y=\"" << kTop + plot_h / 2 << "\" font-size=\"13\" "
        << "font-family=\"sans-serif\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << kTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

    // Series polylines and legend.
    double legend_y = kTop + 10;
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const Line& line = lines[k];
        if (line.pts.empty()) continue;
        const int ci = line.spec->color >= 0 ? line.spec->color : static_cast<int>(k);
        const char* color = kPalette[ci % kPaletteSize];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\"";
        if (line.spec->dashed) svg << " stroke-dasharray=\"6,4\"";
        svg << " points=\"";
        for (const auto& [x, y] : line.pts) svg << fmt(sx(x)) << ',' << fmt(sy(y)) << ' ';
        svg << "\"/>\n";

        const double lx = kLeft + plot_w + 14;
        svg << "<line x1=\"" << lx << "\" y1=\"" << legend_y << "\" x2=\"" << lx + 26
            << "\" y2=\"" << legend_y << "\" stroke=\"" << color << "\" stroke-width=\"1.6\"";
        if (line.spec->dashed) svg << " stroke-dasharray=\"6,4\"";
        svg << "/>\n"
            << "<text x=\"" << lx + 32 << "\" y=\"" << legend_y + 4
            << "\" font-size=\"12\" font-family=\"sans-serif\">"
            << (line.spec->label.empty() ? line.spec->column : line.spec->label) << "</text>\n";
        legend_y += 18;
    }
    svg << "</svg>\n";
    write_text_atomic(svg_path, svg.str());
}

}  // namespace lqt::harness
