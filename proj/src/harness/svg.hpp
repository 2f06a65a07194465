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
#ifndef LQT_HARNESS_SVG_HPP
#define LQT_HARNESS_SVG_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace lqt::harness {

struct PlotSeries {
    std::string column;  ///< CSV header name
    std::string label;   ///< legend text (defaults to column)
    bool dashed = false;
    int color = -1;  ///< palette index; -1 assigns by position
};

/**
 * @brief Render a line plot of CSV columns to an SVG file.
 *
 * Cells that are empty or non-numeric are skipped per series. Throws on
 * missing columns or unreadable input; callers that treat plots as optional
 * should catch and warn.
 */
void plot_csv(const std::filesystem::path& csv_path, const std::filesystem::path& svg_path,
              const std::string& title, const std::string& x_column,
              const std::vector<PlotSeries>& series, const std::string& y_label);

}  // namespace lqt::harness

#endif  // LQT_HARNESS_SVG_HPP
