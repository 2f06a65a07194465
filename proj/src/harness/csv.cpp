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
#include "harness/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lqt::harness {

namespace fs = std::filesystem;

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw Error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

void write_csv(const fs::path& path, const CsvTable& table) {
    std::ostringstream out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out << ',';
        out << table.header[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
    write_text_atomic(path, out.str());
}

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    CsvTable table;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ss(s);
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!s.empty() && s.back() == ',') cells.emplace_back();
        return cells;
    };
    if (std::getline(in, line)) table.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        table.rows.push_back(split(line));
    }
    return table;
}

namespace {

std::vector<std::string> state_header(Eigen::Index n, Eigen::Index m) {
    std::vector<std::string> h{"t"};
    for (Eigen::Index i = 1; i <= n; ++i) h.push_back("x" + std::to_string(i));
    for (Eigen::Index i = 1; i <= n; ++i) h.push_back("r" + std::to_string(i));
    for (Eigen::Index i = 1; i <= m; ++i) h.push_back("u" + std::to_string(i));
    return h;
}

}  // namespace

void write_trajectory_csv(const fs::path& path, const Trajectory<double>& traj) {
    traj.check_consistent();
    if (traj.references.empty()) {
        throw ValidationError("write_trajectory_csv: trajectory carries no reference track");
    }
    const Eigen::Index n = traj.states.front().size();
    const Eigen::Index m = traj.inputs.empty() ? 0 : traj.inputs.front().size();
    CsvTable table;
    table.header = state_header(n, m);
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        std::vector<std::string> row{std::to_string(traj.t0 + static_cast<int>(k))};
        for (Eigen::Index i = 0; i < n; ++i) row.push_back(format_value(traj.states[k](i)));
        for (Eigen::Index i = 0; i < n; ++i) row.push_back(format_value(traj.references[k](i)));
        for (Eigen::Index i = 0; i < m; ++i) {
            row.push_back(k < traj.inputs.size() ? format_value(traj.inputs[k](i)) : "");
        }
        table.rows.push_back(std::move(row));
    }
    write_csv(path, table);
}

Trajectory<double> read_trajectory_csv(const fs::path& path) {
    const CsvTable table = read_csv(path);
    Eigen::Index n = 0, m = 0;
    for (const auto& h : table.header) {
        if (h.rfind('x', 0) == 0) ++n;
        else if (h.rfind('u', 0) == 0) ++m;
    }
    if (n < 1 || table.rows.empty()) {
        throw ValidationError("read_trajectory_csv: malformed trajectory in " + path.string());
    }
    Trajectory<double> traj;
    traj.t0 = std::stoi(table.rows.front().front());
    for (std::size_t k = 0; k < table.rows.size(); ++k) {
        const auto& row = table.rows[k];
        if (static_cast<Eigen::Index>(row.size()) < 1 + 2 * n) {
            throw ValidationError("read_trajectory_csv: short row in " + path.string());
        }
        Eigen::VectorXd x(n), r(n);
        for (Eigen::Index i = 0; i < n; ++i) x(i) = std::stod(row[static_cast<std::size_t>(1 + i)]);
        for (Eigen::Index i = 0; i < n; ++i) {
            r(i) = std::stod(row[static_cast<std::size_t>(1 + n + i)]);
        }
        traj.states.push_back(std::move(x));
        traj.references.push_back(std::move(r));
        if (k + 1 < table.rows.size()) {
            Eigen::VectorXd u(m);
            for (Eigen::Index i = 0; i < m; ++i) {
                u(i) = std::stod(row[static_cast<std::size_t>(1 + 2 * n + i)]);
            }
            traj.inputs.push_back(std::move(u));
        }
    }
    traj.check_consistent();
    return traj;
}

void write_cost_csv(const fs::path& path, const CostReport<double>& report, int t_start) {
    CsvTable table;
    table.header = {"t", "stage_cost", "cumulative"};
    for (std::size_t k = 0; k < report.per_step.size(); ++k) {
        table.rows.push_back({std::to_string(t_start + static_cast<int>(k)),
                              format_value(report.per_step[k]),
                              format_value(report.cumulative[k])});
    }
    write_csv(path, table);
}

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& M) {
    std::ostringstream out;
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j) out << ',';
            out << format_value(M(i, j));
        }
        out << '\n';
    }
    write_text_atomic(path, out.str());
}

void write_dataset_csv(const fs::path& path, const TransitionDataset<double>& data) {
    data.check_consistent();
    const Eigen::Index n = data.n2() / 2;
    const Eigen::Index m = data.m();
    const Eigen::Index N = data.count();
    CsvTable table;
    table.header = state_header(n, m);
    for (Eigen::Index t = 0; t < N; ++t) {
        std::vector<std::string> row{std::to_string(t)};
        for (Eigen::Index i = 0; i < 2 * n; ++i) row.push_back(format_value(data.X(t, i)));
        for (Eigen::Index i = 0; i < m; ++i) row.push_back(format_value(data.U(t, i)));
        table.rows.push_back(std::move(row));
    }
    std::vector<std::string> last{std::to_string(N)};
    for (Eigen::Index i = 0; i < 2 * n; ++i) last.push_back(format_value(data.Xnext(N - 1, i)));
    for (Eigen::Index i = 0; i < m; ++i) last.emplace_back();
    table.rows.push_back(std::move(last));
    write_csv(path, table);
}

TransitionDataset<double> read_dataset_csv(const fs::path& path) {
    const CsvTable table = read_csv(path);
    Eigen::Index n = 0, m = 0;
    for (const auto& h : table.header) {
        if (h.rfind('x', 0) == 0) ++n;
        else if (h.rfind('u', 0) == 0) ++m;
    }
    if (n < 1 || table.rows.size() < 2) {
        throw ValidationError("read_dataset_csv: malformed dataset in " + path.string());
    }
    const Eigen::Index N = static_cast<Eigen::Index>(table.rows.size()) - 1;
    TransitionDataset<double> data;
    data.X.resize(N, 2 * n);
    data.U.resize(N, m);
    data.Xnext.resize(N, 2 * n);
    auto parse_row = [&](const std::vector<std::string>& row, Eigen::Index want) {
        if (static_cast<Eigen::Index>(row.size()) < want) {
            throw ValidationError("read_dataset_csv: short row in " + path.string());
        }
    };
    for (Eigen::Index t = 0; t <= N; ++t) {
        const auto& row = table.rows[static_cast<std::size_t>(t)];
        parse_row(row, 1 + 2 * n + (t < N ? m : 0));
        if (t < N) {
            for (Eigen::Index i = 0; i < 2 * n; ++i) {
                data.X(t, i) = std::stod(row[static_cast<std::size_t>(1 + i)]);
            }
            for (Eigen::Index i = 0; i < m; ++i) {
                data.U(t, i) = std::stod(row[static_cast<std::size_t>(1 + 2 * n + i)]);
            }
        }
        if (t > 0) {
            for (Eigen::Index i = 0; i < 2 * n; ++i) {
                data.Xnext(t - 1, i) = std::stod(row[static_cast<std::size_t>(1 + i)]);
            }
        }
    }
    return data;
}

}  // namespace lqt::harness
