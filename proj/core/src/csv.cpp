#include "qtdlab/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qtdlab {

namespace {
std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}
}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw std::runtime_error("csv: missing column '" + name + "'");
}

std::string csv_emit(const CsvTable& table) {
    std::ostringstream out;
    auto emit_row = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    };
    emit_row(table.header);
    for (const auto& row : table.rows) emit_row(row);
    return out.str();
}

CsvTable csv_parse(const std::string& text) {
    CsvTable table;
    std::istringstream iss(text);
    std::string line;
    bool first = true;
    while (std::getline(iss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_commas(line);
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            if (fields.size() != table.header.size()) {
                throw std::runtime_error("csv: row width does not match header");
            }
            table.rows.push_back(std::move(fields));
        }
    }
    if (first) throw std::runtime_error("csv: empty input");
    return table;
}

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double csv_to_number(const std::string& field) {
    if (field == "inf") return std::numeric_limits<double>::infinity();
    if (field == "-inf") return -std::numeric_limits<double>::infinity();
    if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
    std::size_t pos = 0;
    const double v = std::stod(field, &pos);
    if (pos != field.size()) throw std::runtime_error("csv: bad number '" + field + "'");
    return v;
}

CsvTable sweep_to_csv(const SweepSummary& summary) {
    CsvTable table;
    table.header = {"env_id", "agent",      "m",      "lr",     "checkpoint",
                    "mse_mean", "mse_stderr", "n_runs", "n_diverged"};
    for (std::size_t lr_i = 0; lr_i < summary.lr_grid.size(); ++lr_i) {
        for (std::size_t c = 0; c < summary.checkpoints.size(); ++c) {
            const SweepCell& cell = summary.cell(lr_i, c);
            table.rows.push_back({summary.env_id, agent_name(summary.agent),
                                  std::to_string(summary.m), csv_number(summary.lr_grid[lr_i]),
                                  std::to_string(summary.checkpoints[c]),
                                  csv_number(cell.mse_mean), csv_number(cell.mse_stderr),
                                  std::to_string(summary.n_runs),
                                  std::to_string(cell.n_diverged)});
        }
    }
    return table;
}

SweepSummary sweep_from_csv(const CsvTable& table) {
    SweepSummary summary;
    const auto c_env = table.column("env_id");
    const auto c_agent = table.column("agent");
    const auto c_m = table.column("m");
    const auto c_lr = table.column("lr");
    const auto c_cp = table.column("checkpoint");
    const auto c_mean = table.column("mse_mean");
    const auto c_se = table.column("mse_stderr");
    const auto c_runs = table.column("n_runs");
    const auto c_div = table.column("n_diverged");

    if (table.rows.empty()) throw std::runtime_error("csv: sweep table has no rows");
    summary.env_id = table.rows.front()[c_env];
    summary.agent = agent_from_name(table.rows.front()[c_agent]);
    summary.m = std::stoi(table.rows.front()[c_m]);
    summary.n_runs = std::stoi(table.rows.front()[c_runs]);

    // Recover the grids in first-appearance order.
    for (const auto& row : table.rows) {
        const double lr = csv_to_number(row[c_lr]);
        if (summary.lr_grid.empty() || lr != summary.lr_grid.back()) {
            if (summary.lr_grid.empty() ||
                std::find(summary.lr_grid.begin(), summary.lr_grid.end(), lr) ==
                    summary.lr_grid.end()) {
                summary.lr_grid.push_back(lr);
            }
        }
        const int cp = std::stoi(row[c_cp]);
        if (std::find(summary.checkpoints.begin(), summary.checkpoints.end(), cp) ==
            summary.checkpoints.end()) {
            summary.checkpoints.push_back(cp);
        }
    }
    summary.cells.assign(summary.lr_grid.size() * summary.checkpoints.size(), {});
    for (const auto& row : table.rows) {
        const double lr = csv_to_number(row[c_lr]);
        const int cp = std::stoi(row[c_cp]);
        const auto lr_i = static_cast<std::size_t>(
            std::find(summary.lr_grid.begin(), summary.lr_grid.end(), lr) -
            summary.lr_grid.begin());
        const auto cp_i = static_cast<std::size_t>(
            std::find(summary.checkpoints.begin(), summary.checkpoints.end(), cp) -
            summary.checkpoints.begin());
        SweepCell& cell = summary.cell(lr_i, cp_i);
        cell.mse_mean = csv_to_number(row[c_mean]);
        cell.mse_stderr = csv_to_number(row[c_se]);
        cell.n_diverged = std::stoi(row[c_div]);
    }
    return summary;
}

CsvTable fixed_point_to_csv(const std::vector<FixedPointRow>& rows) {
    CsvTable table;
    table.header = {"env_id", "m",      "value_error_sup", "bound_41",
                    "bound_42", "iterations", "residual",  "converged"};
    for (const FixedPointRow& r : rows) {
        table.rows.push_back({r.env_id, std::to_string(r.m), csv_number(r.value_error_sup),
                              csv_number(r.bound_41), csv_number(r.bound_42),
                              std::to_string(r.iterations), csv_number(r.residual),
                              r.converged ? "1" : "0"});
    }
    return table;
}

std::vector<FixedPointRow> fixed_point_from_csv(const CsvTable& table) {
    std::vector<FixedPointRow> rows;
    const auto c_env = table.column("env_id");
    const auto c_m = table.column("m");
    const auto c_err = table.column("value_error_sup");
    const auto c_b41 = table.column("bound_41");
    const auto c_b42 = table.column("bound_42");
    const auto c_it = table.column("iterations");
    const auto c_res = table.column("residual");
    const auto c_conv = table.column("converged");
    for (const auto& row : table.rows) {
        rows.push_back({row[c_env], std::stoi(row[c_m]), csv_to_number(row[c_err]),
                        csv_to_number(row[c_b41]), csv_to_number(row[c_b42]),
                        std::stoi(row[c_it]), csv_to_number(row[c_res]), row[c_conv] == "1"});
    }
    return rows;
}

CsvTable improvement_to_csv(const ImprovementCurve& curve) {
    CsvTable table;
    table.header = {"env_id", "checkpoint", "ratio",  "optimal_lr_a", "optimal_lr_b",
                    "mse_a",  "mse_b",      "stderr_a", "stderr_b"};
    for (const ImprovementPoint& p : curve.points) {
        table.rows.push_back({curve.env_id, std::to_string(p.checkpoint), csv_number(p.ratio),
                              csv_number(p.optimal_lr_a), csv_number(p.optimal_lr_b),
                              csv_number(p.mse_a), csv_number(p.mse_b), csv_number(p.stderr_a),
                              csv_number(p.stderr_b)});
    }
    return table;
}

ImprovementCurve improvement_from_csv(const CsvTable& table) {
    ImprovementCurve curve;
    const auto c_env = table.column("env_id");
    const auto c_cp = table.column("checkpoint");
    const auto c_ratio = table.column("ratio");
    const auto c_lra = table.column("optimal_lr_a");
    const auto c_lrb = table.column("optimal_lr_b");
    const auto c_ma = table.column("mse_a");
    const auto c_mb = table.column("mse_b");
    const auto c_sa = table.column("stderr_a");
    const auto c_sb = table.column("stderr_b");
    for (const auto& row : table.rows) {
        curve.env_id = row[c_env];
        curve.points.push_back({std::stoi(row[c_cp]), csv_to_number(row[c_ratio]),
                                csv_to_number(row[c_lra]), csv_to_number(row[c_lrb]),
                                csv_to_number(row[c_ma]), csv_to_number(row[c_mb]),
                                csv_to_number(row[c_sa]), csv_to_number(row[c_sb])});
    }
    return curve;
}

}  // namespace qtdlab
