#include "cli/figures.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace qtdlab {

namespace {
std::string sweep_label(const SweepSummary& s) {
    std::string label = agent_name(s.agent);
    if (s.agent != AgentKind::Td) label += "(" + std::to_string(s.m) + ")";
    return label;
}
}  // namespace

FigureSpec figure_mse_vs_lr(const std::vector<SweepSummary>& sweeps, int checkpoint) {
    if (sweeps.empty()) throw std::runtime_error("figure_mse_vs_lr: no sweeps");
    FigureSpec fig;
    fig.kind = "mse_vs_lr";
    fig.log_x = true;
    fig.log_y = true;
    fig.x_label = "learning rate";
    fig.y_label = "MSE";
    int cp = checkpoint;
    if (cp < 0) {
        cp = *std::max_element(sweeps.front().checkpoints.begin(),
                               sweeps.front().checkpoints.end());
    }
    fig.title = sweeps.front().env_id + " after " + std::to_string(cp) + " updates";
    for (const SweepSummary& s : sweeps) {
        const auto it = std::find(s.checkpoints.begin(), s.checkpoints.end(), cp);
        if (it == s.checkpoints.end()) {
            throw std::runtime_error("figure_mse_vs_lr: checkpoint " + std::to_string(cp) +
                                     " missing from sweep " + s.env_id);
        }
        const auto c = static_cast<std::size_t>(it - s.checkpoints.begin());
        Series series;
        series.label = sweep_label(s);
        for (std::size_t lr_i = 0; lr_i < s.lr_grid.size(); ++lr_i) {
            const SweepCell& cell = s.cell(lr_i, c);
            series.x.push_back(s.lr_grid[lr_i]);
            series.y.push_back(cell.mse_mean);
            series.band_lo.push_back(cell.mse_mean - 2.0 * cell.mse_stderr);
            series.band_hi.push_back(cell.mse_mean + 2.0 * cell.mse_stderr);
        }
        fig.series.push_back(std::move(series));
    }
    return fig;
}

FigureSpec figure_improvement(const std::vector<ImprovementCurve>& curves,
                              const std::vector<std::string>& labels) {
    if (curves.empty()) throw std::runtime_error("figure_improvement: no curves");
    FigureSpec fig;
    fig.kind = "improvement_vs_updates";
    fig.log_x = true;
    fig.log_y = true;
    fig.x_label = "updates";
    fig.y_label = "optimal MSE ratio";
    fig.title = "Relative improvement";
    fig.ref_line_y = 1.0;
    for (std::size_t k = 0; k < curves.size(); ++k) {
        Series series;
        series.label = k < labels.size() ? labels[k] : curves[k].env_id;
        for (const ImprovementPoint& p : curves[k].points) {
            if (p.checkpoint <= 0) continue;  // log axis
            series.x.push_back(p.checkpoint);
            series.y.push_back(p.ratio);
        }
        fig.series.push_back(std::move(series));
    }
    return fig;
}

FigureSpec figure_error_vs_m(const std::vector<FixedPointRow>& rows) {
    if (rows.empty()) throw std::runtime_error("figure_error_vs_m: no rows");
    FigureSpec fig;
    fig.kind = "error_vs_m";
    fig.log_x = true;
    fig.log_y = true;
    fig.x_label = "m";
    fig.y_label = "fixed-point value error";
    fig.title = "Fixed-point error and bounds";

    std::map<std::string, Series> observed;
    std::map<std::string, Series> bound41;
    std::map<std::string, Series> bound42;
    for (const FixedPointRow& r : rows) {
        observed[r.env_id].x.push_back(r.m);
        observed[r.env_id].y.push_back(r.value_error_sup);
        bound41[r.env_id].x.push_back(r.m);
        bound41[r.env_id].y.push_back(r.bound_41);
        bound42[r.env_id].x.push_back(r.m);
        bound42[r.env_id].y.push_back(r.bound_42);
    }
    for (auto& [id, series] : observed) {
        series.label = id;
        fig.series.push_back(std::move(series));
    }
    for (auto& [id, series] : bound41) {
        if (std::none_of(series.y.begin(), series.y.end(),
                         [](double v) { return std::isfinite(v); })) {
            continue;
        }
        series.label = id + " bound(support)";
        fig.series.push_back(std::move(series));
    }
    for (auto& [id, series] : bound42) {
        if (std::none_of(series.y.begin(), series.y.end(),
                         [](double v) { return std::isfinite(v); })) {
            continue;
        }
        series.label = id + " bound(sub-gaussian)";
        fig.series.push_back(std::move(series));
    }
    return fig;
}

FigureSpec figure_optimal_lr(const std::vector<ImprovementCurve>& curves,
                             const std::vector<std::string>& labels) {
    if (curves.empty()) throw std::runtime_error("figure_optimal_lr: no curves");
    FigureSpec fig;
    fig.kind = "optimal_lr_vs_updates";
    fig.log_x = true;
    fig.log_y = true;
    fig.x_label = "updates";
    fig.y_label = "optimal learning rate";
    fig.title = "Optimal learning rate";
    for (std::size_t k = 0; k < curves.size(); ++k) {
        const std::string base = k < labels.size() ? labels[k] : curves[k].env_id;
        Series a;
        a.label = base + " (a)";
        Series b;
        b.label = base + " (b)";
        for (const ImprovementPoint& p : curves[k].points) {
            if (p.checkpoint <= 0) continue;
            a.x.push_back(p.checkpoint);
            a.y.push_back(p.optimal_lr_a);
            b.x.push_back(p.checkpoint);
            b.y.push_back(p.optimal_lr_b);
        }
        fig.series.push_back(std::move(a));
        fig.series.push_back(std::move(b));
    }
    return fig;
}

}  // namespace qtdlab
