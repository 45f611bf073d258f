#pragma once

#include <string>
#include <vector>

#include "cli/svg.hpp"
#include "qtdlab/csv.hpp"

namespace qtdlab {

/// MSE against learning rate at one checkpoint (-1 selects the largest
/// recorded checkpoint), one series per sweep, bands at mean +/- 2 stderr.
FigureSpec figure_mse_vs_lr(const std::vector<SweepSummary>& sweeps, int checkpoint = -1);

/// Optimal-MSE ratio against number of updates, reference gridline at 1.
FigureSpec figure_improvement(const std::vector<ImprovementCurve>& curves,
                              const std::vector<std::string>& labels);

/// Fixed-point error and both bounds against m, grouped by env_id.
FigureSpec figure_error_vs_m(const std::vector<FixedPointRow>& rows);

/// Optimal learning rate against number of updates for both sweeps of an
/// improvement curve.
FigureSpec figure_optimal_lr(const std::vector<ImprovementCurve>& curves,
                             const std::vector<std::string>& labels);

}  // namespace qtdlab
