#pragma once

#include <string>
#include <vector>

#include "qtdlab/harness.hpp"
#include "qtdlab/quantile_dp.hpp"

namespace qtdlab {

/// Plain comma-separated table with a header row. Fields never contain
/// commas here, so no quoting is needed.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;  // throws if absent
};

std::string csv_emit(const CsvTable& table);
CsvTable csv_parse(const std::string& text);

/// Numbers are emitted with 17 significant digits ("inf"/"nan" spelled out)
/// so parse(emit(x)) == x.
std::string csv_number(double v);
double csv_to_number(const std::string& field);

/// Sweep results, one row per (lr, checkpoint):
///   env_id,agent,m,lr,checkpoint,mse_mean,mse_stderr,n_runs,n_diverged
CsvTable sweep_to_csv(const SweepSummary& summary);
SweepSummary sweep_from_csv(const CsvTable& table);

/// Fixed-point certification rows:
///   env_id,m,value_error_sup,bound_41,bound_42,iterations,residual,converged
struct FixedPointRow {
    std::string env_id;
    int m = 0;
    double value_error_sup = 0;
    double bound_41 = 0;
    double bound_42 = 0;
    int iterations = 0;
    double residual = 0;
    bool converged = true;
};
CsvTable fixed_point_to_csv(const std::vector<FixedPointRow>& rows);
std::vector<FixedPointRow> fixed_point_from_csv(const CsvTable& table);

/// Improvement-curve rows:
///   env_id,checkpoint,ratio,optimal_lr_a,optimal_lr_b,mse_a,mse_b,stderr_a,stderr_b
CsvTable improvement_to_csv(const ImprovementCurve& curve);
ImprovementCurve improvement_from_csv(const CsvTable& table);

}  // namespace qtdlab
