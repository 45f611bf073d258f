#pragma once

#include <cstdint>
#include <vector>

#include "qtdlab/mrp.hpp"
#include "qtdlab/tables.hpp"

namespace qtdlab {

/// Classical TD(0): v(x) <- v(x) + alpha (r + gamma v(x') - v(x)).
/// Entries other than x are unchanged.
void td_update(ValueTable& value, const Transition& t, double alpha, double gamma);

/// Quantile TD update, direct O(m^2) form. For every level i,
///
///   theta(x,i) += alpha (tau_i - (1/m) sum_j 1[r + gamma theta(x',j) < theta(x,i)])
///
/// with strict inequality, so ties contribute nothing. All indicator reads
/// use the pre-update table (buffered commit): the result is independent of
/// the i order even when x' = x.
void qtd_update(QuantileTable& table, const Transition& t, double alpha, double gamma);

/// Scratch buffers for the sorted update path; reusable across calls to
/// avoid per-update allocation in long training runs.
struct QtdScratch {
    std::vector<double> targets;
    std::vector<double> new_row;
};

/// O(m log m) QTD update: sorts the bootstrap targets r + gamma theta(x',j)
/// once and locates each theta(x,i) by binary search. Bitwise-identical
/// output to qtd_update for every input.
void qtd_update_fast(QuantileTable& table, const Transition& t, double alpha, double gamma,
                     QtdScratch* scratch = nullptr);

/// Pseudo-quantile TD update: the bootstrap target is the single value
/// r + gamma (1/m) sum_j theta(x',j), so each increment is exactly
/// alpha tau_i or alpha (tau_i - 1).
void pqtd_update(QuantileTable& table, const Transition& t, double alpha, double gamma);

/// Value extraction: v(x) = (1/m) sum_i theta(x,i). Uses compensated
/// summation so the midpoint-quadrature identities hold exactly.
ValueTable value_from_quantiles(const QuantileTable& table);

/// Expected-update / noise decomposition of one (x, i) coordinate, per unit
/// learning rate. Both fields are bounded by 1 in magnitude for any input.
struct UpdateDiagnostics {
    double expected_update = 0.0;
    double noise_variance = 0.0;
};

/// QTD diagnostics at a frozen table. The expected update is computed
/// exactly,
///
///   tau_i - sum_{x'} P(x,x') (1/m) sum_j P(R < theta(x,i) - gamma theta(x',j)),
///
/// using the left limit of the reward CDF (strict-inequality convention).
/// The noise variance is a Monte-Carlo estimate over n_samples transitions
/// drawn from a dedicated sub-stream of noise_seed.
UpdateDiagnostics qtd_expected_update(const Mrp& mrp, const QuantileTable& table, int x, int i,
                                      std::uint64_t noise_seed = 0, int n_samples = 10000);

/// Same decomposition for the PQTD update rule.
UpdateDiagnostics pqtd_expected_update(const Mrp& mrp, const QuantileTable& table, int x, int i,
                                       std::uint64_t noise_seed = 0, int n_samples = 10000);

}  // namespace qtdlab
