#pragma once

#include <utility>
#include <vector>

#include "qtdlab/agents.hpp"
#include "qtdlab/mrp.hpp"
#include "qtdlab/tables.hpp"

namespace qtdlab {

/// Result of iterating a projected distributional operator to its fixed
/// point. On non-convergence the last iterate is still returned, with
/// converged = false and the final residual.
struct DpResult {
    QuantileTable theta_fixed;
    ValueTable value;            // value_from_quantiles(theta_fixed)
    double value_error_sup = 0;  // ||value - V^pi||_inf
    int iterations = 0;
    double residual = 0;  // final sup-norm change
    bool converged = false;
};

/// Per-environment bound evaluation against the observed fixed-point error.
struct BoundReport {
    double bound_41 = 0;  // bounded-support bound; +inf for unbounded families
    double bound_42 = 0;  // sub-Gaussian bound; +inf for non-sub-Gaussian families
    double observed_error = 0;
};

/// CDF of the one-step target distribution at state x:
///
///   F(z) = sum_{x'} P(x,x') (1/m) sum_j F_{R_x}(z - gamma theta(x',j)).
double target_cdf(const Mrp& mrp, const QuantileTable& table, int x, double z);

/// Left quantile of the target distribution at state x (lambda = 0
/// projection convention). Exact sorted-atom walk for PointMass rewards;
/// bracketed bisection (with an interior Newton-style accelerator, final
/// bracket width < 1e-10) for continuous families. Throws on bracket
/// expansion failure, which signals a malformed table.
double target_quantile(const Mrp& mrp, const QuantileTable& table, int x, double tau);

/// One synchronous application of the projected distributional operator:
/// theta'(x,i) = F^{-1}_{target(x)}(tau_i) for all (x, i).
QuantileTable qdp_iterate(const Mrp& mrp, const QuantileTable& table);

/// One synchronous application of the pseudo-quantile operator: the target
/// at x is R_x + gamma v(X') with v = value_from_quantiles(theta).
QuantileTable pqtd_iterate(const Mrp& mrp, const QuantileTable& table);

/// Iterates qdp_iterate from theta = 0 until the sup-norm change drops
/// below tol (default 1e-9) or max_iterations is hit.
DpResult qdp_fixed_point(const Mrp& mrp, int m, double tol = 1e-9, int max_iterations = 100000);

/// Same stopping rule for the pseudo-quantile operator.
DpResult pqtd_fixed_point(const Mrp& mrp, int m, double tol = 1e-9, int max_iterations = 100000);

/// (R_max - R_min) / (2 m (1-gamma)^2); +inf when any reward support is
/// unbounded.
double bound_prop41(const Mrp& mrp, int m);

/// Sub-Gaussian fixed-point bound:
///
///   1/((1-gamma) m) * ( (r_max - r_min + 2 sigma sqrt(2 log 2m)) / (2 (1-gamma))
///                       + sigma / sqrt(2 log 2m) )
double bound_prop42(double r_min, double r_max, double sigma, double gamma, int m);

/// Family-aware wrapper: PointMass rewards have sigma = 0, Gaussian rewards
/// sigma = max scale; Exponential and StudentT2 are not sub-Gaussian and
/// report +inf.
double bound_prop42(const Mrp& mrp, int m);

BoundReport bound_report(const Mrp& mrp, int m, const DpResult& result);

struct ErrorCurvePoint {
    int m = 0;
    double value_error_sup = 0;
    bool converged = false;
};

/// Fixed-point value error for each m in m_list.
std::vector<ErrorCurvePoint> fixed_point_error_curve(const Mrp& mrp,
                                                     const std::vector<int>& m_list);

}  // namespace qtdlab
