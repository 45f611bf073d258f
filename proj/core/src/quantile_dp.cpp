#include "qtdlab/quantile_dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qtdlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kInvertTol = 1e-10;
constexpr double kBracketEps = 1e-14;

// Range outside which a reward CDF is numerically saturated (0 below,
// 1 above, to ~1e-17); lets mixture evaluations skip most components.
std::pair<double, double> saturation_range(const RewardModel& r) {
    switch (r.kind) {
        case RewardKind::PointMass: return {r.mean, r.mean};
        case RewardKind::Gaussian: return {r.mean - 9.5 * r.scale, r.mean + 9.5 * r.scale};
        case RewardKind::Exponential: return {r.mean - 1.0, r.mean - 1.0 + 45.0};
        case RewardKind::StudentT2: return {r.mean - 3e8, r.mean + 3e8};
    }
    return {-kInf, kInf};
}

// One-step target distribution at a state: a mixture of copies of the
// state's reward distribution shifted by bootstrap values,
//   F(z) = sum_k w_k F_R(z - s_k).
// Covers both operators: shifts are gamma*theta(x',j) for the quantile
// operator and gamma*v(x') for the pseudo-quantile one.
class MixtureTarget {
  public:
    MixtureTarget(RewardModel reward, std::vector<std::pair<double, double>> shift_weight)
        : reward_(reward) {
        for (const auto& [s, w] : shift_weight) {
            if (!std::isfinite(s)) {
                throw std::runtime_error("target distribution: non-finite bootstrap value");
            }
        }
        std::sort(shift_weight.begin(), shift_weight.end());
        const std::size_t k = shift_weight.size();
        shifts_.resize(k);
        weights_.resize(k);
        prefix_.resize(k + 1);
        prefix_[0] = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            shifts_[i] = shift_weight[i].first;
            weights_[i] = shift_weight[i].second;
            prefix_[i + 1] = prefix_[i] + weights_[i];
        }
        std::tie(sat_lo_, sat_hi_) = saturation_range(reward_);
    }

    bool atomic() const { return reward_.kind == RewardKind::PointMass; }
    const RewardModel& reward() const { return reward_; }
    const std::vector<double>& shifts() const { return shifts_; }
    const std::vector<double>& weights() const { return weights_; }

    double cdf(double z) const {
        const auto [a, b] = window(z);
        double f = prefix_[a];
        for (std::size_t k = a; k < b; ++k) f += weights_[k] * qtdlab::cdf(reward_, z - shifts_[k]);
        return f;
    }

    // CDF and density in one pass; density is 0 for atomic targets.
    std::pair<double, double> cdf_pdf(double z) const {
        const auto [a, b] = window(z);
        double f = prefix_[a];
        double d = 0.0;
        for (std::size_t k = a; k < b; ++k) {
            f += weights_[k] * qtdlab::cdf(reward_, z - shifts_[k]);
            d += weights_[k] * qtdlab::pdf(reward_, z - shifts_[k]);
        }
        return {f, d};
    }

    // Bracket [lo, hi] with F(lo) <= 1e-14 and F(hi) >= 1 - 1e-14.
    std::pair<double, double> global_bracket() const {
        const double lo = shifts_.front() + quantile(reward_, kBracketEps);
        const double hi = shifts_.back() + quantile(reward_, 1.0 - kBracketEps);
        if (!std::isfinite(lo) || !std::isfinite(hi)) {
            throw std::runtime_error("target_quantile: non-finite bracket (malformed table)");
        }
        return {lo, hi};
    }

  private:
    std::pair<std::size_t, std::size_t> window(double z) const {
        const auto a = static_cast<std::size_t>(
            std::upper_bound(shifts_.begin(), shifts_.end(), z - sat_hi_) - shifts_.begin());
        const auto b = static_cast<std::size_t>(
            std::upper_bound(shifts_.begin(), shifts_.end(), z - sat_lo_) - shifts_.begin());
        return {a, b};
    }

    RewardModel reward_;
    std::vector<double> shifts_;
    std::vector<double> weights_;
    std::vector<double> prefix_;  // prefix_[k] = sum of weights before k
    double sat_lo_ = 0.0;
    double sat_hi_ = 0.0;
};

MixtureTarget build_qtd_target(const Mrp& mrp, const QuantileTable& table, int x) {
    std::vector<std::pair<double, double>> sw;
    sw.reserve(static_cast<std::size_t>(mrp.n_states()) * static_cast<std::size_t>(table.m));
    const double gamma = mrp.gamma();
    for (int y = 0; y < mrp.n_states(); ++y) {
        const double pxy = mrp.p(x, y);
        if (pxy == 0.0) continue;
        const double w = pxy / table.m;
        for (int j = 0; j < table.m; ++j) sw.emplace_back(gamma * table.at(y, j), w);
    }
    return MixtureTarget(mrp.reward(x), std::move(sw));
}

MixtureTarget build_pqtd_target(const Mrp& mrp, const ValueTable& v, int x) {
    std::vector<std::pair<double, double>> sw;
    const double gamma = mrp.gamma();
    for (int y = 0; y < mrp.n_states(); ++y) {
        const double pxy = mrp.p(x, y);
        if (pxy == 0.0) continue;
        sw.emplace_back(gamma * v.v[static_cast<std::size_t>(y)], pxy);
    }
    return MixtureTarget(mrp.reward(x), std::move(sw));
}

// Left quantile of an atomic target: sorted cumulative walk. taus must be
// ascending; out receives one quantile per level.
void atomic_quantiles(const MixtureTarget& t, std::span<const double> taus,
                      std::span<double> out) {
    const auto& shifts = t.shifts();
    const auto& weights = t.weights();
    const double atom_offset = t.reward().mean;
    std::size_t k = 0;
    double cum = weights.empty() ? 0.0 : weights[0];
    for (std::size_t i = 0; i < taus.size(); ++i) {
        while (cum < taus[i] && k + 1 < shifts.size()) {
            ++k;
            cum += weights[k];
        }
        out[i] = atom_offset + shifts[k];
    }
}

// Bracketed root find for F(z) = tau on a continuous monotone mixture CDF.
// Newton candidates drive the search and a bisection step is interleaved so
// the bracket provably shrinks; the loop exits either on bracket width or on
// the Newton certificate |F(z) - tau| <= density * tol/2, which bounds the
// distance to the root by ~tol/2 for the smooth families used here. Returns
// a point within kInvertTol of the left quantile and (optionally) a value
// that remains a strict lower bracket for any higher quantile level.
double invert_continuous(const MixtureTarget& t, double tau, double lo, double hi, double hint,
                         double* final_lo, double tol = kInvertTol) {
    double z = (hint > lo && hint < hi) ? hint : 0.5 * (lo + hi);
    for (int it = 0; it < 400; ++it) {
        const auto [f_raw, density] = t.cdf_pdf(z);
        const double f = f_raw - tau;
        if (density > 0.0 && std::abs(f) <= density * (0.5 * tol)) {
            if (final_lo) *final_lo = std::max(lo, z - tol);
            return z;
        }
        if (f >= 0.0) {
            hi = z;
        } else {
            lo = z;
        }
        if (hi - lo < tol) break;
        double next = 0.5 * (lo + hi);
        if (it % 6 != 5 && density > 0.0) {
            const double newton = z - f / density;
            if (newton > lo && newton < hi) next = newton;
        }
        z = next;
    }
    if (final_lo) *final_lo = lo;
    return 0.5 * (lo + hi);
}

// All quantile levels of one target, ascending taus. hints (may be empty)
// are warm starts, typically the previous sweep's row.
void mixture_quantiles(const MixtureTarget& t, std::span<const double> taus,
                       std::span<const double> hints, std::span<double> out,
                       double tol = kInvertTol) {
    if (t.atomic()) {
        atomic_quantiles(t, taus, out);
        return;
    }
    const auto [glo, ghi] = t.global_bracket();
    double lo = glo;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double hint = hints.empty() ? std::numeric_limits<double>::quiet_NaN() : hints[i];
        out[i] = invert_continuous(t, taus[i], lo, ghi, hint, &lo, tol);
    }
}

ValueTable sup_error_value(const Mrp& mrp, const QuantileTable& theta, double* sup_err) {
    ValueTable value = value_from_quantiles(theta);
    const ValueTable truth = true_value(mrp);
    double err = 0.0;
    for (int x = 0; x < mrp.n_states(); ++x) {
        err = std::max(err, std::abs(value.v[static_cast<std::size_t>(x)] -
                                     truth.v[static_cast<std::size_t>(x)]));
    }
    *sup_err = err;
    return value;
}

template <typename IterateRow>
DpResult run_fixed_point(const Mrp& mrp, int m, double tol, int max_iterations,
                         IterateRow&& iterate_row) {
    if (m < 1) throw std::invalid_argument("fixed_point: m must be >= 1");
    const int n = mrp.n_states();
    QuantileTable theta(n, m);
    QuantileTable next(n, m);

    DpResult result;
    result.residual = kInf;
    double invert_tol = 1e-4;
    for (int iter = 1; iter <= max_iterations; ++iter) {
        // Early sweeps tolerate coarse inversions; the tolerance tightens
        // with the residual so the convergence test runs at full precision.
        invert_tol = std::clamp(0.01 * result.residual, kInvertTol, 1e-4);
        iterate_row(theta, next, invert_tol);
        double residual = 0.0;
        for (std::size_t k = 0; k < theta.theta.size(); ++k) {
            residual = std::max(residual, std::abs(next.theta[k] - theta.theta[k]));
        }
        std::swap(theta, next);
        result.iterations = iter;
        result.residual = residual;
        if (residual < tol) {
            result.converged = true;
            break;
        }
    }
    result.value = sup_error_value(mrp, theta, &result.value_error_sup);
    result.theta_fixed = std::move(theta);
    return result;
}

}  // namespace

double target_cdf(const Mrp& mrp, const QuantileTable& table, int x, double z) {
    return build_qtd_target(mrp, table, x).cdf(z);
}

double target_quantile(const Mrp& mrp, const QuantileTable& table, int x, double tau) {
    if (!(tau > 0.0 && tau < 1.0)) {
        throw std::invalid_argument("target_quantile: tau must lie in (0,1)");
    }
    const MixtureTarget t = build_qtd_target(mrp, table, x);
    if (t.atomic()) {
        double out;
        atomic_quantiles(t, {&tau, 1}, {&out, 1});
        return out;
    }
    auto [lo, hi] = t.global_bracket();
    // The analytic bracket covers tau in [1e-14, 1-1e-14]; expand
    // geometrically for more extreme levels.
    double width = std::max(1.0, hi - lo);
    int doublings = 0;
    while (t.cdf(lo) >= tau) {
        lo -= width;
        width *= 2.0;
        if (++doublings > 200 || !std::isfinite(lo)) {
            throw std::runtime_error("target_quantile: bracket expansion failed (lower)");
        }
    }
    width = std::max(1.0, hi - lo);
    doublings = 0;
    while (t.cdf(hi) < tau) {
        hi += width;
        width *= 2.0;
        if (++doublings > 200 || !std::isfinite(hi)) {
            throw std::runtime_error("target_quantile: bracket expansion failed (upper)");
        }
    }
    return invert_continuous(t, tau, lo, hi, std::numeric_limits<double>::quiet_NaN(), nullptr);
}

QuantileTable qdp_iterate(const Mrp& mrp, const QuantileTable& table) {
    QuantileTable next(table.n_states, table.m);
    for (int x = 0; x < table.n_states; ++x) {
        const MixtureTarget t = build_qtd_target(mrp, table, x);
        mixture_quantiles(t, table.tau,
                          {table.row(x), static_cast<std::size_t>(table.m)},
                          {next.theta.data() + static_cast<std::size_t>(x) * table.m,
                           static_cast<std::size_t>(table.m)});
    }
    return next;
}

QuantileTable pqtd_iterate(const Mrp& mrp, const QuantileTable& table) {
    QuantileTable next(table.n_states, table.m);
    const ValueTable v = value_from_quantiles(table);
    for (int x = 0; x < table.n_states; ++x) {
        const MixtureTarget t = build_pqtd_target(mrp, v, x);
        mixture_quantiles(t, table.tau,
                          {table.row(x), static_cast<std::size_t>(table.m)},
                          {next.theta.data() + static_cast<std::size_t>(x) * table.m,
                           static_cast<std::size_t>(table.m)});
    }
    return next;
}

DpResult qdp_fixed_point(const Mrp& mrp, int m, double tol, int max_iterations) {
    return run_fixed_point(mrp, m, tol, max_iterations,
                           [&](const QuantileTable& cur, QuantileTable& next, double itol) {
                               for (int x = 0; x < cur.n_states; ++x) {
                                   const MixtureTarget t = build_qtd_target(mrp, cur, x);
                                   mixture_quantiles(
                                       t, cur.tau, {cur.row(x), static_cast<std::size_t>(cur.m)},
                                       {next.theta.data() + static_cast<std::size_t>(x) * cur.m,
                                        static_cast<std::size_t>(cur.m)},
                                       itol);
                               }
                           });
}

DpResult pqtd_fixed_point(const Mrp& mrp, int m, double tol, int max_iterations) {
    return run_fixed_point(mrp, m, tol, max_iterations,
                           [&](const QuantileTable& cur, QuantileTable& next, double itol) {
                               const ValueTable v = value_from_quantiles(cur);
                               for (int x = 0; x < cur.n_states; ++x) {
                                   const MixtureTarget t = build_pqtd_target(mrp, v, x);
                                   mixture_quantiles(
                                       t, cur.tau, {cur.row(x), static_cast<std::size_t>(cur.m)},
                                       {next.theta.data() + static_cast<std::size_t>(x) * cur.m,
                                        static_cast<std::size_t>(cur.m)},
                                       itol);
                               }
                           });
}

double bound_prop41(const Mrp& mrp, int m) {
    const auto [r_min, r_max] = reward_support_bounds(mrp);
    if (!std::isfinite(r_min) || !std::isfinite(r_max)) return kInf;
    const double g = 1.0 - mrp.gamma();
    return (r_max - r_min) / (2.0 * m * g * g);
}

double bound_prop42(double r_min, double r_max, double sigma, double gamma, int m) {
    if (m < 1) throw std::invalid_argument("bound_prop42: m must be >= 1");
    const double g = 1.0 - gamma;
    const double root = std::sqrt(2.0 * std::log(2.0 * m));
    return ((r_max - r_min + 2.0 * sigma * root) / (2.0 * g) + sigma / root) / (g * m);
}

double bound_prop42(const Mrp& mrp, int m) {
    double sigma = 0.0;
    for (const RewardModel& r : mrp.rewards()) {
        switch (r.kind) {
            case RewardKind::PointMass: break;
            case RewardKind::Gaussian: sigma = std::max(sigma, r.scale); break;
            case RewardKind::Exponential:
            case RewardKind::StudentT2:
                return kInf;  // not sub-Gaussian
        }
    }
    const auto [mean_lo, mean_hi] = reward_mean_bounds(mrp);
    return bound_prop42(mean_lo, mean_hi, sigma, mrp.gamma(), m);
}

BoundReport bound_report(const Mrp& mrp, int m, const DpResult& result) {
    return {bound_prop41(mrp, m), bound_prop42(mrp, m), result.value_error_sup};
}

std::vector<ErrorCurvePoint> fixed_point_error_curve(const Mrp& mrp,
                                                     const std::vector<int>& m_list) {
    std::vector<ErrorCurvePoint> out;
    out.reserve(m_list.size());
    for (int m : m_list) {
        const DpResult r = qdp_fixed_point(mrp, m);
        out.push_back({m, r.value_error_sup, r.converged});
    }
    return out;
}

}  // namespace qtdlab
