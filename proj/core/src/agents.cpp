#include "qtdlab/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qtdlab/summation.hpp"

namespace qtdlab {

namespace {
void check_state(const QuantileTable& table, const Transition& t) {
    if (t.x < 0 || t.x >= table.n_states || t.x_next < 0 || t.x_next >= table.n_states) {
        throw std::invalid_argument("update: transition state out of range");
    }
}
}  // namespace

void td_update(ValueTable& value, const Transition& t, double alpha, double gamma) {
    const auto x = static_cast<std::size_t>(t.x);
    const auto xn = static_cast<std::size_t>(t.x_next);
    value.v[x] += alpha * (t.r + gamma * value.v[xn] - value.v[x]);
}

void qtd_update(QuantileTable& table, const Transition& t, double alpha, double gamma) {
    check_state(table, t);
    const int m = table.m;
    std::vector<double> new_row(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double theta_xi = table.at(t.x, i);
        int count = 0;  // bootstrap targets strictly below theta(x, i)
        for (int j = 0; j < m; ++j) {
            if (t.r + gamma * table.at(t.x_next, j) < theta_xi) ++count;
        }
        new_row[static_cast<std::size_t>(i)] =
            theta_xi + alpha * (table.tau[static_cast<std::size_t>(i)] -
                                static_cast<double>(count) / m);
    }
    for (int i = 0; i < m; ++i) table.at(t.x, i) = new_row[static_cast<std::size_t>(i)];
}

void qtd_update_fast(QuantileTable& table, const Transition& t, double alpha, double gamma,
                     QtdScratch* scratch) {
    check_state(table, t);
    const int m = table.m;
    QtdScratch local;
    QtdScratch& s = scratch ? *scratch : local;
    s.targets.resize(static_cast<std::size_t>(m));
    s.new_row.resize(static_cast<std::size_t>(m));

    // Same rounding as the direct loop: compare r + gamma*theta, not
    // theta - r; bitwise equality with qtd_update depends on it.
    for (int j = 0; j < m; ++j) {
        s.targets[static_cast<std::size_t>(j)] = t.r + gamma * table.at(t.x_next, j);
    }
    std::sort(s.targets.begin(), s.targets.end());

    for (int i = 0; i < m; ++i) {
        const double theta_xi = table.at(t.x, i);
        const auto count = static_cast<double>(
            std::lower_bound(s.targets.begin(), s.targets.end(), theta_xi) - s.targets.begin());
        s.new_row[static_cast<std::size_t>(i)] =
            theta_xi + alpha * (table.tau[static_cast<std::size_t>(i)] - count / m);
    }
    for (int i = 0; i < m; ++i) table.at(t.x, i) = s.new_row[static_cast<std::size_t>(i)];
}

void pqtd_update(QuantileTable& table, const Transition& t, double alpha, double gamma) {
    check_state(table, t);
    const int m = table.m;
    double next_mean = 0.0;
    for (int j = 0; j < m; ++j) next_mean += table.at(t.x_next, j);
    next_mean /= m;
    const double target = t.r + gamma * next_mean;

    std::vector<double> new_row(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double theta_xi = table.at(t.x, i);
        const double indicator = (target < theta_xi) ? 1.0 : 0.0;
        new_row[static_cast<std::size_t>(i)] =
            theta_xi + alpha * (table.tau[static_cast<std::size_t>(i)] - indicator);
    }
    for (int i = 0; i < m; ++i) table.at(t.x, i) = new_row[static_cast<std::size_t>(i)];
}

ValueTable value_from_quantiles(const QuantileTable& table) {
    ValueTable out(table.n_states);
    for (int x = 0; x < table.n_states; ++x) {
        const std::span<const double> row{table.row(x), static_cast<std::size_t>(table.m)};
        out.v[static_cast<std::size_t>(x)] = compensated_sum(row) / table.m;
    }
    return out;
}

UpdateDiagnostics qtd_expected_update(const Mrp& mrp, const QuantileTable& table, int x, int i,
                                      std::uint64_t noise_seed, int n_samples) {
    const int m = table.m;
    const double theta_xi = table.at(x, i);
    const double tau_i = table.tau[static_cast<std::size_t>(i)];
    const double gamma = mrp.gamma();

    double below_prob = 0.0;
    for (int y = 0; y < mrp.n_states(); ++y) {
        const double pxy = mrp.p(x, y);
        if (pxy == 0.0) continue;
        double inner = 0.0;
        for (int j = 0; j < m; ++j) {
            inner += cdf_left(mrp.reward(x), theta_xi - gamma * table.at(y, j));
        }
        below_prob += pxy * inner / m;
    }

    UpdateDiagnostics out;
    out.expected_update = tau_i - below_prob;

    RngStream rng = substream(noise_seed, {0x6e6f697365ull, static_cast<std::uint64_t>(x),
                                           static_cast<std::uint64_t>(i)});
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int k = 0; k < n_samples; ++k) {
        const Transition t = step(mrp, x, rng);
        int count = 0;
        for (int j = 0; j < m; ++j) {
            if (t.r + gamma * table.at(t.x_next, j) < theta_xi) ++count;
        }
        const double frac = static_cast<double>(count) / m;
        sum += frac;
        sum_sq += frac * frac;
    }
    const double mean_frac = sum / n_samples;
    out.noise_variance = std::max(0.0, sum_sq / n_samples - mean_frac * mean_frac);
    return out;
}

UpdateDiagnostics pqtd_expected_update(const Mrp& mrp, const QuantileTable& table, int x, int i,
                                       std::uint64_t noise_seed, int n_samples) {
    const double theta_xi = table.at(x, i);
    const double tau_i = table.tau[static_cast<std::size_t>(i)];
    const double gamma = mrp.gamma();
    const ValueTable v = value_from_quantiles(table);

    double below_prob = 0.0;
    for (int y = 0; y < mrp.n_states(); ++y) {
        const double pxy = mrp.p(x, y);
        if (pxy == 0.0) continue;
        below_prob += pxy * cdf_left(mrp.reward(x),
                                     theta_xi - gamma * v.v[static_cast<std::size_t>(y)]);
    }

    UpdateDiagnostics out;
    out.expected_update = tau_i - below_prob;

    RngStream rng = substream(noise_seed, {0x6e6f697365ull, static_cast<std::uint64_t>(x),
                                           static_cast<std::uint64_t>(i)});
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int k = 0; k < n_samples; ++k) {
        const Transition t = step(mrp, x, rng);
        const double target = t.r + gamma * v.v[static_cast<std::size_t>(t.x_next)];
        const double ind = (target < theta_xi) ? 1.0 : 0.0;
        sum += ind;
        sum_sq += ind * ind;
    }
    const double mean_ind = sum / n_samples;
    out.noise_variance = std::max(0.0, sum_sq / n_samples - mean_ind * mean_ind);
    return out;
}

}  // namespace qtdlab
