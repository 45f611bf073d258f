#include "qtdlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qtdlab/parallel.hpp"
#include "qtdlab/summation.hpp"

namespace qtdlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double weighted_mse(const std::vector<double>& est, const std::vector<double>& truth,
                    const std::vector<double>* weights) {
    double acc = 0.0;
    for (std::size_t x = 0; x < est.size(); ++x) {
        const double d = est[x] - truth[x];
        const double w = weights ? (*weights)[x] : 1.0 / static_cast<double>(est.size());
        acc += w * d * d;
    }
    return std::isfinite(acc) ? acc : kInf;
}
}  // namespace

const char* agent_name(AgentKind a) {
    switch (a) {
        case AgentKind::Td: return "td";
        case AgentKind::Qtd: return "qtd";
        case AgentKind::Pqtd: return "pqtd";
    }
    return "?";
}

AgentKind agent_from_name(const std::string& name) {
    if (name == "td") return AgentKind::Td;
    if (name == "qtd") return AgentKind::Qtd;
    if (name == "pqtd") return AgentKind::Pqtd;
    throw std::invalid_argument("unknown agent: " + name);
}

std::vector<double> log_spaced_grid(double lo, double hi, int points) {
    if (points < 2 || !(lo > 0.0) || !(hi > lo)) {
        throw std::invalid_argument("log_spaced_grid: need points >= 2 and 0 < lo < hi");
    }
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (int i = 0; i < points; ++i) {
        grid[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (points - 1));
    }
    grid.front() = lo;  // endpoints exact, not just up to exp/log rounding
    grid.back() = hi;
    return grid;
}

std::vector<double> default_lr_grid(AgentKind agent) {
    return agent == AgentKind::Td ? log_spaced_grid(5e-4, 1.0, 40)
                                  : log_spaced_grid(5e-3, 10.0, 40);
}

std::vector<std::pair<int, double>> run_single(const Mrp& mrp, const ValueTable& v_true,
                                               AgentKind agent, int m, double lr, int n_updates,
                                               const std::vector<int>& checkpoints,
                                               std::uint64_t seed, Interaction interaction,
                                               const std::vector<double>* weights) {
    const int n = mrp.n_states();
    RngStream rng(seed);

    ValueTable value(n);
    QuantileTable table;
    QtdScratch scratch;
    if (agent != AgentKind::Td) table = QuantileTable(n, m);

    std::vector<int> cps = checkpoints;
    std::sort(cps.begin(), cps.end());

    auto mse_now = [&]() -> double {
        if (agent == AgentKind::Td) return weighted_mse(value.v, v_true.v, weights);
        return weighted_mse(value_from_quantiles(table).v, v_true.v, weights);
    };

    std::vector<std::pair<int, double>> out;
    out.reserve(cps.size());
    std::size_t next_cp = 0;
    while (next_cp < cps.size() && cps[next_cp] <= 0) {
        out.emplace_back(cps[next_cp], mse_now());
        ++next_cp;
    }

    int x = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    for (int k = 1; k <= n_updates; ++k) {
        if (interaction == Interaction::Iid && k > 1) {
            x = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        }
        const Transition t = step(mrp, x, rng);
        switch (agent) {
            case AgentKind::Td: td_update(value, t, lr, mrp.gamma()); break;
            case AgentKind::Qtd: qtd_update_fast(table, t, lr, mrp.gamma(), &scratch); break;
            case AgentKind::Pqtd: pqtd_update(table, t, lr, mrp.gamma()); break;
        }
        x = t.x_next;
        while (next_cp < cps.size() && cps[next_cp] == k) {
            out.emplace_back(k, mse_now());
            ++next_cp;
        }
    }
    if (next_cp < cps.size()) {
        throw std::invalid_argument("run_single: checkpoint beyond n_updates");
    }
    return out;
}

SweepSummary sweep(const ExperimentConfig& config, int jobs) {
    return sweep(make_env(config.env), config, jobs);
}

SweepSummary sweep(const Mrp& mrp, const ExperimentConfig& config, int jobs) {
    const ValueTable v_true = true_value(mrp);
    const std::vector<double> grid =
        config.lr_grid.empty() ? default_lr_grid(config.agent) : config.lr_grid;
    if (grid.empty()) throw std::invalid_argument("sweep: empty learning-rate grid");

    std::vector<int> cps = config.checkpoints;
    std::sort(cps.begin(), cps.end());
    for (int c : cps) {
        if (c < 0 || c > config.n_updates) {
            throw std::invalid_argument("sweep: checkpoint outside [0, n_updates]");
        }
    }

    std::vector<double> stationary;
    const std::vector<double>* weights = nullptr;
    if (config.weighting == StateWeighting::Stationary) {
        stationary = stationary_distribution(mrp);
        weights = &stationary;
    }

    const std::size_t n_lr = grid.size();
    const std::size_t n_cp = cps.size();
    const auto n_runs = static_cast<std::size_t>(config.n_runs);

    // mse[(lr, run)] laid out run-major per lr; filled by value, reduced in
    // fixed index order afterwards so scheduling cannot affect the result.
    std::vector<double> mse(n_lr * n_runs * n_cp);
    parallel_for(jobs, n_lr * n_runs, [&](std::size_t cell) {
        const std::size_t lr_i = cell / n_runs;
        const std::size_t run_i = cell % n_runs;
        const std::uint64_t seed = mix_seed({config.base_seed, lr_i, run_i});
        const auto curve = run_single(mrp, v_true, config.agent, config.m, grid[lr_i],
                                      config.n_updates, cps, seed, config.interaction, weights);
        for (std::size_t c = 0; c < n_cp; ++c) {
            mse[(lr_i * n_runs + run_i) * n_cp + c] = curve[c].second;
        }
    });

    SweepSummary summary;
    summary.env_id = mrp.id();
    summary.agent = config.agent;
    summary.m = config.agent == AgentKind::Td ? 0 : config.m;
    summary.n_runs = config.n_runs;
    summary.lr_grid = grid;
    summary.checkpoints = cps;
    summary.cells.resize(n_lr * n_cp);

    std::vector<double> column(n_runs);
    std::vector<double> sq(n_runs);
    for (std::size_t lr_i = 0; lr_i < n_lr; ++lr_i) {
        for (std::size_t c = 0; c < n_cp; ++c) {
            int diverged = 0;
            for (std::size_t r = 0; r < n_runs; ++r) {
                column[r] = mse[(lr_i * n_runs + r) * n_cp + c];
                if (!std::isfinite(column[r])) ++diverged;
            }
            SweepCell& cell = summary.cell(lr_i, c);
            cell.n_diverged = diverged;
            if (diverged > 0) {
                cell.mse_mean = kInf;
                cell.mse_stderr = kInf;
                continue;
            }
            const double mean = pairwise_sum(column) / static_cast<double>(n_runs);
            cell.mse_mean = mean;
            if (n_runs <= 1) {
                cell.mse_stderr = 0.0;
            } else {
                for (std::size_t r = 0; r < n_runs; ++r) {
                    const double d = column[r] - mean;
                    sq[r] = d * d;
                }
                const double var =
                    pairwise_sum(sq) / static_cast<double>(n_runs - 1);
                cell.mse_stderr = std::sqrt(var / static_cast<double>(n_runs));
            }
        }
    }
    return summary;
}

Optimum optimal_mse(const SweepSummary& summary, int checkpoint) {
    const auto it = std::find(summary.checkpoints.begin(), summary.checkpoints.end(), checkpoint);
    if (it == summary.checkpoints.end()) {
        throw std::invalid_argument("optimal_mse: checkpoint not recorded");
    }
    const auto c = static_cast<std::size_t>(it - summary.checkpoints.begin());
    std::optional<Optimum> best;
    for (std::size_t lr_i = 0; lr_i < summary.lr_grid.size(); ++lr_i) {
        const SweepCell& cell = summary.cell(lr_i, c);
        if (!std::isfinite(cell.mse_mean)) continue;
        if (!best || cell.mse_mean < best->mse_mean) {
            best = Optimum{summary.lr_grid[lr_i], cell.mse_mean, cell.mse_stderr, lr_i};
        }
    }
    if (!best) throw std::runtime_error("optimal_mse: every learning rate diverged");
    return *best;
}

ImprovementCurve improvement_curve(const SweepSummary& a, const SweepSummary& b) {
    if (a.env_id != b.env_id) {
        throw std::invalid_argument("improvement_curve: environments differ");
    }
    if (a.checkpoints != b.checkpoints) {
        throw std::invalid_argument("improvement_curve: checkpoint grids differ");
    }
    ImprovementCurve curve;
    curve.env_id = a.env_id;
    for (int cp : a.checkpoints) {
        const Optimum oa = optimal_mse(a, cp);
        const Optimum ob = optimal_mse(b, cp);
        curve.points.push_back({cp, oa.mse_mean / ob.mse_mean, oa.lr, ob.lr, oa.mse_mean,
                                ob.mse_mean, oa.mse_stderr, ob.mse_stderr});
    }
    return curve;
}

ImprovementCurve improvement_curve(const ExperimentConfig& cfg_a, const ExperimentConfig& cfg_b,
                                   int jobs) {
    return improvement_curve(sweep(cfg_a, jobs), sweep(cfg_b, jobs));
}

std::vector<std::pair<double, ImprovementCurve>> reward_scale_sweep(
    const ExperimentConfig& prototype, const std::vector<double>& sigmas, int jobs) {
    if (prototype.env.reward_kind != RewardKind::Gaussian) {
        throw std::invalid_argument("reward_scale_sweep: base environment must use Gaussian rewards");
    }
    std::vector<std::pair<double, ImprovementCurve>> out;
    for (double sigma : sigmas) {
        if (!(sigma > 0.0)) throw std::invalid_argument("reward_scale_sweep: sigma must be positive");
        ExperimentConfig cfg_a = prototype;
        cfg_a.env.reward_scale = sigma;
        ExperimentConfig cfg_b = cfg_a;
        cfg_b.agent = AgentKind::Td;
        cfg_b.lr_grid.clear();
        out.emplace_back(sigma, improvement_curve(cfg_a, cfg_b, jobs));
    }
    return out;
}

}  // namespace qtdlab
