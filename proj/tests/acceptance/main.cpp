// Acceptance suite: runs every study-level criterion at desk scale
// (200 runs per sweep cell, protocol learning-rate grids) and prints one
// PASS/FAIL line per criterion. Exit code = number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qtdlab/agents.hpp"
#include "qtdlab/env_suite.hpp"
#include "qtdlab/harness.hpp"
#include "qtdlab/normal.hpp"
#include "qtdlab/parallel.hpp"
#include "qtdlab/quantile_dp.hpp"

using namespace qtdlab;

namespace {

constexpr std::uint64_t kSuiteSeed = 2026;
constexpr int kRuns = 200;
constexpr int kUpdates = 1000;

int g_jobs = 1;

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

struct CriterionResult {
    bool pass = false;
    std::string detail;
};

// ---------------------------------------------------------------------------
// Shared fixed-point results, computed once and reused across criteria.

class DpCache {
  public:
    void ensure(const std::vector<std::pair<EnvSpec, int>>& wanted) {
        std::vector<std::pair<EnvSpec, int>> missing;
        for (const auto& task : wanted) {
            const std::string k = key(task.first, task.second);
            if (!results_.count(k) && !pending(missing, k)) missing.push_back(task);
        }
        std::vector<DpResult> slots(missing.size());
        parallel_for(g_jobs, missing.size(), [&](std::size_t i) {
            slots[i] = qdp_fixed_point(make_env(missing[i].first), missing[i].second);
        });
        for (std::size_t i = 0; i < missing.size(); ++i) {
            results_.emplace(key(missing[i].first, missing[i].second), std::move(slots[i]));
        }
    }

    const DpResult& get(const EnvSpec& spec, int m) const { return results_.at(key(spec, m)); }

  private:
    static std::string key(const EnvSpec& spec, int m) {
        return env_id(spec) + ":" + std::to_string(m);
    }
    bool pending(const std::vector<std::pair<EnvSpec, int>>& missing, const std::string& k) const {
        for (const auto& task : missing) {
            if (key(task.first, task.second) == k) return true;
        }
        return false;
    }
    std::map<std::string, DpResult> results_;
};

DpCache g_dp;

const std::vector<int> kMGrid = {1, 2, 4, 8, 16, 32, 64, 128};

std::vector<EnvSpec> envs_with_rewards(RewardKind r) {
    return {suite_spec(TransitionKind::Dirichlet, r, kSuiteSeed),
            suite_spec(TransitionKind::Garnet, r, kSuiteSeed),
            suite_spec(TransitionKind::Cycle, r, kSuiteSeed)};
}

// ---------------------------------------------------------------------------
// Sweep helpers.

ExperimentConfig sweep_config(const EnvSpec& env, AgentKind agent, int m) {
    ExperimentConfig cfg;
    cfg.env = env;
    cfg.agent = agent;
    cfg.m = m;
    cfg.n_updates = kUpdates;
    cfg.checkpoints = {kUpdates};
    cfg.n_runs = kRuns;
    cfg.base_seed =
        mix_seed({kSuiteSeed, static_cast<std::uint64_t>(agent), static_cast<std::uint64_t>(m)});
    return cfg;
}

Optimum optimum_at_end(const SweepSummary& s) { return optimal_mse(s, kUpdates); }

// ---------------------------------------------------------------------------
// Criteria.

CriterionResult criterion_support_bound() {
    std::vector<std::pair<EnvSpec, int>> tasks;
    for (const EnvSpec& env : envs_with_rewards(RewardKind::PointMass)) {
        for (int m : kMGrid) tasks.emplace_back(env, m);
    }
    g_dp.ensure(tasks);
    double worst_margin = -1e300;
    std::string worst;
    for (const auto& [env, m] : tasks) {
        const DpResult& r = g_dp.get(env, m);
        const Mrp mrp = make_env(env);
        const double bound = bound_prop41(mrp, m);
        const double margin = r.value_error_sup - bound;  // must stay <= 1e-8
        if (!r.converged) {
            return {false, fmt("%s m=%d did not converge", env_id(env).c_str(), m)};
        }
        if (margin > worst_margin) {
            worst_margin = margin;
            worst = fmt("%s m=%d err=%.3e bound=%.3e", env_id(env).c_str(), m, r.value_error_sup,
                        bound);
        }
    }
    return {worst_margin <= 1e-8, fmt("worst margin %.2e (%s)", worst_margin, worst.c_str())};
}

CriterionResult criterion_subgaussian_bound() {
    std::vector<std::pair<EnvSpec, int>> tasks;
    for (const EnvSpec& env : envs_with_rewards(RewardKind::Gaussian)) {
        for (int m : kMGrid) tasks.emplace_back(env, m);
    }
    g_dp.ensure(tasks);
    double worst_margin = -1e300;
    std::string worst;
    for (const auto& [env, m] : tasks) {
        const DpResult& r = g_dp.get(env, m);
        const Mrp mrp = make_env(env);
        const double bound = bound_prop42(mrp, m);
        const double margin = r.value_error_sup - bound;
        if (!r.converged) {
            return {false, fmt("%s m=%d did not converge", env_id(env).c_str(), m)};
        }
        if (margin > worst_margin) {
            worst_margin = margin;
            worst = fmt("%s m=%d err=%.3e bound=%.3e", env_id(env).c_str(), m, r.value_error_sup,
                        bound);
        }
    }
    return {worst_margin <= 1e-8, fmt("worst margin %.2e (%s)", worst_margin, worst.c_str())};
}

CriterionResult criterion_vanishing_bias() {
    std::vector<std::pair<EnvSpec, int>> tasks;
    for (const EnvSpec& env : suite_environments(kSuiteSeed)) {
        tasks.emplace_back(env, 1);
        tasks.emplace_back(env, 128);
    }
    g_dp.ensure(tasks);
    bool pass = true;
    std::string detail;
    for (const EnvSpec& env : suite_environments(kSuiteSeed)) {
        const double e1 = g_dp.get(env, 1).value_error_sup;
        const double e128 = g_dp.get(env, 128).value_error_sup;
        const bool ok = (e128 <= 0.1 * e1) || (e1 <= 1e-6 && e128 <= 1e-6);
        if (!ok) {
            pass = false;
            detail += fmt("[%s e1=%.2e e128=%.2e] ", env_id(env).c_str(), e1, e128);
        }
    }
    if (pass) {
        const EnvSpec ref =
            suite_spec(TransitionKind::Dirichlet, RewardKind::StudentT2, kSuiteSeed);
        detail = fmt("all 12 envs ok; e.g. %s: %.2e -> %.2e", env_id(ref).c_str(),
                     g_dp.get(ref, 1).value_error_sup, g_dp.get(ref, 128).value_error_sup);
    }
    return {pass, detail};
}

CriterionResult criterion_symmetric_zero_bias() {
    const EnvSpec env = suite_spec(TransitionKind::Cycle, RewardKind::Gaussian, kSuiteSeed);
    const Mrp mrp = make_env(env);
    bool pass = true;
    std::string detail;
    double worst = 0.0;
    for (int m : {1, 16, 128}) {
        g_dp.ensure({{env, m}});
        const DpResult& q = g_dp.get(env, m);
        const DpResult p = pqtd_fixed_point(mrp, m);
        worst = std::max({worst, q.value_error_sup, p.value_error_sup});
        if (!(q.converged && p.converged && q.value_error_sup < 1e-6 &&
              p.value_error_sup < 1e-6)) {
            pass = false;
            detail += fmt("[m=%d qtd=%.2e pqtd=%.2e] ", m, q.value_error_sup, p.value_error_sup);
        }
    }
    if (pass) detail = fmt("worst value error %.2e across m in {1,16,128}", worst);
    return {pass, detail};
}

CriterionResult criterion_stochastic_advantage() {
    bool pass = true;
    std::string detail;
    for (TransitionKind t : {TransitionKind::Dirichlet, TransitionKind::Garnet}) {
        for (RewardKind r :
             {RewardKind::Gaussian, RewardKind::Exponential, RewardKind::StudentT2}) {
            const EnvSpec env = suite_spec(t, r, kSuiteSeed);
            const Optimum q = optimum_at_end(sweep(sweep_config(env, AgentKind::Qtd, 128), g_jobs));
            const Optimum td = optimum_at_end(sweep(sweep_config(env, AgentKind::Td, 0), g_jobs));
            const double gap = td.mse_mean - q.mse_mean;
            const double needed = 2.0 * (td.mse_stderr + q.mse_stderr);
            const bool ok = q.mse_mean < td.mse_mean && gap > needed;
            if (!ok) pass = false;
            detail += fmt("[%s qtd=%.3g td=%.3g gap=%.2g need>%.2g%s] ", env_id(env).c_str(),
                          q.mse_mean, td.mse_mean, gap, needed, ok ? "" : " FAIL");
        }
    }
    return {pass, detail};
}

CriterionResult criterion_deterministic_disadvantage() {
    const EnvSpec env = suite_spec(TransitionKind::Cycle, RewardKind::PointMass, kSuiteSeed);
    const Optimum td = optimum_at_end(sweep(sweep_config(env, AgentKind::Td, 0), g_jobs));
    const Optimum q = optimum_at_end(sweep(sweep_config(env, AgentKind::Qtd, 128), g_jobs));
    const bool pass = td.mse_mean < 0.01 * q.mse_mean;
    return {pass, fmt("td=%.3e qtd(128)=%.3e ratio=%.2e", td.mse_mean, q.mse_mean,
                      td.mse_mean / q.mse_mean)};
}

CriterionResult criterion_reward_scale_monotonicity() {
    ExperimentConfig proto =
        sweep_config(suite_spec(TransitionKind::Cycle, RewardKind::Gaussian, kSuiteSeed),
                     AgentKind::Qtd, 128);
    const std::vector<double> sigmas = {0.01, 0.1, 0.3, 1.0, 3.0};
    const auto curves = reward_scale_sweep(proto, sigmas, g_jobs);

    std::vector<double> ratio(sigmas.size());
    std::vector<double> se(sigmas.size());
    std::string detail;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const ImprovementPoint& p = curves[i].second.points.back();
        ratio[i] = p.ratio;
        se[i] = p.ratio * std::sqrt((p.stderr_a / p.mse_a) * (p.stderr_a / p.mse_a) +
                                    (p.stderr_b / p.mse_b) * (p.stderr_b / p.mse_b));
        detail += fmt("[s=%g r=%.3g] ", sigmas[i], ratio[i]);
    }
    int violations = 0;
    bool hard_violation = false;
    for (std::size_t i = 0; i + 1 < ratio.size(); ++i) {
        if (ratio[i + 1] > ratio[i]) {
            ++violations;
            if (ratio[i + 1] - ratio[i] > 2.0 * (se[i] + se[i + 1])) hard_violation = true;
        }
    }
    const bool pass = violations <= 1 && !hard_violation;
    detail += fmt("violations=%d%s", violations, hard_violation ? " (beyond 2 se)" : "");
    return {pass, detail};
}

CriterionResult criterion_low_m_degradation() {
    const Mrp mrp = make_skewed_pair(1.0, 0.9);
    ExperimentConfig cfg = sweep_config(EnvSpec{}, AgentKind::Qtd, 1);
    const Optimum m1 = optimum_at_end(sweep(mrp, cfg, g_jobs));
    cfg = sweep_config(EnvSpec{}, AgentKind::Qtd, 64);
    const Optimum m64 = optimum_at_end(sweep(mrp, cfg, g_jobs));
    const bool pass = m1.mse_mean >= 2.0 * m64.mse_mean;
    return {pass, fmt("qtd(1)=%.3g qtd(64)=%.3g factor=%.2f", m1.mse_mean, m64.mse_mean,
                      m1.mse_mean / m64.mse_mean)};
}

CriterionResult criterion_pqtd_noise() {
    const EnvSpec env = suite_spec(TransitionKind::Cycle, RewardKind::Gaussian, kSuiteSeed);
    const Mrp mrp = make_env(env);
    const int m = 128;
    g_dp.ensure({{env, m}});
    const QuantileTable& theta_q = g_dp.get(env, m).theta_fixed;
    const QuantileTable theta_p = pqtd_fixed_point(mrp, m).theta_fixed;

    const int n = mrp.n_states();
    std::vector<double> qtd_var(static_cast<std::size_t>(n), 0.0);
    std::vector<double> pqtd_var(static_cast<std::size_t>(n), 0.0);
    parallel_for(g_jobs, static_cast<std::size_t>(n), [&](std::size_t x) {
        double q_acc = 0.0;
        double p_acc = 0.0;
        for (int i = 0; i < m; ++i) {
            q_acc += qtd_expected_update(mrp, theta_q, static_cast<int>(x), i,
                                         mix_seed({kSuiteSeed, 9, x}), 10000)
                         .noise_variance;
            p_acc += pqtd_expected_update(mrp, theta_p, static_cast<int>(x), i,
                                          mix_seed({kSuiteSeed, 10, x}), 10000)
                         .noise_variance;
        }
        qtd_var[x] = q_acc / m;
        pqtd_var[x] = p_acc / m;
    });
    double q_mean = 0.0;
    double p_mean = 0.0;
    for (int x = 0; x < n; ++x) {
        q_mean += qtd_var[static_cast<std::size_t>(x)] / n;
        p_mean += pqtd_var[static_cast<std::size_t>(x)] / n;
    }
    const double factor = p_mean / q_mean;
    return {factor >= 2.0, fmt("pqtd noise var %.4f vs qtd %.4f, factor %.2f (m=128)", p_mean,
                               q_mean, factor)};
}

CriterionResult criterion_fast_update_equivalence() {
    RngStream rng(777);
    QtdScratch scratch;
    for (int k = 0; k < 10'000; ++k) {
        const int m = 1 + static_cast<int>(rng.below(64));
        const int n = 2 + static_cast<int>(rng.below(3));
        QuantileTable table(n, m);
        for (auto& v : table.theta) v = 10.0 * (rng.uniform() - 0.5);
        const Transition t{static_cast<int>(rng.below(static_cast<std::uint64_t>(n))),
                           rng.normal(),
                           static_cast<int>(rng.below(static_cast<std::uint64_t>(n)))};
        const double alpha = 3.0 * rng.uniform();
        const double gamma = 0.9;
        if (k % 3 == 0) {
            // engineered tie: theta(x,i) equals one bootstrap target exactly
            const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(m)));
            const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(m)));
            table.at(t.x, i) = t.r + gamma * table.at(t.x_next, j);
        }
        QuantileTable naive = table;
        QuantileTable fast = table;
        qtd_update(naive, t, alpha, gamma);
        qtd_update_fast(fast, t, alpha, gamma, &scratch);
        if (naive.theta != fast.theta) {
            return {false, fmt("mismatch at instance %d (m=%d)", k, m)};
        }
    }
    return {true, "10000 randomized instances bitwise-identical (ties included)"};
}

CriterionResult criterion_bounded_updates() {
    RngStream rng(888);
    const auto t2 = RewardModel::student_t2(0.0);
    QtdScratch scratch;
    for (int k = 0; k < 100'000; ++k) {
        const int m = 1 + static_cast<int>(rng.below(16));
        QuantileTable table(2, m);
        for (auto& v : table.theta) v = 2e12 * (rng.uniform() - 0.5);
        const QuantileTable before = table;
        const double alpha = 10.0 * rng.uniform();
        const double gamma = 0.9;
        const Transition t{0, sample(t2, rng), 1};
        const bool qtd = (k % 2 == 0);
        if (qtd) {
            qtd_update_fast(table, t, alpha, gamma, &scratch);
        } else {
            pqtd_update(table, t, alpha, gamma);
        }
        double next_mean = 0.0;
        for (int j = 0; j < m; ++j) next_mean += before.at(1, j);
        next_mean /= m;
        for (int i = 0; i < m; ++i) {
            const double tau = table.tau[static_cast<std::size_t>(i)];
            double inc;
            if (qtd) {
                int count = 0;
                for (int j = 0; j < m; ++j) {
                    if (t.r + gamma * before.at(1, j) < before.at(0, i)) ++count;
                }
                inc = alpha * (tau - static_cast<double>(count) / m);
            } else {
                inc = alpha * (tau - ((t.r + gamma * next_mean < before.at(0, i)) ? 1.0 : 0.0));
            }
            if (!(std::abs(inc) <= alpha) || table.at(0, i) != before.at(0, i) + inc) {
                return {false, fmt("instance %d coordinate %d: |inc|=%.17g alpha=%.17g", k, i,
                                   std::abs(inc), alpha)};
            }
        }
    }
    return {true, "100000 extreme updates, every increment within alpha exactly"};
}

CriterionResult criterion_quadrature_identity() {
    // Part 1: uniform quantiles average to one half, exactly.
    for (int m = 1; m <= 256; ++m) {
        QuantileTable table(1, m);
        for (int i = 0; i < m; ++i) table.at(0, i) = table.tau[static_cast<std::size_t>(i)];
        const double v = value_from_quantiles(table).v[0];
        if (v != 0.5) {
            return {false, fmt("uniform part: m=%d gives %.17g != 0.5", m, v)};
        }
    }
    // Part 2: absolute error of the quantile-averaged standard normal mean,
    // required to be strictly decreasing over the doubling grid.
    std::vector<double> errs;
    std::string seq;
    for (int m = 2; m <= 256; m *= 2) {
        QuantileTable table(1, m);
        for (int i = 0; i < m; ++i) {
            table.at(0, i) = normal_quantile(table.tau[static_cast<std::size_t>(i)]);
        }
        errs.push_back(std::abs(value_from_quantiles(table).v[0]));
        seq += fmt("%.3g ", errs.back());
    }
    bool strictly_decreasing = true;
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        if (!(errs[i + 1] < errs[i])) strictly_decreasing = false;
    }
    if (!strictly_decreasing) {
        return {false,
                fmt("uniform part exact for m in 1..256; gaussian |error| sequence [ %s] is not "
                    "strictly decreasing (symmetric quantiles cancel exactly)",
                    seq.c_str())};
    }
    return {true, fmt("uniform exact; gaussian errors strictly decreasing [ %s]", seq.c_str())};
}

struct Criterion {
    int number;
    const char* name;
    std::function<CriterionResult()> run;
};

}  // namespace

int main(int argc, char** argv) {
    g_jobs = hardware_jobs();
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--jobs") == 0 && i + 1 < argc) {
            g_jobs = std::max(1, std::atoi(argv[++i]));
        } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only.push_back(std::atoi(argv[++i]));
        } else {
            std::fprintf(stderr, "usage: qtdlab_acceptance [--jobs N] [--only K]...\n");
            return 64;
        }
    }

    const std::vector<Criterion> criteria = {
        {1, "bounded-support fixed-point bound (m in 1..128)", criterion_support_bound},
        {2, "sub-gaussian fixed-point bound (m in 1..128)", criterion_subgaussian_bound},
        {3, "vanishing fixed-point bias (m=1 vs m=128, 12 envs)", criterion_vanishing_bias},
        {4, "zero bias on the symmetric cycle (QTD and PQTD)", criterion_symmetric_zero_bias},
        {5, "stochastic-environment advantage of QTD(128)", criterion_stochastic_advantage},
        {6, "deterministic-environment advantage of TD", criterion_deterministic_disadvantage},
        {7, "reward-scale monotonicity of the improvement ratio",
         criterion_reward_scale_monotonicity},
        {8, "low-m degradation on the skewed environment", criterion_low_m_degradation},
        {9, "PQTD update noise exceeds QTD noise at the fixed points", criterion_pqtd_noise},
        {10, "sorted QTD update bitwise-equal to the direct form",
         criterion_fast_update_equivalence},
        {11, "update increments bounded by alpha, exactly", criterion_bounded_updates},
        {12, "midpoint-quadrature identity of the value extraction",
         criterion_quadrature_identity},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.number) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult result;
        try {
            result = c.run();
        } catch (const std::exception& e) {
            result = {false, fmt("exception: %s", e.what())};
        }
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%2d] %s  %-55s (%.1fs)\n     %s\n", c.number, result.pass ? "PASS" : "FAIL",
                    c.name, dt, result.detail.c_str());
        std::fflush(stdout);
        if (!result.pass) ++failures;
    }
    std::printf("acceptance: %d criteria failed\n", failures);
    return failures;
}
