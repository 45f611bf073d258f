#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtdlab/agents.hpp"
#include "qtdlab/env_suite.hpp"
#include "qtdlab/mrp.hpp"

namespace qtdlab {

enum class AgentKind { Td, Qtd, Pqtd };

const char* agent_name(AgentKind a);
AgentKind agent_from_name(const std::string& name);

/// 40 learning rates equally spaced in log-space, endpoints included:
/// [5e-4, 1] for TD, [5e-3, 10] for the quantile family.
std::vector<double> default_lr_grid(AgentKind agent);
std::vector<double> log_spaced_grid(double lo, double hi, int points);

/// How states are visited during online training. Chain follows a single
/// trajectory from a uniform random initial state; Iid draws a fresh
/// uniform state before every update (sensitivity option).
enum class Interaction { Chain, Iid };

/// How per-state squared errors are averaged into the MSE.
enum class StateWeighting { Uniform, Stationary };

struct ExperimentConfig {
    EnvSpec env;
    AgentKind agent = AgentKind::Qtd;
    int m = 128;  // ignored for TD
    std::vector<double> lr_grid;  // empty selects default_lr_grid(agent)
    int n_updates = 1000;
    std::vector<int> checkpoints = {10, 30, 100, 300, 1000};
    int n_runs = 200;
    std::uint64_t base_seed = 0;
    Interaction interaction = Interaction::Chain;
    StateWeighting weighting = StateWeighting::Uniform;
};

/// Aggregated statistics of one (lr, checkpoint) cell across runs.
struct SweepCell {
    double mse_mean = 0.0;
    double mse_stderr = 0.0;  // empirical standard error; 0 when n_runs = 1
    int n_diverged = 0;       // runs whose table went non-finite
};

struct SweepSummary {
    std::string env_id;
    AgentKind agent = AgentKind::Td;
    int m = 0;
    int n_runs = 0;
    std::vector<double> lr_grid;
    std::vector<int> checkpoints;
    std::vector<SweepCell> cells;  // row-major [lr][checkpoint]

    const SweepCell& cell(std::size_t lr_index, std::size_t cp_index) const {
        return cells[lr_index * checkpoints.size() + cp_index];
    }
    SweepCell& cell(std::size_t lr_index, std::size_t cp_index) {
        return cells[lr_index * checkpoints.size() + cp_index];
    }
};

/// One online training run with a constant learning rate: per step, sample a
/// transition at the current state, apply the agent's update there, then
/// move on. Records MSE against v_true at each checkpoint (checkpoint c =
/// after exactly c updates; 0 = before training). Non-finite estimates give
/// MSE = +inf. Deterministic in the seed.
std::vector<std::pair<int, double>> run_single(const Mrp& mrp, const ValueTable& v_true,
                                               AgentKind agent, int m, double lr, int n_updates,
                                               const std::vector<int>& checkpoints,
                                               std::uint64_t seed,
                                               Interaction interaction = Interaction::Chain,
                                               const std::vector<double>* weights = nullptr);

/// Full learning-rate sweep: n_runs independent runs per grid point with
/// seed = mix(base_seed, lr_index, run_index), aggregated into mean and
/// standard error per checkpoint. The result is a pure function of the
/// config; jobs only controls scheduling.
SweepSummary sweep(const ExperimentConfig& config, int jobs = 1);

/// Same, on an already-realized environment (config.env is ignored); used
/// for environments outside the seeded generator family.
SweepSummary sweep(const Mrp& mrp, const ExperimentConfig& config, int jobs = 1);

struct Optimum {
    double lr = 0.0;
    double mse_mean = 0.0;
    double mse_stderr = 0.0;
    std::size_t lr_index = 0;
};

/// Argmin of mse_mean over the grid at a checkpoint; ties break toward the
/// smaller learning rate. Throws if every grid point diverged or the
/// checkpoint was not recorded.
Optimum optimal_mse(const SweepSummary& summary, int checkpoint);

struct ImprovementPoint {
    int checkpoint = 0;
    double ratio = 0.0;  // optimal MSE of a divided by optimal MSE of b
    double optimal_lr_a = 0.0;
    double optimal_lr_b = 0.0;
    double mse_a = 0.0;
    double mse_b = 0.0;
    double stderr_a = 0.0;
    double stderr_b = 0.0;
};

struct ImprovementCurve {
    std::string env_id;
    std::vector<ImprovementPoint> points;
};

/// Ratio of optimal MSEs per checkpoint. The two summaries must share the
/// environment and checkpoint grid.
ImprovementCurve improvement_curve(const SweepSummary& a, const SweepSummary& b);

/// Runs both sweeps then combines them.
ImprovementCurve improvement_curve(const ExperimentConfig& cfg_a, const ExperimentConfig& cfg_b,
                                   int jobs = 1);

/// Matched-structure reward-scale study: for each sigma, the improvement
/// curve of the prototype agent over TD on an environment differing from
/// `base` only in reward_scale. base must use Gaussian rewards.
std::vector<std::pair<double, ImprovementCurve>> reward_scale_sweep(
    const ExperimentConfig& prototype, const std::vector<double>& sigmas, int jobs = 1);

}  // namespace qtdlab
