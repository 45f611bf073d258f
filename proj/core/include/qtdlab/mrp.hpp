#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qtdlab/reward_model.hpp"
#include "qtdlab/rng.hpp"
#include "qtdlab/tables.hpp"

namespace qtdlab {

/// One observed environment step (x, r, x').
struct Transition {
    int x = 0;
    double r = 0.0;
    int x_next = 0;
};

/// Finite-state Markov reward process: a row-stochastic transition matrix,
/// one reward distribution per departing state, and a discount gamma < 1.
/// Immutable after construction and shareable across parallel runs.
class Mrp {
  public:
    /// Validates on construction: rows sum to 1 within 1e-12, entries >= 0,
    /// gamma in [0, 1). Throws std::invalid_argument otherwise.
    Mrp(int n_states, std::vector<double> transition_row_major, std::vector<RewardModel> rewards,
        double gamma, std::string id = "");

    int n_states() const { return n_states_; }
    double gamma() const { return gamma_; }
    const std::string& id() const { return id_; }

    double p(int x, int y) const {
        return transition_[static_cast<std::size_t>(x) * static_cast<std::size_t>(n_states_) +
                           static_cast<std::size_t>(y)];
    }
    std::span<const double> row(int x) const {
        return {transition_.data() + static_cast<std::size_t>(x) * static_cast<std::size_t>(n_states_),
                static_cast<std::size_t>(n_states_)};
    }
    const std::vector<double>& transition() const { return transition_; }
    const RewardModel& reward(int x) const { return rewards_[static_cast<std::size_t>(x)]; }
    const std::vector<RewardModel>& rewards() const { return rewards_; }

  private:
    int n_states_;
    std::vector<double> transition_;
    std::vector<RewardModel> rewards_;
    double gamma_;
    std::string id_;
};

/// Samples one transition from state x: the reward from rewards[x], the next
/// state from transition row x, independently.
Transition step(const Mrp& mrp, int x, RngStream& rng);

/// Exact value function: solves (I - gamma P) V = rbar by dense LU with
/// partial pivoting. The Bellman residual is below 1e-9 for the sizes used
/// here (n up to a few hundred).
ValueTable true_value(const Mrp& mrp);

/// Sup-norm Bellman residual ||V - (rbar + gamma P V)||_inf.
double bellman_residual(const Mrp& mrp, const ValueTable& value);

/// Tight bounds on the union of the per-state reward supports; +/-infinity
/// for unbounded families.
std::pair<double, double> reward_support_bounds(const Mrp& mrp);

/// Range of the per-state reward means (used by the sub-Gaussian bound).
std::pair<double, double> reward_mean_bounds(const Mrp& mrp);

/// Stationary distribution of the transition chain (power iteration).
/// Used by the optional stationary MSE weighting.
std::vector<double> stationary_distribution(const Mrp& mrp);

}  // namespace qtdlab
