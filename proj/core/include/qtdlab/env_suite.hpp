#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtdlab/mrp.hpp"

namespace qtdlab {

enum class TransitionKind { Dirichlet, Garnet, Cycle };

const char* transition_kind_name(TransitionKind k);
TransitionKind transition_kind_from_name(const std::string& name);

/// Seeded generator spec for one benchmark environment.
struct EnvSpec {
    TransitionKind transition_kind = TransitionKind::Dirichlet;
    RewardKind reward_kind = RewardKind::Gaussian;
    int n_states = 20;
    int branching = 6;         // Garnet only
    double reward_scale = 1.0; // Gaussian sigma
    double gamma = 0.9;
    std::uint64_t seed = 0;
};

/// Canonical identifier, e.g. "dirichlet-gaussian" (or with a "-s<sigma>"
/// suffix when reward_scale != 1).
std::string env_id(const EnvSpec& spec);

/// Realizes the spec into an Mrp. Deterministic in the seed. Transition
/// structure and reward means come from independent sub-streams, so
/// changing the reward family (or scale) preserves both.
///
///   Dirichlet: every row drawn from Dirichlet(1,...,1)
///   Garnet:    `branching` distinct successors per row, mass 1/branching
///   Cycle:     deterministic permutation x -> (x+1) mod n
///
/// Reward means are i.i.d. N(0,1); distributions of reward_kind are
/// centered at those means. Throws on branching > n_states.
Mrp make_env(const EnvSpec& spec);

/// Spec with the benchmark defaults: 20 states (10 for Cycle), branching 6,
/// gamma 0.9.
EnvSpec suite_spec(TransitionKind t, RewardKind r, std::uint64_t seed);

/// The full benchmark grid: 3 transition structures x 4 reward families.
std::vector<EnvSpec> suite_environments(std::uint64_t seed);

/// Small 3-state MRP whose one-step target at the junction state is strongly
/// right-skewed: from state 0 the chain branches to a jackpot state (reward
/// skew/tail_prob, probability tail_prob) or a dud state (reward 0), both of
/// which return to state 0. The median of the return distribution at the
/// junction is far below its mean, so low-m quantile value estimates carry a
/// large fixed-point bias. skew = 0 degenerates to an all-zero-reward chain.
Mrp make_skewed_pair(double skew, double gamma, double tail_prob = 0.1);

}  // namespace qtdlab
