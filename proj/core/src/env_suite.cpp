#include "qtdlab/env_suite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qtdlab {

namespace {
// Purpose tags for sub-stream derivation; fixed forever for reproducibility.
constexpr std::uint64_t kTagTransition = 0x7472616e73ull;  // "trans"
constexpr std::uint64_t kTagMeans = 0x6d65616e73ull;       // "means"

RewardModel make_reward(RewardKind kind, double mean, double scale) {
    switch (kind) {
        case RewardKind::PointMass: return RewardModel::point_mass(mean);
        case RewardKind::Gaussian: return RewardModel::gaussian(mean, scale);
        case RewardKind::Exponential: return RewardModel::exponential(mean);
        case RewardKind::StudentT2: return RewardModel::student_t2(mean);
    }
    return RewardModel::point_mass(mean);
}
}  // namespace

const char* transition_kind_name(TransitionKind k) {
    switch (k) {
        case TransitionKind::Dirichlet: return "dirichlet";
        case TransitionKind::Garnet: return "garnet";
        case TransitionKind::Cycle: return "cycle";
    }
    return "?";
}

TransitionKind transition_kind_from_name(const std::string& name) {
    if (name == "dirichlet") return TransitionKind::Dirichlet;
    if (name == "garnet") return TransitionKind::Garnet;
    if (name == "cycle") return TransitionKind::Cycle;
    throw std::invalid_argument("unknown transition kind: " + name);
}

std::string env_id(const EnvSpec& spec) {
    std::string id = std::string(transition_kind_name(spec.transition_kind)) + "-" +
                     kind_name(spec.reward_kind);
    if (spec.reward_kind == RewardKind::Gaussian && spec.reward_scale != 1.0) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "-s%g", spec.reward_scale);
        id += buf;
    }
    return id;
}

Mrp make_env(const EnvSpec& spec) {
    const int n = spec.n_states;
    if (n <= 0) throw std::invalid_argument("make_env: n_states must be positive");
    if (spec.transition_kind == TransitionKind::Garnet &&
        (spec.branching <= 0 || spec.branching > n)) {
        throw std::invalid_argument("make_env: branching must lie in [1, n_states]");
    }

    std::vector<double> transition(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    auto at = [&](int x, int y) -> double& {
        return transition[static_cast<std::size_t>(x) * static_cast<std::size_t>(n) +
                          static_cast<std::size_t>(y)];
    };

    RngStream trans_rng = substream(spec.seed, {kTagTransition});
    switch (spec.transition_kind) {
        case TransitionKind::Dirichlet:
            for (int x = 0; x < n; ++x) {
                // Dirichlet(1,...,1) row: normalized i.i.d. Exponential(1).
                double sum = 0.0;
                for (int y = 0; y < n; ++y) {
                    const double g = -std::log(trans_rng.uniform());
                    at(x, y) = g;
                    sum += g;
                }
                for (int y = 0; y < n; ++y) at(x, y) /= sum;
            }
            break;
        case TransitionKind::Garnet: {
            std::vector<int> idx(static_cast<std::size_t>(n));
            for (int x = 0; x < n; ++x) {
                std::iota(idx.begin(), idx.end(), 0);
                // Partial Fisher-Yates: first `branching` entries are a
                // uniform sample without replacement.
                for (int k = 0; k < spec.branching; ++k) {
                    const auto j =
                        k + static_cast<int>(trans_rng.below(static_cast<std::uint64_t>(n - k)));
                    std::swap(idx[static_cast<std::size_t>(k)], idx[static_cast<std::size_t>(j)]);
                }
                for (int k = 0; k < spec.branching; ++k) {
                    at(x, idx[static_cast<std::size_t>(k)]) = 1.0 / spec.branching;
                }
            }
            break;
        }
        case TransitionKind::Cycle:
            for (int x = 0; x < n; ++x) at(x, (x + 1) % n) = 1.0;
            break;
    }

    RngStream mean_rng = substream(spec.seed, {kTagMeans});
    std::vector<RewardModel> rewards;
    rewards.reserve(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) {
        rewards.push_back(make_reward(spec.reward_kind, mean_rng.normal(), spec.reward_scale));
    }

    return Mrp(n, std::move(transition), std::move(rewards), spec.gamma, env_id(spec));
}

EnvSpec suite_spec(TransitionKind t, RewardKind r, std::uint64_t seed) {
    EnvSpec spec;
    spec.transition_kind = t;
    spec.reward_kind = r;
    spec.n_states = (t == TransitionKind::Cycle) ? 10 : 20;
    spec.seed = seed;
    return spec;
}

std::vector<EnvSpec> suite_environments(std::uint64_t seed) {
    std::vector<EnvSpec> specs;
    for (TransitionKind t : {TransitionKind::Dirichlet, TransitionKind::Garnet, TransitionKind::Cycle}) {
        for (RewardKind r : {RewardKind::PointMass, RewardKind::Gaussian, RewardKind::Exponential,
                             RewardKind::StudentT2}) {
            specs.push_back(suite_spec(t, r, seed));
        }
    }
    return specs;
}

Mrp make_skewed_pair(double skew, double gamma, double tail_prob) {
    if (!(tail_prob > 0.0 && tail_prob < 1.0)) {
        throw std::invalid_argument("make_skewed_pair: tail_prob must lie in (0,1)");
    }
    const int n = 3;
    std::vector<double> transition(9, 0.0);
    transition[0 * 3 + 1] = tail_prob;        // junction -> jackpot
    transition[0 * 3 + 2] = 1.0 - tail_prob;  // junction -> dud
    transition[1 * 3 + 0] = 1.0;
    transition[2 * 3 + 0] = 1.0;
    std::vector<RewardModel> rewards = {
        RewardModel::point_mass(0.0),
        RewardModel::point_mass(skew == 0.0 ? 0.0 : skew / tail_prob),
        RewardModel::point_mass(0.0),
    };
    return Mrp(n, std::move(transition), std::move(rewards), gamma, "skewed");
}

}  // namespace qtdlab
