#include "qtdlab/mrp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qtdlab {

namespace {
constexpr double kRowSumTol = 1e-12;

// Dense LU solve with partial pivoting, in place. a is n x n row-major,
// b is the right-hand side; returns the solution in b.
void lu_solve(std::vector<double>& a, std::vector<double>& b, int n) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;

    auto at = [&](int r, int c) -> double& {
        return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(n) +
                 static_cast<std::size_t>(c)];
    };

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(at(col, col));
        for (int r = col + 1; r < n; ++r) {
            const double cand = std::abs(at(r, col));
            if (cand > best) {
                best = cand;
                pivot = r;
            }
        }
        if (best == 0.0) throw std::runtime_error("lu_solve: singular matrix");
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(at(col, c), at(pivot, c));
            std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(pivot)]);
        }
        const double d = at(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double f = at(r, col) / d;
            if (f == 0.0) continue;
            at(r, col) = 0.0;
            for (int c = col + 1; c < n; ++c) at(r, c) -= f * at(col, c);
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double s = b[static_cast<std::size_t>(r)];
        for (int c = r + 1; c < n; ++c) s -= at(r, c) * b[static_cast<std::size_t>(c)];
        b[static_cast<std::size_t>(r)] = s / at(r, r);
    }
}
}  // namespace

Mrp::Mrp(int n_states, std::vector<double> transition_row_major, std::vector<RewardModel> rewards,
         double gamma, std::string id)
    : n_states_(n_states),
      transition_(std::move(transition_row_major)),
      rewards_(std::move(rewards)),
      gamma_(gamma),
      id_(std::move(id)) {
    if (n_states_ <= 0) throw std::invalid_argument("Mrp: n_states must be positive");
    const auto n = static_cast<std::size_t>(n_states_);
    if (transition_.size() != n * n) throw std::invalid_argument("Mrp: transition size mismatch");
    if (rewards_.size() != n) throw std::invalid_argument("Mrp: rewards size mismatch");
    if (!(gamma_ >= 0.0 && gamma_ < 1.0)) throw std::invalid_argument("Mrp: gamma must be in [0,1)");
    for (int x = 0; x < n_states_; ++x) {
        double sum = 0.0;
        for (int y = 0; y < n_states_; ++y) {
            const double pxy = p(x, y);
            if (pxy < 0.0) throw std::invalid_argument("Mrp: negative transition probability");
            sum += pxy;
        }
        if (std::abs(sum - 1.0) > kRowSumTol) {
            throw std::invalid_argument("Mrp: transition row " + std::to_string(x) +
                                        " does not sum to 1");
        }
    }
}

Transition step(const Mrp& mrp, int x, RngStream& rng) {
    if (x < 0 || x >= mrp.n_states()) throw std::invalid_argument("step: state out of range");
    const double r = sample(mrp.reward(x), rng);
    const double u = rng.uniform();
    double cum = 0.0;
    int x_next = x;
    int last_positive = x;
    for (int y = 0; y < mrp.n_states(); ++y) {
        const double pxy = mrp.p(x, y);
        if (pxy <= 0.0) continue;
        last_positive = y;
        cum += pxy;
        if (u <= cum) {
            x_next = y;
            return {x, r, x_next};
        }
    }
    // Rounding left u marginally above the accumulated row sum.
    return {x, r, last_positive};
}

ValueTable true_value(const Mrp& mrp) {
    const int n = mrp.n_states();
    std::vector<double> a(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    std::vector<double> b(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            a[static_cast<std::size_t>(x) * static_cast<std::size_t>(n) +
              static_cast<std::size_t>(y)] = (x == y ? 1.0 : 0.0) - mrp.gamma() * mrp.p(x, y);
        }
        b[static_cast<std::size_t>(x)] = mean(mrp.reward(x));
    }
    lu_solve(a, b, n);
    ValueTable out(n);
    out.v = std::move(b);
    return out;
}

double bellman_residual(const Mrp& mrp, const ValueTable& value) {
    double worst = 0.0;
    for (int x = 0; x < mrp.n_states(); ++x) {
        double backup = mean(mrp.reward(x));
        for (int y = 0; y < mrp.n_states(); ++y) {
            backup += mrp.gamma() * mrp.p(x, y) * value.v[static_cast<std::size_t>(y)];
        }
        worst = std::max(worst, std::abs(value.v[static_cast<std::size_t>(x)] - backup));
    }
    return worst;
}

std::pair<double, double> reward_support_bounds(const Mrp& mrp) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const RewardModel& r : mrp.rewards()) {
        const auto [a, b] = support(r);
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    }
    return {lo, hi};
}

std::pair<double, double> reward_mean_bounds(const Mrp& mrp) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const RewardModel& r : mrp.rewards()) {
        lo = std::min(lo, r.mean);
        hi = std::max(hi, r.mean);
    }
    return {lo, hi};
}

std::vector<double> stationary_distribution(const Mrp& mrp) {
    const int n = mrp.n_states();
    std::vector<double> pi(static_cast<std::size_t>(n), 1.0 / n);
    std::vector<double> next(static_cast<std::size_t>(n));
    for (int iter = 0; iter < 2000; ++iter) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int x = 0; x < n; ++x) {
            const double px = pi[static_cast<std::size_t>(x)];
            if (px == 0.0) continue;
            for (int y = 0; y < n; ++y) next[static_cast<std::size_t>(y)] += px * mrp.p(x, y);
        }
        // Damping handles periodic chains such as the deterministic cycle.
        double delta = 0.0;
        for (int y = 0; y < n; ++y) {
            const double mixed = 0.5 * (next[static_cast<std::size_t>(y)] +
                                        pi[static_cast<std::size_t>(y)]);
            delta = std::max(delta, std::abs(mixed - pi[static_cast<std::size_t>(y)]));
            pi[static_cast<std::size_t>(y)] = mixed;
        }
        if (delta < 1e-14) break;
    }
    double sum = 0.0;
    for (double v : pi) sum += v;
    for (double& v : pi) v /= sum;
    return pi;
}

}  // namespace qtdlab
