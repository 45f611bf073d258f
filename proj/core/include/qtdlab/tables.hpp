#pragma once

#include <cstddef>
#include <vector>

namespace qtdlab {

/// Per-state scalar value estimates.
struct ValueTable {
    std::vector<double> v;

    ValueTable() = default;
    explicit ValueTable(int n_states, double init = 0.0)
        : v(static_cast<std::size_t>(n_states), init) {}

    int n_states() const { return static_cast<int>(v.size()); }
};

/// Learnable quantile array theta(x, i), x in [0, n_states), i in [0, m),
/// with midpoint levels tau_i = (2i+1)/(2m). Rows are not kept sorted;
/// quantile crossing is permitted and never repaired.
struct QuantileTable {
    int n_states = 0;
    int m = 0;
    std::vector<double> tau;    // m levels, strictly increasing, tau_i + tau_{m-1-i} = 1
    std::vector<double> theta;  // row-major n_states x m

    QuantileTable() = default;
    QuantileTable(int n_states_, int m_, double init = 0.0)
        : n_states(n_states_),
          m(m_),
          tau(static_cast<std::size_t>(m_)),
          theta(static_cast<std::size_t>(n_states_) * static_cast<std::size_t>(m_), init) {
        for (int i = 0; i < m_; ++i) {
            tau[static_cast<std::size_t>(i)] = (2.0 * i + 1.0) / (2.0 * m_);
        }
    }

    double& at(int x, int i) {
        return theta[static_cast<std::size_t>(x) * static_cast<std::size_t>(m) +
                     static_cast<std::size_t>(i)];
    }
    double at(int x, int i) const {
        return theta[static_cast<std::size_t>(x) * static_cast<std::size_t>(m) +
                     static_cast<std::size_t>(i)];
    }
    const double* row(int x) const {
        return theta.data() + static_cast<std::size_t>(x) * static_cast<std::size_t>(m);
    }
};

}  // namespace qtdlab
