#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace qtdlab {

/// Neumaier-compensated sum; exact up to one final rounding for the sizes
/// used here.
inline double compensated_sum(std::span<const double> xs) {
    double sum = 0.0;
    double comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

/// Pairwise (balanced-tree) sum in fixed index order. Used for run
/// aggregation so results are independent of worker scheduling.
inline double pairwise_sum(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace qtdlab
