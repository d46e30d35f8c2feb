#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace ousv {

/// Neumaier (improved Kahan) compensated accumulator. The running error of a
/// long sum stays at a few ulps of the true result instead of growing with n.
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + comp; }
};

inline double compensated_sum(std::span<const double> xs) {
    NeumaierSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

inline double compensated_mean(std::span<const double> xs) {
    return xs.empty() ? 0.0 : compensated_sum(xs) / static_cast<double>(xs.size());
}

}  // namespace ousv
