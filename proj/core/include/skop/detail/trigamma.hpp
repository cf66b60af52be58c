#pragma once

#include <cmath>

namespace skop::detail {

/// psi_1(z) = sum_{m>=0} 1/(z+m)^2 for z > 0.
/// Recurrence up to z >= 8, then the Bernoulli asymptotic series;
/// absolute accuracy ~1e-15 over the whole range.
inline double trigamma(double z) {
    double acc = 0.0;
    while (z < 8.0) {
        acc += 1.0 / (z * z);
        z += 1.0;
    }
    const double iz = 1.0 / z;
    const double iz2 = iz * iz;
    const double series =
        1.0 +
        iz * (0.5 + iz * (1.0 / 6.0 +
                          iz2 * (-1.0 / 30.0 + iz2 * (1.0 / 42.0 - iz2 * (1.0 / 30.0)))));
    return acc + iz * series;
}

/// sum_{j=p..q} 1/(c - j)^2 with the whole range on one side of c
/// (c < p or c > q). Ends may be +-huge; terms beyond 1e18 vanish.
inline double one_sided_inv_square_sum(double c, double p, double q) {
    if (q < p) return 0.0;
    if (p > c) {
        // arguments p-c, p-c+1, ..., q-c
        return trigamma(p - c) - trigamma(q + 1.0 - c);
    }
    // q < c: arguments c-q, ..., c-p
    return trigamma(c - q) - trigamma(c - p + 1.0);
}

} // namespace skop::detail
