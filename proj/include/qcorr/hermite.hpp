// Copyright 2026 qcorr contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <string>

#include "qcorr/errors.hpp"

namespace qcorr {

inline constexpr int kMaxHermiteOrder = 64;

// Orthonormal oscillator eigenfunction h_n(x) = (2^n n! sqrt(pi))^{-1/2}
// H_n(x) exp(-x^2/2), evaluated by the stable normalized recurrence
//   h_{n+1} = x sqrt(2/(n+1)) h_n - sqrt(n/(n+1)) h_{n-1}.
inline double hermite_function(int n, double x) {
    if (n < 0 || n > kMaxHermiteOrder)
        throw OverflowGuardError("hermite_function: order " + std::to_string(n) +
                                 " outside supported range [0, " +
                                 std::to_string(kMaxHermiteOrder) + "]");
    const double h0 = 0.75112554446494248;  // pi^{-1/4}
    double prev = 0.0;
    double cur = h0 * std::exp(-0.5 * x * x);
    for (int k = 0; k < n; ++k) {
        const double next = x * std::sqrt(2.0 / (k + 1)) * cur -
                            std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

}  // namespace qcorr
