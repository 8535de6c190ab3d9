// ode.hpp — Adaptive Dormand-Prince 5(4) integrator over Eigen states
// (vectors, matrices, or density operators), with FSAL and PI step control.

#pragma once

#include <cmath>
#include <string>

#include "rabicrit/errors.hpp"

namespace rabicrit {

struct OdeOptions {
    double rtol = 1e-8;
    double atol = 1e-12;
    double h_init = 0.0;      // 0: choose from the first derivative
    double h_min = 1e-14;
    long max_steps = 400'000'000L;
};

struct OdeStats {
    long steps = 0;
    long rejected = 0;
    double h_last = 0.0;
};

// Integrates y' = rhs(t, y) from t0 to t1 in place, landing exactly on t1.
// rhs must return a State assignable to y's type.
template <class State, class Rhs>
OdeStats integrate_adaptive(Rhs&& rhs, State& y, double t0, double t1,
                            const OdeOptions& opt, OdeStats carry = {}) {
    if (t1 < t0) throw contract_error("integrate_adaptive: t1 < t0");
    if (t1 == t0) return carry;

    // Dormand-Prince coefficients
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                     a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                     a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - b_hat (error weights, with the FSAL k7 term)
    constexpr double e1 = 35.0 / 384 - 5179.0 / 57600;
    constexpr double e3 = 500.0 / 1113 - 7571.0 / 16695;
    constexpr double e4 = 125.0 / 192 - 393.0 / 640;
    constexpr double e5 = -2187.0 / 6784 + 92097.0 / 339200;
    constexpr double e6 = 11.0 / 84 - 187.0 / 2100;
    constexpr double e7 = -1.0 / 40;

    double t = t0;
    State k1 = rhs(t, y);
    double h = carry.h_last > 0 ? carry.h_last : opt.h_init;
    if (h <= 0) {
        const double ynorm = y.matrix().norm() + opt.atol;
        const double dnorm = k1.matrix().norm();
        h = dnorm > 0 ? 0.01 * ynorm / dnorm : 1e-4 * (t1 - t0);
        h = std::min(h, t1 - t0);
    }

    OdeStats stats = carry;
    while (t < t1) {
        if (stats.steps - carry.steps > opt.max_steps)
            throw convergence_error("integrate_adaptive: max step count exceeded");
        bool clipped = false;
        if (t + h >= t1) { h = t1 - t; clipped = true; }

        const State k2 = rhs(t + c2 * h, State(y + h * a21 * k1));
        const State k3 = rhs(t + c3 * h, State(y + h * (a31 * k1 + a32 * k2)));
        const State k4 =
            rhs(t + c4 * h, State(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
        const State k5 = rhs(t + c5 * h, State(y + h * (a51 * k1 + a52 * k2 +
                                                        a53 * k3 + a54 * k4)));
        const State k6 = rhs(t + h, State(y + h * (a61 * k1 + a62 * k2 + a63 * k3 +
                                                   a64 * k4 + a65 * k5)));
        const State ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const State k7 = rhs(t + h, ynew);
        const State err_state =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double scale =
            opt.atol + opt.rtol * std::max(y.matrix().norm(), ynew.matrix().norm());
        const double err = err_state.matrix().norm() / scale;

        if (err <= 1.0) {
            t += h;
            y = ynew;
            k1 = k7;  // FSAL
            ++stats.steps;
            const double grow = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            const double h_next = h * std::min(5.0, std::max(0.2, grow));
            if (!clipped) h = h_next;
            else h = std::max(h, h_next);  // keep the controller's suggestion
            stats.h_last = h;
        } else {
            ++stats.rejected;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            if (h < opt.h_min)
                throw convergence_error(
                    "integrate_adaptive: step-size collapse at t=" +
                    std::to_string(t) + " (h=" + std::to_string(h) + ")");
        }
    }
    return stats;
}

} // namespace rabicrit
