// hermite.hpp — Physicists' Hermite polynomials H_n(x) by three-term
// recurrence, with a log-magnitude representation for the large-argument
// regime where the plain value overflows a double.

#pragma once

#include <cmath>
#include <string>

#include "rabicrit/errors.hpp"

namespace rabicrit {

// value = sign * exp(log_abs);  sign in {-1, 0, +1}.
struct LogScaled {
    double log_abs = -std::numeric_limits<double>::infinity();
    int sign = 0;

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

    static LogScaled from(double v) {
        LogScaled s;
        if (v == 0.0) return s;
        s.sign = v > 0 ? 1 : -1;
        s.log_abs = std::log(std::abs(v));
        return s;
    }
};

inline constexpr int hermite_max_order = 200;

// H_{n+1} = 2x H_n - 2n H_{n-1}, carried with periodic rescaling so any
// n <= hermite_max_order is representable in (log|H|, sign) form.
inline LogScaled hermite_log(int n, double x) {
    if (n < 0) throw contract_error("hermite_log: negative order");
    if (n > hermite_max_order)
        throw contract_error("hermite_log: order beyond documented range (" +
                             std::to_string(hermite_max_order) + ")");
    if (!std::isfinite(x)) throw numeric_error("hermite_log: non-finite argument");
    double hm = 1.0;        // H_0
    double log_scale = 0.0; // common log factor of (hm, h)
    if (n == 0) return LogScaled::from(1.0);
    double h = 2.0 * x;     // H_1
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * x * h - 2.0 * k * hm;
        hm = h;
        h = next;
        const double biggest = std::max(std::abs(h), std::abs(hm));
        if (biggest > 1e250) {
            hm /= 1e250;
            h /= 1e250;
            log_scale += std::log(1e250);
        }
    }
    LogScaled out = LogScaled::from(h);
    if (out.sign != 0) out.log_abs += log_scale;
    return out;
}

// Plain-value evaluation; throws numeric_error when the result overflows.
inline double hermite(int n, double x) {
    const LogScaled h = hermite_log(n, x);
    if (h.sign != 0 && h.log_abs > std::log(std::numeric_limits<double>::max()))
        throw numeric_error("hermite: overflow at n=" + std::to_string(n) +
                            ", request the log form instead");
    return h.value();
}

// log(n!) via lgamma.
inline double log_factorial(int n) {
    if (n < 0) throw contract_error("log_factorial: negative argument");
    return std::lgamma(double(n) + 1.0);
}

} // namespace rabicrit
