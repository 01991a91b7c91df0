#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace testing_support {

using cd = std::complex<double>;

inline double rel(cd a, cd b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0 ? 0.0 : std::abs(a - b) / s;
}

inline double rel(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0 ? 0.0 : std::abs(a - b) / s;
}

/// Passive eps in the disc |eps| <= 10 with 0 <= eps'' <= 5.
inline cd passive_eps(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> re(-10.0, 10.0), im(0.0, 5.0);
    for (;;) {
        cd e(re(rng), im(rng));
        if (std::abs(e) <= 10.0 && std::abs(e) > 0.1 && std::abs(2.0 * e + 1.0) > 0.5) return e;
    }
}

/// Least-squares slope of log|y| vs log x.
inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = std::log(x[i]), b = std::log(std::abs(y[i]));
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace testing_support
