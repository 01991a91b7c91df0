#pragma once

// Spherical Bessel/Hankel functions of orders 0 and 1 for complex argument.
//
// Everything is closed form.  Near the origin j0, j1 and the ratios j1(z)/z,
// [z j1(z)]'/z switch to their Taylor series, where the closed forms lose
// all significant digits to cancellation.

#include <cmath>
#include <complex>
#include <limits>

#include "onsager/errors.hpp"

namespace onsager::specfun {

template <class Real>
using Complex = std::complex<Real>;

/// exp(|Im z|) must stay comfortably below the double overflow threshold.
inline constexpr double kImagGuard = 700.0;

/// Below this modulus the j-type functions are summed as power series.
inline constexpr double kSeriesRadius = 0.5;

enum class Kind { j1, h1, h2 };

namespace detail {

template <class Real>
void require_nonzero(const Complex<Real>& z, const char* who) {
    if (z == Complex<Real>(0)) {
        throw DomainError(std::string(who) + ": pole at z = 0");
    }
}

template <class Real>
void require_bounded(const Complex<Real>& z, const char* who) {
    if (std::abs(z.imag()) > Real(kImagGuard)) {
        throw OverflowError(std::string(who) + ": |Im z| exceeds " +
                            std::to_string(kImagGuard));
    }
}

// sum_k (-z^2/2)^k / (k! (2n+2k+1)!!) for n = 0, 1; converges fast for |z| < 1.
template <class Real>
Complex<Real> j_series_core(const Complex<Real>& z, int n) {
    const Complex<Real> q = -z * z / Real(2);
    Real dfact = (n == 0) ? Real(1) : Real(3);
    Complex<Real> term = Complex<Real>(1) / dfact;
    Complex<Real> sum = term;
    for (int k = 1; k < 40; ++k) {
        term *= q / (Real(k) * Real(2 * n + 2 * k + 1));
        sum += term;
        if (std::abs(term) <= std::numeric_limits<Real>::epsilon() * std::abs(sum)) {
            break;
        }
    }
    return sum;
}

}  // namespace detail

/// j0(z) = sin z / z, entire.
template <class Real>
Complex<Real> sph_j0(const Complex<Real>& z) {
    if (std::abs(z) < Real(kSeriesRadius)) {
        return detail::j_series_core(z, 0);
    }
    detail::require_bounded(z, "sph_j0");
    return std::sin(z) / z;
}

/// j1(z)/z, continuous through z = 0 with limit 1/3.
template <class Real>
Complex<Real> sph_j1_over_z(const Complex<Real>& z) {
    if (std::abs(z) < Real(kSeriesRadius)) {
        return detail::j_series_core(z, 1);
    }
    detail::require_bounded(z, "sph_j1_over_z");
    return (std::sin(z) / z - std::cos(z)) / (z * z);
}

/// j1(z) = sin z / z^2 - cos z / z.
template <class Real>
Complex<Real> sph_j1(const Complex<Real>& z) {
    if (std::abs(z) < Real(kSeriesRadius)) {
        return z * detail::j_series_core(z, 1);
    }
    detail::require_bounded(z, "sph_j1");
    return std::sin(z) / (z * z) - std::cos(z) / z;
}

/// h0^(1)(z) = -i e^{iz} / z.
template <class Real>
Complex<Real> sph_h1_0(const Complex<Real>& z) {
    detail::require_nonzero(z, "sph_h1_0");
    detail::require_bounded(z, "sph_h1_0");
    const Complex<Real> i(0, 1);
    return -i * std::exp(i * z) / z;
}

/// h0^(2)(z) = i e^{-iz} / z.
template <class Real>
Complex<Real> sph_h2_0(const Complex<Real>& z) {
    detail::require_nonzero(z, "sph_h2_0");
    detail::require_bounded(z, "sph_h2_0");
    const Complex<Real> i(0, 1);
    return i * std::exp(-i * z) / z;
}

/// h1^(1)(z) = -(e^{iz}/z)(1 + i/z).
template <class Real>
Complex<Real> sph_h1_1(const Complex<Real>& z) {
    detail::require_nonzero(z, "sph_h1_1");
    detail::require_bounded(z, "sph_h1_1");
    const Complex<Real> i(0, 1);
    return -(std::exp(i * z) / z) * (Real(1) + i / z);
}

/// h1^(2)(z) = -(e^{-iz}/z)(1 - i/z).  Equals conj(h1^(1)) only for real z.
template <class Real>
Complex<Real> sph_h2_1(const Complex<Real>& z) {
    detail::require_nonzero(z, "sph_h2_1");
    detail::require_bounded(z, "sph_h2_1");
    const Complex<Real> i(0, 1);
    return -(std::exp(-i * z) / z) * (Real(1) - i / z);
}

/// Order-1 function selected by `kind`.
template <class Real>
Complex<Real> sph_order1(Kind kind, const Complex<Real>& z) {
    switch (kind) {
        case Kind::j1: return sph_j1(z);
        case Kind::h1: return sph_h1_1(z);
        case Kind::h2: return sph_h2_1(z);
    }
    return {};
}

/// d/dz [z f(z)] for f in {j1, h1^(1), h1^(2)}, using [z f1]' = z f0 - f1.
template <class Real>
Complex<Real> riccati_deriv(Kind kind, const Complex<Real>& z) {
    const Complex<Real> i(0, 1);
    switch (kind) {
        case Kind::j1:
            if (std::abs(z) < Real(kSeriesRadius)) {
                return z * (detail::j_series_core(z, 0) - detail::j_series_core(z, 1));
            }
            detail::require_bounded(z, "riccati_deriv(j1)");
            return std::sin(z) - sph_j1(z);
        case Kind::h1: {
            detail::require_nonzero(z, "riccati_deriv(h1)");
            detail::require_bounded(z, "riccati_deriv(h1)");
            const Complex<Real> inv = Real(1) / z;
            return std::exp(i * z) * (-i + inv + i * inv * inv);
        }
        case Kind::h2: {
            detail::require_nonzero(z, "riccati_deriv(h2)");
            detail::require_bounded(z, "riccati_deriv(h2)");
            const Complex<Real> inv = Real(1) / z;
            return std::exp(-i * z) * (i + inv - i * inv * inv);
        }
    }
    return {};
}

/// [z j1(z)]'/z, continuous through z = 0 with limit 2/3.
template <class Real>
Complex<Real> riccati_j1_over_z(const Complex<Real>& z) {
    if (std::abs(z) < Real(kSeriesRadius)) {
        return detail::j_series_core(z, 0) - detail::j_series_core(z, 1);
    }
    return riccati_deriv(Kind::j1, z) / z;
}

/// Plain derivative f'(z) recovered from the Riccati form.
template <class Real>
Complex<Real> derivative(Kind kind, const Complex<Real>& z) {
    detail::require_nonzero(z, "derivative");
    return (riccati_deriv(kind, z) - sph_order1(kind, z)) / z;
}

}  // namespace onsager::specfun
