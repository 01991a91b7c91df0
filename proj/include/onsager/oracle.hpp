#pragma once

// Independent check of the closed-form power losses: numerical Poynting flux
// through a sphere plus Joule absorption inside a shell, computed from raw
// field samples only.
//
// The phi integral is done analytically (the dipole is on the axis of a
// concentric system).  The theta integral uses fixed Gauss-Legendre nodes in
// cos(theta); the integrands are degree-2 polynomials in cos(theta), so a
// handful of nodes is exact.  The radial integral is adaptive Gauss-Kronrod
// in ln r, which flattens the r^-4 growth of the near field.
//
// Results are normalized to W_free = k0^4 / 3 (c = |p| = 1).

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <concepts>
#include <string>

#include "onsager/dielectric.hpp"
#include "onsager/errors.hpp"
#include "onsager/multilayer.hpp"

namespace onsager {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    unsigned max_depth = 20;
    unsigned angular_points = 7;  // 7, 15 or 30

    void validate() const {
        if (!(rel_tol > 0)) throw DomainError("QuadratureSpec: rel_tol must be > 0");
        if (max_depth < 1) throw DomainError("QuadratureSpec: max_depth must be >= 1");
        if (angular_points != 7 && angular_points != 15 && angular_points != 30) {
            throw DomainError("QuadratureSpec: angular_points must be 7, 15 or 30");
        }
    }
};

template <class F, class Real>
concept FieldEvaluator = requires(const F& f, Real r, Real theta) {
    { f(r, theta) } -> std::convertible_to<FieldSample<Real>>;
};

namespace detail {

template <class Real, unsigned N, class G>
Real gauss_legendre_cos(const G& g) {
    // integral over x = cos(theta) in [-1, 1]
    return boost::math::quadrature::gauss<Real, N>::integrate(g, Real(-1), Real(1));
}

template <class Real, class G>
Real angular_integral(const G& g, unsigned points) {
    switch (points) {
        case 15: return gauss_legendre_cos<Real, 15>(g);
        case 30: return gauss_legendre_cos<Real, 30>(g);
        default: return gauss_legendre_cos<Real, 7>(g);
    }
}

template <class Real, class G>
Real adaptive_radial(const G& g, Real r_inner, Real r_outer, const QuadratureSpec& quad) {
    auto in_log = [&](Real u) {
        const Real r = std::exp(u);
        return g(r) * r;
    };
    Real error = 0;
    Real l1 = 0;
    const Real value = boost::math::quadrature::gauss_kronrod<Real, 31>::integrate(
        in_log, std::log(r_inner), std::log(r_outer), quad.max_depth, Real(quad.rel_tol), &error, &l1);
    if (!std::isfinite(value) || error > Real(quad.rel_tol) * l1) {
        throw QuadratureFailure("radial integral: error estimate " +
                                std::to_string(static_cast<double>(error / l1)) +
                                " above rel_tol " + std::to_string(quad.rel_tol));
    }
    return value;
}

}  // namespace detail

/// Outward Poynting flux through the sphere of radius r.
template <class Real, FieldEvaluator<Real> F>
Real flux_through_sphere(const F& fields, Real r, Real k0, const QuadratureSpec& quad = {}) {
    quad.validate();
    if (!(r > Real(0))) throw DomainError("flux_through_sphere: r must be > 0");
    auto radial_poynting = [&](Real x) {
        const FieldSample<Real> s = fields(r, std::acos(x));
        return (s.e_theta * std::conj(s.b_phi)).real();
    };
    const Real integral = detail::angular_integral<Real>(radial_poynting, quad.angular_points);
    // (r^2 / 8 pi) * 2 pi * integral, over W_free
    return Real(3) * r * r * integral / (Real(4) * k0 * k0 * k0 * k0);
}

/// Power absorbed in the shell r_inner < r < r_outer of a medium with
/// permittivity eps_local.
template <class Real, FieldEvaluator<Real> F>
Real absorbed_power(const F& fields, Real r_inner, Real r_outer, Complex<Real> eps_local, Real k0,
                    const QuadratureSpec& quad = {}) {
    quad.validate();
    if (!(r_inner > Real(0)) || !(r_outer >= r_inner)) {
        throw DomainError("absorbed_power: need 0 < r_inner <= r_outer");
    }
    if (eps_local.imag() < Real(0)) throw DomainError("absorbed_power: eps'' < 0");
    if (eps_local.imag() == Real(0) || r_outer == r_inner) return Real(0);
    auto shell_density = [&](Real r) {
        auto e2 = [&](Real x) { return fields(r, std::acos(x)).e_norm2(); };
        return r * r * detail::angular_integral<Real>(e2, quad.angular_points);
    };
    const Real integral = detail::adaptive_radial(shell_density, r_inner, r_outer, quad);
    // (omega eps'' / 8 pi) * 2 pi * integral, over W_free, omega = k0
    return Real(3) * eps_local.imag() * integral / (Real(4) * k0 * k0 * k0);
}

/// |flux(r_outer) + absorbed(r_inner..r_outer) - flux(r_inner)| / flux(r_inner).
template <class Real, FieldEvaluator<Real> F>
Real energy_balance(const F& fields, Real r_inner, Real r_outer, Complex<Real> eps_local, Real k0,
                    const QuadratureSpec& quad = {}) {
    const Real inner = flux_through_sphere(fields, r_inner, k0, quad);
    const Real outer = flux_through_sphere(fields, r_outer, k0, quad);
    const Real absorbed = absorbed_power(fields, r_inner, r_outer, eps_local, k0, quad);
    return std::abs(outer + absorbed - inner) / std::abs(inner);
}

/// W_f(r) + W_a(r_start..r): the quantity that must not depend on r.
template <class Real, FieldEvaluator<Real> F>
Real flux_plus_absorption(const F& fields, Real r_start, Real r, Complex<Real> eps_local, Real k0,
                          const QuadratureSpec& quad = {}) {
    return flux_through_sphere(fields, r, k0, quad) +
           absorbed_power(fields, r_start, r, eps_local, k0, quad);
}

}  // namespace onsager
