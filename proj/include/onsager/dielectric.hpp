#pragma once

// Dielectric functions and the optical constants derived from them.
//
// Units: frequencies in units of the resonance frequency omega_0, lengths in
// units of c/omega_0, c = 1.  The vacuum wavenumber is then k0 = omega.

#include <cmath>
#include <complex>

#include "onsager/errors.hpp"

namespace onsager {

template <class Real>
using Complex = std::complex<Real>;

/// Principal square root of eps with kappa >= 0 whenever Im eps >= 0.
/// A signed-zero imaginary part is treated as +0 so negative real eps maps
/// to +i sqrt|eps| instead of -i sqrt|eps|.
template <class Real>
Complex<Real> sqrt_eps(Complex<Real> eps) {
    if (eps == Complex<Real>(0)) {
        throw DomainError("sqrt_eps: eps = 0");
    }
    if (eps.imag() == Real(0)) {
        eps.imag(Real(0));
    }
    return std::sqrt(eps);
}

/// Relative permittivity together with n = eta + i kappa = sqrt(eps).
template <class Real = double>
struct ComplexPermittivity {
    Complex<Real> eps{1};
    Real eta{1};
    Real kappa{0};

    ComplexPermittivity() = default;

    explicit ComplexPermittivity(Complex<Real> e) : eps(e) {
        const Complex<Real> n = sqrt_eps(e);
        eta = n.real();
        kappa = n.imag();
    }

    [[nodiscard]] Complex<Real> index() const { return {eta, kappa}; }
    [[nodiscard]] Real re() const { return eps.real(); }
    [[nodiscard]] Real im() const { return eps.imag(); }
    [[nodiscard]] Real abs2() const { return std::norm(eps); }

    /// k = sqrt(eps) omega / c.
    [[nodiscard]] Complex<Real> wavenumber(Real k0) const { return index() * k0; }

    /// eps^{3/2} and eps^{5/2} on the sqrt branch above, never via std::pow.
    [[nodiscard]] Complex<Real> pow3_2() const { return eps * index(); }
    [[nodiscard]] Complex<Real> pow5_2() const { return eps * eps * index(); }

    /// eps'' / |eps|^2, the weight of every absorption term.
    [[nodiscard]] Real loss_weight() const { return im() / abs2(); }
};

/// Single Lorentz oscillator on a constant background.
template <class Real = double>
struct LorentzMedium {
    Real eps_b{1};
    Real omega0{1};
    Real Omega{0};   // oscillator strength, same units as omega0
    Real gamma{0.1}; // resonance width

    void validate() const {
        if (!(eps_b >= Real(1))) throw DomainError("LorentzMedium: eps_b must be >= 1");
        if (!(gamma > Real(0))) throw DomainError("LorentzMedium: gamma must be > 0");
        if (!(Omega >= Real(0))) throw DomainError("LorentzMedium: Omega must be >= 0");
        if (!(omega0 > Real(0))) throw DomainError("LorentzMedium: omega0 must be > 0");
    }
};

/// eps(omega) = eps_b + Omega^2 / (omega0^2 - omega^2 - i omega gamma).
template <class Real>
ComplexPermittivity<Real> eval_lorentz(const LorentzMedium<Real>& m, Real omega) {
    if (!(omega > Real(0))) {
        throw DomainError("eval_lorentz: omega must be > 0");
    }
    const Complex<Real> denom(m.omega0 * m.omega0 - omega * omega, -omega * m.gamma);
    return ComplexPermittivity<Real>(Complex<Real>(m.eps_b) + m.Omega * m.Omega / denom);
}

}  // namespace onsager
