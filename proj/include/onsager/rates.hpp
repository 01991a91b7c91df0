#pragma once

// Normalized decay rates, level shifts and power losses of a dipole at the
// center of an (absorbing) sphere, with and without an Onsager cavity.
//
// Everything is normalized to the free-space values: rates to Gamma_free,
// powers to W_free = c k0^4 |p|^2 / 3.  With c = 1 the two coincide.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "onsager/dielectric.hpp"
#include "onsager/errors.hpp"
#include "onsager/multilayer.hpp"

namespace onsager {

/// Above this k0 R_c the small-cavity expansions lose percent-level accuracy.
inline constexpr double kExpansionLimit = 0.3;

/// Collects non-fatal diagnostics (expansions evaluated outside their range).
struct Warnings {
    std::vector<std::string> messages;

    void add(std::string msg) {
        for (const auto& m : messages) {
            if (m == msg) return;
        }
        messages.push_back(std::move(msg));
    }
};

namespace detail {

template <class Real>
void check_expansion(Real k0_rc, const char* who, Warnings* warn) {
    if (warn != nullptr && !(k0_rc < Real(kExpansionLimit))) {
        warn->add(std::string(who) + ": k0*Rc = " + std::to_string(static_cast<double>(k0_rc)) +
                  " is outside the small-cavity range (< 0.3)");
    }
}

template <class Real>
Complex<Real> onsager_amplitude(const ComplexPermittivity<Real>& m) {
    const Complex<Real> denom = Real(2) * m.eps + Real(1);
    if (std::abs(denom) == Real(0)) {
        throw DomainError("Onsager factor: pole at eps = -1/2");
    }
    return Real(3) * m.eps / denom;
}

}  // namespace detail

/// |(eps + 2) / 3|^2, virtual-cavity local-field factor.
template <class Real>
Real lorentz_factor(const ComplexPermittivity<Real>& m) {
    return std::norm((m.eps + Real(2)) / Real(3));
}

/// |3 eps / (2 eps + 1)|^2, real-cavity local-field factor.
template <class Real>
Real onsager_factor(const ComplexPermittivity<Real>& m) {
    return std::norm(detail::onsager_amplitude(m));
}

/// Split of a rate into its near-field (nonradiative) and radiative parts.
template <class Real = double>
struct MacroscopicRate {
    Real near_field{0};
    Real radiative{0};
    [[nodiscard]] Real total() const { return near_field + radiative; }
};

/// Infinite-medium rate with a regularized near field over radius R_m:
/// (3/2)(eps''/|eps|^2)(k0 R_m)^-3 + eta.
template <class Real>
MacroscopicRate<Real> gamma0_macroscopic_parts(const ComplexPermittivity<Real>& m, Real k0, Real rm) {
    if (!(rm > Real(0))) throw DomainError("gamma0_macroscopic: Rm must be > 0");
    const Real x = k0 * rm;
    return {Real(1.5) * m.loss_weight() / (x * x * x), m.eta};
}

template <class Real>
Real gamma0_macroscopic(const ComplexPermittivity<Real>& m, Real k0, Real rm) {
    return gamma0_macroscopic_parts(m, k0, rm).total();
}

/// Poynting-derived infinite-medium power loss with the field cut off
/// inside R_c: absorption plus radiation contribution.
template <class Real>
Real w0_cutoff(const ComplexPermittivity<Real>& m, Real k0, Real rc) {
    if (!(rc > Real(0))) throw DomainError("w0_cutoff: Rc must be > 0");
    const Complex<Real> i(0, 1);
    const Complex<Real> s = m.wavenumber(k0) * rc;
    const Real x = k0 * rc;
    const Real absorption = m.loss_weight() * std::norm((Real(1) - i * s) * std::exp(i * s)) / (x * x * x);
    const Real radiation = m.eta * std::exp(Real(-2) * m.kappa * x);
    return absorption + radiation;
}

/// Small-R_c expansion of w0_cutoff, including the R_c-free absorption term.
template <class Real>
Real w0_expanded(const ComplexPermittivity<Real>& m, Real k0, Real rc, Warnings* warn = nullptr) {
    if (!(rc > Real(0))) throw DomainError("w0_expanded: Rc must be > 0");
    const Real x = k0 * rc;
    detail::check_expansion(x, "w0_expanded", warn);
    const Real ep = m.re(), epp = m.im();
    const Real bracket = Real(1) / (x * x * x) + ep / x -
                         Real(2) / Real(3) * (m.eta * epp + m.kappa * ep);
    return m.loss_weight() * bracket + m.eta;
}

/// R_c-free absorption term of w0_expanded; survives R_c -> 0.
template <class Real>
Real w0_rc_free_term(const ComplexPermittivity<Real>& m) {
    return -Real(2) / Real(3) * (m.eta * m.im() + m.kappa * m.re()) * m.loss_weight();
}

/// Terms of the Onsager-cavity infinite-medium rate.  `near_field`,
/// `intermediate` and `rc_free` are the bracketed absorption terms before
/// the overall |3 eps/(2 eps+1)|^2 factor.
template <class Real = double>
struct CavityRateParts {
    Real onsager_factor{1};
    Real radiative{0};     // eta
    Real near_field{0};    // (eps''/|eps|^2) (k0 Rc)^-3
    Real intermediate{0};  // (eps''/|eps|^2) (28|eps|^2+16eps'+1)/(5|2eps+1|^2) (k0 Rc)^-1
    Real rc_free{0};       // -(eps''/|eps|^2) 2(2 kappa |eps|^2 + kappa eps' + eta eps'')/|2eps+1|^2

    [[nodiscard]] Real total() const {
        return onsager_factor * (radiative + near_field + intermediate + rc_free);
    }
};

template <class Real>
CavityRateParts<Real> gamma0_loc_parts(const ComplexPermittivity<Real>& m, Real k0, Real rc,
                                       Warnings* warn = nullptr) {
    if (!(rc > Real(0))) throw DomainError("gamma0_loc: Rc must be > 0");
    const Real x = k0 * rc;
    detail::check_expansion(x, "gamma0_loc", warn);
    const Real abs2 = m.abs2();
    const Real d2 = std::norm(Real(2) * m.eps + Real(1));
    const Real w = m.loss_weight();
    CavityRateParts<Real> p;
    p.onsager_factor = onsager_factor(m);
    p.radiative = m.eta;
    p.near_field = w / (x * x * x);
    p.intermediate = w * (Real(28) * abs2 + Real(16) * m.re() + Real(1)) / (Real(5) * d2) / x;
    p.rc_free = -w * Real(2) *
                (Real(2) * m.kappa * abs2 + m.kappa * m.re() + m.eta * m.im()) / d2;
    return p;
}

template <class Real>
Real gamma0_loc(const ComplexPermittivity<Real>& m, Real k0, Real rc, Warnings* warn = nullptr) {
    return gamma0_loc_parts(m, k0, rc, warn).total();
}

/// Effective moment of a dipole in an Onsager cavity, (1/eps) C^2_2(1, eps; Rc),
/// expanded through (k0 Rc)^3.
template <class Real>
Complex<Real> p_eff_expansion(const ComplexPermittivity<Real>& m, Real k0, Real rc,
                              Warnings* warn = nullptr) {
    const Real x = k0 * rc;
    detail::check_expansion(x, "p_eff_expansion", warn);
    const Complex<Real> i(0, 1);
    const Complex<Real> e = m.eps;
    const Complex<Real> d = Real(2) * e + Real(1);
    const Complex<Real> second = (Real(10) * e * e - Real(9) * e - Real(1)) / (Real(10) * d);
    const Complex<Real> third = i * (Real(2) / Real(3)) * m.pow3_2() * (e - Real(1)) / d;
    return detail::onsager_amplitude(m) * (Real(1) - second * x * x - third * x * x * x);
}

/// 1 + Re C^N_1 for a stack whose central layer is vacuum.
template <class Real>
Real gamma_hat_total(const LayerStack<Real>& stack, Real k0) {
    if (stack.medium(0).eps != Complex<Real>(1)) {
        throw DomainError("gamma_hat_total: innermost layer must be vacuum (eps_1 = 1)");
    }
    return Real(1) + coefficients(stack, k0).c1.real();
}

/// sqrt(eps) C^2_1(eps, eps_ext; R) for the bare sphere.
template <class Real>
Complex<Real> bare_sphere_amplitude(const ComplexPermittivity<Real>& m, Complex<Real> eps_ext, Real radius,
                                    Real k0) {
    if (!(radius > Real(0))) throw DomainError("bare sphere: R must be > 0");
    return m.index() * coeffs_two_layer(m.eps, eps_ext, radius, k0).c1;
}

/// Cavity-induced rate Re sqrt(eps) C^2_1.
template <class Real>
Real gamma_sc(const ComplexPermittivity<Real>& m, Complex<Real> eps_ext, Real radius, Real k0) {
    return bare_sphere_amplitude(m, eps_ext, radius, k0).real();
}

/// Classical cavity-induced level shift (1/2) Im sqrt(eps) C^2_1.
template <class Real>
Real delta_sc(const ComplexPermittivity<Real>& m, Complex<Real> eps_ext, Real radius, Real k0) {
    return bare_sphere_amplitude(m, eps_ext, radius, k0).imag() / Real(2);
}

/// Local-field corrected cavity-induced rate, Re[9 eps^{5/2}/(2 eps+1)^2 C^2_1].
template <class Real>
Real gamma_sc_loc(const ComplexPermittivity<Real>& m, Complex<Real> eps_ext, Real radius, Real k0) {
    const Complex<Real> d = Real(2) * m.eps + Real(1);
    if (std::abs(d) == Real(0)) throw DomainError("gamma_sc_loc: pole at eps = -1/2");
    const Complex<Real> c = coeffs_two_layer(m.eps, eps_ext, radius, k0).c1;
    return (Real(9) * m.pow5_2() / (d * d) * c).real();
}

/// Same rate rebuilt from the bare-sphere rate and shift:
/// L_Ons { G - 2 (eps''/|eps|^2) [2(2|eps|^2 + eps') D + eps'' G] / |2 eps+1|^2 }.
template <class Real>
Real gamma_sc_loc_from_bare(const ComplexPermittivity<Real>& m, Real gamma_sc_hat, Real delta_sc_hat) {
    const Real d2 = std::norm(Real(2) * m.eps + Real(1));
    const Real correction = Real(2) * m.loss_weight() *
                            (Real(2) * (Real(2) * m.abs2() + m.re()) * delta_sc_hat +
                             m.im() * gamma_sc_hat) /
                            d2;
    return onsager_factor(m) * (gamma_sc_hat - correction);
}

/// Both sides of Re[9 eps^{5/2}/(2eps+1)^2] =
/// L_Ons eta - 18 eps'' [(2|eps|^2 + eps') kappa + eps'' eta] / |2eps+1|^4.
template <class Real>
std::pair<Real, Real> identity_rep_decomposition(const ComplexPermittivity<Real>& m) {
    const Complex<Real> d = Real(2) * m.eps + Real(1);
    const Real lhs = (Real(9) * m.pow5_2() / (d * d)).real();
    const Real d4 = std::norm(d) * std::norm(d);
    const Real rhs = onsager_factor(m) * m.eta -
                     Real(18) * m.im() * ((Real(2) * m.abs2() + m.re()) * m.kappa + m.im() * m.eta) / d4;
    return {lhs, rhs};
}

/// Small-R_c expansion of C^3_1(1, eps, eps_ext; Rc, R).  Only the real part
/// enters the rates.
template <class Real>
Complex<Real> cavity_coefficient_expansion(const ComplexPermittivity<Real>& m, Complex<Real> eps_ext,
                                           Real k0, Real rc, Real radius, Warnings* warn = nullptr) {
    const Real x = k0 * rc;
    detail::check_expansion(x, "cavity_coefficient_expansion", warn);
    const Complex<Real> i(0, 1);
    const Complex<Real> e = m.eps;
    const Complex<Real> d = Real(2) * e + Real(1);
    const auto beta = outer_interface_betas(e, eps_ext, radius, k0);
    const Complex<Real> finite =
        -Real(9) * m.pow5_2() / (d * d) * (beta[0] - beta[1]) / (beta[0] + beta[1]) - Real(1);
    return -i * Real(9) * e / d / (x * x * x) -
           i * Real(9) * e * (Real(8) * e + Real(1)) / (Real(5) * d * d) / x + finite;
}

/// p_N = (eps_1/eps_N) C^N_N, the moment that reproduces the exterior field.
template <class Real>
Complex<Real> external_dipole(const LayerStack<Real>& stack, Real k0) {
    const auto c = coefficients(stack, k0);
    return stack.medium(0).eps / stack.medium(stack.layers() - 1).eps * c.outgoing();
}

template <class Real = double>
struct ExternalPower {
    Real total{0};      // power lost outside the sphere, normalized
    Real flux{0};       // flux through the observation sphere
    Real radiation{0};  // radiation (1/r^2) part of that flux
};

/// Exterior losses of the effective dipole p_N in medium N, cut off at the
/// outermost radius, plus the flux through r_obs >= outer radius.
template <class Real>
ExternalPower<Real> external_power(const LayerStack<Real>& stack, Real k0, Real r_obs) {
    const Real a = stack.outer_radius();
    if (!(r_obs >= a)) throw DomainError("external_power: r_obs lies inside the sphere");
    const Complex<Real> i(0, 1);
    const auto& m = stack.medium(stack.layers() - 1);
    const Real p2 = std::norm(external_dipole(stack, k0));
    auto flux_at = [&](Real r, Real& radiation) {
        const Complex<Real> s = m.wavenumber(k0) * r;
        const Real x = k0 * r;
        radiation = p2 * m.eta * std::exp(Real(-2) * m.kappa * x);
        return p2 * m.loss_weight() * std::norm((Real(1) - i * s) * std::exp(i * s)) / (x * x * x) +
               radiation;
    };
    ExternalPower<Real> out;
    Real unused = 0;
    out.total = flux_at(a, unused);
    out.flux = flux_at(r_obs, out.radiation);
    return out;
}

/// dW_rad/dOmega in the exterior, normalized to W_free.
template <class Real>
Real angular_radiation(const LayerStack<Real>& stack, Real k0, Real r, Real theta) {
    if (!(r >= stack.outer_radius())) throw DomainError("angular_radiation: r inside the sphere");
    const auto& m = stack.medium(stack.layers() - 1);
    const Real p2 = std::norm(external_dipole(stack, k0));
    const Real s = std::sin(theta);
    return Real(3) / (Real(8) * std::numbers::pi_v<Real>) * m.eta * p2 * std::exp(Real(-2) * m.kappa * k0 * r) * s * s;
}

enum class ApproxMode { resonance, intermediate };

/// Approximate local-field corrected total rate:
///   resonance:    L_Ons (eta + G_sc)
///   intermediate: L_Ons [(eps''/|eps|^2)(k0 Rc)^-3 + eta + G_sc]
template <class Real>
Real approx_rates(const ComplexPermittivity<Real>& m, Real gamma_sc_hat, Real k0, Real rc, ApproxMode mode) {
    Real base = m.eta + gamma_sc_hat;
    if (mode == ApproxMode::intermediate) {
        const Real x = k0 * rc;
        base += m.loss_weight() / (x * x * x);
    }
    return onsager_factor(m) * base;
}

/// Uncorrected approximation eta + G_sc.
template <class Real>
Real approx_gamma_hat(const ComplexPermittivity<Real>& m, Real gamma_sc_hat) {
    return m.eta + gamma_sc_hat;
}

/// Every normalized rate for one frequency and geometry.
template <class Real = double>
struct RateReport {
    Real gamma0_hat{0};        // macroscopic infinite-medium rate
    Real gamma0_nr_hat{0};     // its near-field part
    Real gamma0_loc_hat{0};    // Onsager-cavity infinite-medium rate
    Real gamma0_loc_nf{0};     // bracketed near-field term of gamma0_loc (before L_Ons)
    Real gamma_sc_hat{0};
    Real delta_sc_hat{0};
    Real gamma_sc_loc_hat{0};
    Real gamma_hat{0};         // gamma0_hat + gamma_sc_hat
    Real gamma_loc_hat{0};     // gamma0_loc_hat + gamma_sc_loc_hat
    Real gamma_loc_naive_hat{0};  // L_Ons * gamma_hat
    Real gamma_loc_exact_hat{0};  // 1 + Re C^3_1(1, eps, eps_ext; Rc, R)
    Real w_ext_hat{0};
    Real w_ext_loc_hat{0};
    Real onsager_factor{1};
    Real lorentz_factor{1};
};

template <class Real>
struct Geometry {
    Complex<Real> eps_ext{1};
    Real sphere_radius{2};
    Real cavity_radius{0.1};
    Real rm{0.1};
};

template <class Real>
RateReport<Real> rate_report(const ComplexPermittivity<Real>& m, Real k0, const Geometry<Real>& g,
                             Warnings* warn = nullptr) {
    RateReport<Real> r;
    r.onsager_factor = onsager_factor(m);
    r.lorentz_factor = lorentz_factor(m);

    const auto macro = gamma0_macroscopic_parts(m, k0, g.rm);
    r.gamma0_hat = macro.total();
    r.gamma0_nr_hat = macro.near_field;

    const auto loc = gamma0_loc_parts(m, k0, g.cavity_radius, warn);
    r.gamma0_loc_hat = loc.total();
    r.gamma0_loc_nf = loc.near_field;

    const Complex<Real> bare = bare_sphere_amplitude(m, g.eps_ext, g.sphere_radius, k0);
    r.gamma_sc_hat = bare.real();
    r.delta_sc_hat = bare.imag() / Real(2);
    r.gamma_sc_loc_hat = gamma_sc_loc(m, g.eps_ext, g.sphere_radius, k0);

    r.gamma_hat = r.gamma0_hat + r.gamma_sc_hat;
    r.gamma_loc_hat = r.gamma0_loc_hat + r.gamma_sc_loc_hat;
    r.gamma_loc_naive_hat = r.onsager_factor * r.gamma_hat;

    if (g.cavity_radius < g.sphere_radius) {
        r.gamma_loc_exact_hat =
            Real(1) + coeffs_three_layer(Complex<Real>(1), m.eps, g.eps_ext, g.cavity_radius,
                                         g.sphere_radius, k0)
                          .c1.real();
    } else {
        r.gamma_loc_exact_hat = std::numeric_limits<Real>::quiet_NaN();
    }

    const LayerStack<Real> bare_stack({g.sphere_radius}, {m.eps, g.eps_ext});
    r.w_ext_hat = external_power(bare_stack, k0, g.sphere_radius).total;
    r.w_ext_loc_hat = r.onsager_factor * r.w_ext_hat;
    return r;
}

}  // namespace onsager
