#pragma once

// Invariant battery run against a sweep configuration: oracle comparisons,
// closed-form vs. linear-solve coefficients, exact identities and the
// convergence order of every small-cavity expansion.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "onsager/multilayer.hpp"
#include "onsager/oracle.hpp"
#include "onsager/rates.hpp"
#include "onsager/sweep.hpp"

namespace onsager {

struct CheckResult {
    std::string name;
    double measured = 0;
    double tolerance = 0;
    bool passed = false;
    std::string detail;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    [[nodiscard]] bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }

    [[nodiscard]] const CheckResult* find(const std::string& name) const {
        for (const auto& c : checks) {
            if (c.name == name) return &c;
        }
        return nullptr;
    }

    void print(std::ostream& out) const {
        for (const auto& c : checks) {
            out << (c.passed ? "PASS " : "FAIL ") << c.name << ": measured " << format_number(c.measured)
                << ", tolerance " << format_number(c.tolerance);
            if (!c.detail.empty()) out << " (" << c.detail << ")";
            out << '\n';
        }
    }
};

/// Test seam: lets a fixture corrupt the closed-form coefficients before
/// they are compared against the linear solve.
struct VerifyHooks {
    std::function<void(WaveCoefficients<double>&)> corrupt_closed_form;
};

inline constexpr double kSlopeTolerance = 0.15;

/// Least-squares slope of log|y| against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

/// Maximum componentwise relative difference between two coefficient sets.
inline double coefficient_mismatch(const WaveCoefficients<double>& a, const WaveCoefficients<double>& b) {
    auto rel = [](std::complex<double> x, std::complex<double> y) {
        const double scale = std::max(std::abs(x), std::abs(y));
        return scale == 0 ? 0.0 : std::abs(x - y) / scale;
    };
    double worst = rel(a.c1, b.c1);
    for (std::size_t i = 0; i < a.c_plus.size(); ++i) {
        worst = std::max(worst, rel(a.c_plus[i], b.c_plus[i]));
        worst = std::max(worst, rel(a.c_minus[i], b.c_minus[i]));
    }
    return worst;
}

namespace detail {

inline constexpr std::uint64_t kVerifySeed = 0x5eed0115a6e7ULL;
inline const std::vector<double> kSlopePoints = {1e-2, 1e-3, 1e-4};

/// Passive eps with |eps| <= 10 and 0 <= eps'' <= 5, kept away from the
/// eps = -1/2 pole of the Onsager factor.
inline std::complex<double> random_passive_eps(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> re(-10.0, 10.0);
    std::uniform_real_distribution<double> im(0.0, 5.0);
    for (;;) {
        const std::complex<double> e(re(rng), im(rng));
        if (std::abs(e) <= 10.0 && std::abs(2.0 * e + 1.0) > 0.5 && std::abs(e) > 0.1) return e;
    }
}

struct Battery {
    VerificationReport report;

    void upper(const std::string& name, double measured, double tol, std::string detail = {}) {
        report.checks.push_back({name, measured, tol, std::isfinite(measured) && measured < tol, std::move(detail)});
    }

    void slope(const std::string& name, double measured, double target, std::string detail = {}) {
        const double dev = std::abs(measured - target);
        report.checks.push_back({name, measured, kSlopeTolerance,
                                 std::isfinite(measured) && dev <= kSlopeTolerance,
                                 "target " + format_number(target) + (detail.empty() ? "" : ", " + detail)});
    }

    void at_least(const std::string& name, double measured, double floor, std::string detail = {}) {
        report.checks.push_back({name, measured, floor, std::isfinite(measured) && measured >= floor,
                                 "lower bound" + (detail.empty() ? "" : ", " + detail)});
    }
};

struct SamplePoint {
    double omega;
    ComplexPermittivity<double> medium;
    double rc;
};

inline std::vector<SamplePoint> sample_points(const SweepConfig& c) {
    std::vector<std::size_t> idx = {0, c.grid.count / 2, c.grid.count - 1};
    // grid point closest to the resonance
    std::size_t best = 0;
    for (std::size_t i = 0; i < c.grid.count; ++i) {
        if (std::abs(c.grid.at(i) - c.medium.omega0) < std::abs(c.grid.at(best) - c.medium.omega0)) best = i;
    }
    idx.push_back(best);
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    std::vector<SamplePoint> out;
    for (std::size_t i : idx) {
        const double w = c.grid.at(i);
        const auto m = eval_lorentz(c.medium, w);
        out.push_back({w, m, cavity_radius(c, w, m)});
    }
    return out;
}

/// Residuals of the three small-cavity expansions and the exterior scaling
/// at k0 = 1, evaluated in long double.
struct SlopeResiduals {
    std::vector<double> eq_p_eff, eq_rate, eq_cavity, eq_external, eq_decomposition;
};

inline SlopeResiduals slope_residuals(std::complex<double> eps, std::complex<double> eps_ext, double radius) {
    using LD = long double;
    const ComplexPermittivity<LD> m(Complex<LD>(eps.real(), eps.imag()));
    const Complex<LD> ext(eps_ext.real(), eps_ext.imag());
    const LD k0 = 1;
    const LD big_r = radius;
    SlopeResiduals s;
    for (double xd : kSlopePoints) {
        const LD x = xd;
        const auto c2 = coeffs_two_layer<LD>(Complex<LD>(1), m.eps, x, k0);
        s.eq_p_eff.push_back(static_cast<double>(std::abs(c2.outgoing() / m.eps - p_eff_expansion(m, k0, x))));
        s.eq_rate.push_back(static_cast<double>(LD(1) + c2.c1.real() - gamma0_loc(m, k0, x)));

        const auto c3 = coeffs_three_layer<LD>(Complex<LD>(1), m.eps, ext, x, big_r, k0);
        const LD exact_re = c3.c1.real();
        s.eq_cavity.push_back(
            static_cast<double>(exact_re - cavity_coefficient_expansion(m, ext, k0, x, big_r).real()));

        const LayerStack<LD> with_cavity({x, big_r}, {Complex<LD>(1), m.eps, ext});
        const LayerStack<LD> bare({big_r}, {m.eps, ext});
        const Complex<LD> ratio = external_dipole(with_cavity, k0) / external_dipole(bare, k0);
        s.eq_external.push_back(static_cast<double>(std::abs(ratio - detail::onsager_amplitude(m))));

        const LD split = gamma0_loc(m, k0, x) + gamma_sc_loc(m, ext, big_r, k0);
        s.eq_decomposition.push_back(static_cast<double>(LD(1) + exact_re - split));
    }
    return s;
}

}  // namespace detail

/// Runs every invariant on the configured system (a few grid frequencies)
/// and on a fixed pseudo-random sample.
inline VerificationReport verify(const SweepConfig& config, const VerifyHooks& hooks = {}) {
    validate(config);
    detail::Battery b;
    const QuadratureSpec quad{};
    const QuadratureSpec fine{quad.rel_tol * 1e-2, quad.max_depth + 5, 15};
    const auto samples = detail::sample_points(config);
    const double big_r = config.sphere_radius;
    const std::complex<double> ext = config.eps_ext;

    // Oracle: homogeneous medium with the field cut off inside R_c.
    double oracle_err = 0, balance_err = 0, converge_err = 0;
    for (const auto& s : samples) {
        const double k0 = s.omega;
        const HomogeneousDipole<double> f(s.medium.eps, k0);
        const double r_far = std::max(10.0 / k0, 2.0 * s.rc);
        const double closed = w0_cutoff(s.medium, k0, s.rc);
        const double num = flux_plus_absorption(f, s.rc, r_far, s.medium.eps, k0, quad);
        oracle_err = std::max(oracle_err, std::abs(num - closed) / closed);
        const double mid = flux_plus_absorption(f, s.rc, std::sqrt(s.rc * r_far), s.medium.eps, k0, quad);
        balance_err = std::max(balance_err, std::abs(mid - num) / closed);
        const double num_fine = flux_plus_absorption(f, s.rc, r_far, s.medium.eps, k0, fine);
        converge_err = std::max(converge_err, std::abs(num_fine - num) / std::abs(num));
    }
    b.upper("oracle_homogeneous", oracle_err, 1e-8, "flux + absorption vs closed form");
    b.upper("energy_balance_homogeneous", balance_err, 1e-8);
    b.upper("quadrature_convergence", converge_err, quad.rel_tol * 10);

    // Oracle on the Onsager stack: vacuum cavity, sphere, exterior.
    double layer_err = 0, exterior_err = 0, cavity_err = 0;
    for (const auto& s : samples) {
        if (!(s.rc < big_r)) continue;
        const double k0 = s.omega;
        const LayerStack<double> stack({s.rc, big_r}, {std::complex<double>(1), s.medium.eps, ext});
        const DipoleField<double> f(stack, k0);
        layer_err = std::max(layer_err, energy_balance(f, 0.25 * s.rc, s.rc, std::complex<double>(1), k0, quad));
        layer_err = std::max(layer_err, energy_balance(f, s.rc * (1 + 1e-9), big_r, s.medium.eps, k0, quad));
        layer_err = std::max(layer_err, energy_balance(f, big_r * (1 + 1e-9), big_r + 10.0 / k0, ext, k0, quad));
        const double r_obs = 1.5 * big_r;
        const double ext_closed = external_power(stack, k0, r_obs).flux;
        exterior_err = std::max(exterior_err, std::abs(flux_through_sphere(f, r_obs, k0, quad) - ext_closed) / ext_closed);
        const double exact = gamma_hat_total(stack, k0);
        cavity_err = std::max(cavity_err, std::abs(flux_through_sphere(f, 0.5 * s.rc, k0, quad) - exact) / std::abs(exact));
    }
    b.upper("energy_balance_layers", layer_err, 1e-8, "each layer of the cavity stack");
    b.upper("exterior_flux_vs_external_power", exterior_err, 1e-8);
    b.upper("cavity_flux_vs_exact_rate", cavity_err, 1e-8);

    // Closed-form coefficients against the general boundary-condition solve.
    std::mt19937_64 rng(detail::kVerifySeed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double n2_err = 0, n3_err = 0, bc_err = 0;
    auto compare = [&](const LayerStack<double>& stack, double k0, double& worst) {
        auto closed = coefficients(stack, k0);
        if (hooks.corrupt_closed_form) hooks.corrupt_closed_form(closed);
        const auto solved = solve_boundary_conditions(stack, k0);
        worst = std::max(worst, coefficient_mismatch(closed, solved.coeffs));
        bc_err = std::max(bc_err, boundary_residual(stack, closed, k0));
    };
    for (const auto& s : samples) {
        compare(LayerStack<double>({big_r}, {s.medium.eps, ext}), s.omega, n2_err);
        if (s.rc < big_r) {
            compare(LayerStack<double>({s.rc, big_r}, {std::complex<double>(1), s.medium.eps, ext}), s.omega, n3_err);
        }
    }
    for (int i = 0; i < 50; ++i) {
        const double k0 = 0.2 + 1.8 * unit(rng);
        const double r1 = 0.05 + 0.95 * unit(rng);
        const double r2 = r1 + 0.1 + 2.9 * unit(rng);
        const auto e1 = detail::random_passive_eps(rng);
        const auto e2 = detail::random_passive_eps(rng);
        const std::complex<double> e3(1.0 + 3.0 * unit(rng), 0.0);
        compare(LayerStack<double>({r1}, {e1, e2}), k0, n2_err);
        compare(LayerStack<double>({r1, r2}, {e1, e2, e3}), k0, n3_err);
    }
    b.upper("closed_form_vs_solver_n2", n2_err, 1e-10);
    b.upper("closed_form_vs_solver_n3", n3_err, 1e-10);
    b.upper("boundary_conditions_closed_form", bc_err, 1e-10);

    // Exact identities.
    double ident_err = 0, equiv_err = 0;
    auto identities = [&](const ComplexPermittivity<double>& m, double k0) {
        const auto [lhs, rhs] = identity_rep_decomposition(m);
        ident_err = std::max(ident_err, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
        const double g = gamma_sc(m, ext, big_r, k0);
        const double d = delta_sc(m, ext, big_r, k0);
        const double direct = gamma_sc_loc(m, ext, big_r, k0);
        const double rebuilt = gamma_sc_loc_from_bare(m, g, d);
        equiv_err = std::max(equiv_err, std::abs(direct - rebuilt) / std::max(1.0, std::abs(direct)));
    };
    for (const auto& s : samples) identities(s.medium, s.omega);
    for (int i = 0; i < 500; ++i) {
        identities(ComplexPermittivity<double>(detail::random_passive_eps(rng)), 0.2 + 1.8 * unit(rng));
    }
    b.upper("identity_radiative_split", ident_err, 1e-12);
    b.upper("scattered_local_rate_forms", equiv_err, 1e-12);

    // Lossless collapse: every correction proportional to eps'' vanishes.
    double collapse_err = 0;
    std::vector<ComplexPermittivity<double>> lossless = {
        ComplexPermittivity<double>({2.0, 0.0}), ComplexPermittivity<double>({5.0, 0.0}),
        ComplexPermittivity<double>({9.3, 0.0})};
    for (const auto& s : samples) {
        if (s.medium.im() == 0) lossless.push_back(s.medium);
    }
    for (const auto& m : lossless) {
        const double l = onsager_factor(m);
        const double k0 = 1.0;
        collapse_err = std::max(collapse_err, std::abs(gamma0_loc(m, k0, 0.1) - l * m.eta) / (l * m.eta));
        const double g = gamma_sc(m, ext, big_r, k0);
        collapse_err = std::max(collapse_err,
                                std::abs(gamma_sc_loc(m, ext, big_r, k0) - l * g) / std::max(1.0, std::abs(l * g)));
        const auto [lhs, rhs] = identity_rep_decomposition(m);
        collapse_err = std::max(collapse_err, std::abs(lhs - l * m.eta) / (l * m.eta));
        collapse_err = std::max(collapse_err, std::abs(rhs - l * m.eta) / (l * m.eta));
    }
    b.upper("lossless_collapse", collapse_err, 1e-13);

    // Expansion orders, on the most absorbing sampled frequency and on a
    // fixed reference permittivity.
    const auto lossiest = std::max_element(samples.begin(), samples.end(), [](const auto& a, const auto& c) {
        return a.medium.im() < c.medium.im();
    });
    std::vector<std::pair<std::string, std::complex<double>>> slope_cases = {{"reference", {5.0, 2.5}}};
    if (lossiest->medium.im() > 1e-3 * std::abs(lossiest->medium.eps)) {
        slope_cases.emplace_back("configured", lossiest->medium.eps);
    }
    const double slope_r = std::max(big_r, 0.5);
    for (const auto& [label, eps] : slope_cases) {
        const auto r = detail::slope_residuals(eps, ext, slope_r);
        const auto& x = detail::kSlopePoints;
        const std::string at = label + " eps " + format_number(eps.real()) + "+" + format_number(eps.imag()) + "i";
        b.slope("slope_effective_moment_" + label, loglog_slope(x, r.eq_p_eff), 4.0, at);
        b.slope("slope_cavity_rate_" + label, loglog_slope(x, r.eq_rate), 1.0, at);
        b.slope("slope_cavity_coefficient_" + label, loglog_slope(x, r.eq_cavity), 1.0, at);
        b.slope("slope_external_scaling_" + label, loglog_slope(x, r.eq_external), 2.0, at);
        b.at_least("slope_decomposition_" + label, loglog_slope(x, r.eq_decomposition), 1.0 - kSlopeTolerance, at);
    }
    return b.report;
}

}  // namespace onsager
