#pragma once

// Field of a z-oriented point dipole at the center of a concentric N-layer
// sphere.  In layer l the radial function is
//
//   f_l(r) = delta_{l1} h1(k_1 r) + C_{l+} h1(k_l r) + C_{l-} h2(k_l r),
//
// with C_{1+} = C_{1-} = C_1 / 2 (regular at the origin) and C_{N-} = 0
// (outgoing at infinity).  The remaining amplitudes follow from continuity
// of f and [r f]' / eps at every interface.  Fields are returned for p = 1,
// c = 1, Gaussian units:
//
//   B_phi   = eps_1 k0^3 f sin(theta)
//   E_r     = i k0^2 (eps_1/eps_l) 2 f / r cos(theta)
//   E_theta = -i k0^2 (eps_1/eps_l) [r f]' / r sin(theta)

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "onsager/dielectric.hpp"
#include "onsager/errors.hpp"
#include "onsager/specfun.hpp"

namespace onsager {

inline constexpr double kSingularThreshold = 1e-300;
inline constexpr double kResidualTolerance = 1e-8;

/// Radii r_1 < ... < r_{N-1} and permittivities eps_1 ... eps_N, innermost first.
template <class Real = double>
class LayerStack {
public:
    LayerStack(std::vector<Real> radii, const std::vector<Complex<Real>>& eps)
        : radii_(std::move(radii)) {
        if (eps.size() < 2 || eps.size() != radii_.size() + 1) {
            throw DomainError("LayerStack: need N >= 2 permittivities and N-1 radii");
        }
        for (std::size_t i = 0; i < radii_.size(); ++i) {
            if (!(radii_[i] > Real(0))) {
                throw DomainError("LayerStack: radii must be positive");
            }
            if (i > 0 && !(radii_[i] > radii_[i - 1])) {
                throw DomainError("LayerStack: radii must be strictly increasing");
            }
        }
        media_.reserve(eps.size());
        for (const auto& e : eps) media_.emplace_back(e);
    }

    [[nodiscard]] std::size_t layers() const { return media_.size(); }
    [[nodiscard]] const std::vector<Real>& radii() const { return radii_; }
    [[nodiscard]] Real outer_radius() const { return radii_.back(); }

    /// 0-based layer index; layer i spans (r_i, r_{i+1}].
    [[nodiscard]] const ComplexPermittivity<Real>& medium(std::size_t i) const {
        return media_.at(i);
    }

    /// Layer containing radius r.  A point on an interface belongs to the
    /// inner layer.
    [[nodiscard]] std::size_t layer_of(Real r) const {
        std::size_t i = 0;
        while (i < radii_.size() && r > radii_[i]) ++i;
        return i;
    }

private:
    std::vector<Real> radii_;
    std::vector<ComplexPermittivity<Real>> media_;
};

/// Scattering amplitudes C^N_1, C^N_{l+}, C^N_{l-} for l = 2..N.
template <class Real = double>
struct WaveCoefficients {
    Complex<Real> c1{0};
    std::vector<Complex<Real>> c_plus;   // layers 2..N
    std::vector<Complex<Real>> c_minus;  // layers 2..N, last entry is 0

    [[nodiscard]] std::size_t layers() const { return c_plus.size() + 1; }

    /// C^N_N, the amplitude of the outgoing wave in the outermost medium.
    [[nodiscard]] Complex<Real> outgoing() const { return c_plus.back(); }

    /// (C_{l+}, C_{l-}) for 0-based layer i; the central layer splits C_1 evenly.
    [[nodiscard]] std::pair<Complex<Real>, Complex<Real>> amplitudes(std::size_t i) const {
        if (i == 0) return {c1 / Real(2), c1 / Real(2)};
        return {c_plus.at(i - 1), c_minus.at(i - 1)};
    }
};

template <class Real = double>
struct BoundarySolution {
    WaveCoefficients<Real> coeffs;
    Real residual{0};
};

namespace detail {

template <class Real>
void require_regular(const Complex<Real>& d, const char* who) {
    if (!(std::abs(d) >= Real(kSingularThreshold)) || !std::isfinite(std::abs(d))) {
        throw SingularDenominator(std::string(who) + ": denominator vanishes");
    }
}

}  // namespace detail

/// N = 2 closed form.  rho_i = k_i r1.
template <class Real>
WaveCoefficients<Real> coeffs_two_layer(Complex<Real> eps1, Complex<Real> eps2, Real r1, Real k0) {
    using specfun::Kind;
    if (!(r1 > Real(0)) || !(k0 > Real(0))) {
        throw DomainError("coeffs_two_layer: r1 and k0 must be positive");
    }
    const Complex<Real> i(0, 1);
    const ComplexPermittivity<Real> m1(eps1), m2(eps2);
    const Complex<Real> rho1 = m1.wavenumber(k0) * r1;
    const Complex<Real> rho2 = m2.wavenumber(k0) * r1;

    const Complex<Real> h_1 = specfun::sph_h1_1(rho1);
    const Complex<Real> h_2 = specfun::sph_h1_1(rho2);
    const Complex<Real> dh_1 = specfun::riccati_deriv(Kind::h1, rho1);
    const Complex<Real> dh_2 = specfun::riccati_deriv(Kind::h1, rho2);
    const Complex<Real> j_1 = specfun::sph_j1(rho1);
    const Complex<Real> dj_1 = specfun::riccati_deriv(Kind::j1, rho1);

    const Complex<Real> D = eps1 * j_1 * dh_2 - eps2 * h_2 * dj_1;
    detail::require_regular(D, "coeffs_two_layer");

    WaveCoefficients<Real> out;
    out.c1 = (eps2 * h_2 * dh_1 - eps1 * h_1 * dh_2) / D;
    out.c_plus = {i * eps2 / (rho1 * D)};
    out.c_minus = {Complex<Real>(0)};
    return out;
}

/// beta_j (j = 1, 2) for the interface between eps2 and the outgoing-only
/// medium eps3 at radius r2.
template <class Real>
std::array<Complex<Real>, 2> outer_interface_betas(Complex<Real> eps2, Complex<Real> eps3, Real r2,
                                                   Real k0) {
    using specfun::Kind;
    const ComplexPermittivity<Real> m2(eps2), m3(eps3);
    const Complex<Real> rho22 = m2.wavenumber(k0) * r2;
    const Complex<Real> rho32 = m3.wavenumber(k0) * r2;
    const Complex<Real> h3 = specfun::sph_h1_1(rho32);
    const Complex<Real> dh3 = specfun::riccati_deriv(Kind::h1, rho32);
    std::array<Complex<Real>, 2> beta;
    const Kind kinds[2] = {Kind::h1, Kind::h2};
    for (int j = 0; j < 2; ++j) {
        beta[j] = eps3 * h3 * specfun::riccati_deriv(kinds[j], rho22) -
                  eps2 * specfun::sph_order1(kinds[j], rho22) * dh3;
    }
    return beta;
}

/// N = 3 closed form.  rho_ij = k_i r_j.
template <class Real>
WaveCoefficients<Real> coeffs_three_layer(Complex<Real> eps1, Complex<Real> eps2, Complex<Real> eps3,
                                          Real r1, Real r2, Real k0) {
    using specfun::Kind;
    if (!(r1 > Real(0)) || !(r2 > r1) || !(k0 > Real(0))) {
        throw DomainError("coeffs_three_layer: need 0 < r1 < r2 and k0 > 0");
    }
    const Complex<Real> i(0, 1);
    const ComplexPermittivity<Real> m1(eps1), m2(eps2);
    const Complex<Real> rho11 = m1.wavenumber(k0) * r1;
    const Complex<Real> rho21 = m2.wavenumber(k0) * r1;
    const Complex<Real> rho22 = m2.wavenumber(k0) * r2;

    const Complex<Real> j11 = specfun::sph_j1(rho11);
    const Complex<Real> dj11 = specfun::riccati_deriv(Kind::j1, rho11);
    const Kind kinds[2] = {Kind::h1, Kind::h2};
    std::array<Complex<Real>, 2> alpha;
    for (int j = 0; j < 2; ++j) {
        alpha[j] = -i * rho11 / eps2 *
                   (eps1 * j11 * specfun::riccati_deriv(kinds[j], rho21) -
                    eps2 * specfun::sph_order1(kinds[j], rho21) * dj11);
    }
    const auto beta = outer_interface_betas(eps2, eps3, r2, k0);

    const Complex<Real> det = alpha[0] * beta[1] - alpha[1] * beta[0];
    detail::require_regular(det, "coeffs_three_layer");
    detail::require_regular(j11, "coeffs_three_layer");

    WaveCoefficients<Real> out;
    out.c1 = ((beta[1] * specfun::sph_h1_1(rho21) - beta[0] * specfun::sph_h2_1(rho21)) / det -
              specfun::sph_h1_1(rho11)) /
             j11;
    out.c_plus = {beta[1] / det, -i * eps3 / rho22 * Real(2) / det};
    out.c_minus = {-beta[0] / det, Complex<Real>(0)};
    return out;
}

/// Dense solve of the 2(N-1) interface conditions with partial pivoting.
///
/// Unknowns are ordered C_1, C_{2+}, C_{2-}, ..., C_{(N-1)+}, C_{(N-1)-}, C_{N+}.
/// Rows are equilibrated before factorization; `residual` is the normwise
/// backward error ||A x - b|| / (||A|| ||x|| + ||b||) of the scaled system.
template <class Real>
BoundarySolution<Real> solve_boundary_conditions(const LayerStack<Real>& stack, Real k0) {
    using specfun::Kind;
    using Mat = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;
    if (!(k0 > Real(0))) throw DomainError("solve_boundary_conditions: k0 must be positive");

    const std::size_t n_layers = stack.layers();
    const Eigen::Index dim = static_cast<Eigen::Index>(2 * (n_layers - 1));
    Mat A = Mat::Zero(dim, dim);
    Vec b = Vec::Zero(dim);

    // Column of C_{l+} / C_{l-} for 0-based layer i >= 1.
    auto col_plus = [](std::size_t i) { return static_cast<Eigen::Index>(2 * i - 1); };
    auto col_minus = [](std::size_t i) { return static_cast<Eigen::Index>(2 * i); };

    for (std::size_t s = 0; s + 1 < n_layers; ++s) {
        const Real r = stack.radii()[s];
        const Eigen::Index row_f = static_cast<Eigen::Index>(2 * s);
        const Eigen::Index row_d = row_f + 1;
        const auto& in = stack.medium(s);
        const auto& out = stack.medium(s + 1);
        const Complex<Real> z_in = in.wavenumber(k0) * r;
        const Complex<Real> z_out = out.wavenumber(k0) * r;

        // inner side, moved to the left-hand side with + sign
        if (s == 0) {
            A(row_f, 0) += specfun::sph_j1(z_in);
            A(row_d, 0) += specfun::riccati_deriv(Kind::j1, z_in) / in.eps;
            b(row_f) -= specfun::sph_h1_1(z_in);
            b(row_d) -= specfun::riccati_deriv(Kind::h1, z_in) / in.eps;
        } else {
            A(row_f, col_plus(s)) += specfun::sph_h1_1(z_in);
            A(row_f, col_minus(s)) += specfun::sph_h2_1(z_in);
            A(row_d, col_plus(s)) += specfun::riccati_deriv(Kind::h1, z_in) / in.eps;
            A(row_d, col_minus(s)) += specfun::riccati_deriv(Kind::h2, z_in) / in.eps;
        }
        // outer side with - sign
        const std::size_t o = s + 1;
        A(row_f, col_plus(o)) -= specfun::sph_h1_1(z_out);
        A(row_d, col_plus(o)) -= specfun::riccati_deriv(Kind::h1, z_out) / out.eps;
        if (o + 1 < n_layers) {
            A(row_f, col_minus(o)) -= specfun::sph_h2_1(z_out);
            A(row_d, col_minus(o)) -= specfun::riccati_deriv(Kind::h2, z_out) / out.eps;
        }
    }

    for (Eigen::Index row = 0; row < dim; ++row) {
        const Real scale = A.row(row).cwiseAbs().maxCoeff();
        if (!(scale > Real(0))) throw IllConditioned("solve_boundary_conditions: empty row");
        A.row(row) /= scale;
        b(row) /= scale;
    }

    const Vec x = A.partialPivLu().solve(b);
    const Real denom = A.cwiseAbs().rowwise().sum().maxCoeff() * x.cwiseAbs().maxCoeff() +
                       b.cwiseAbs().maxCoeff();
    const Real residual = (A * x - b).cwiseAbs().maxCoeff() / denom;
    if (!(residual <= Real(kResidualTolerance))) {
        throw IllConditioned("solve_boundary_conditions: relative residual " +
                             std::to_string(static_cast<double>(residual)));
    }

    BoundarySolution<Real> sol;
    sol.residual = residual;
    sol.coeffs.c1 = x(0);
    for (std::size_t i = 1; i < n_layers; ++i) {
        sol.coeffs.c_plus.push_back(x(col_plus(i)));
        sol.coeffs.c_minus.push_back(i + 1 < n_layers ? x(col_minus(i)) : Complex<Real>(0));
    }
    return sol;
}

template <class Real>
WaveCoefficients<Real> coeffs_general_n(const LayerStack<Real>& stack, Real k0) {
    return solve_boundary_conditions(stack, k0).coeffs;
}

/// Closed form for N = 2, 3; linear solve otherwise.
template <class Real>
WaveCoefficients<Real> coefficients(const LayerStack<Real>& stack, Real k0) {
    const auto& r = stack.radii();
    switch (stack.layers()) {
        case 2:
            return coeffs_two_layer(stack.medium(0).eps, stack.medium(1).eps, r[0], k0);
        case 3:
            return coeffs_three_layer(stack.medium(0).eps, stack.medium(1).eps,
                                      stack.medium(2).eps, r[0], r[1], k0);
        default:
            return coeffs_general_n(stack, k0);
    }
}

/// Radial function f(r) and its Riccati derivative [r f(r)]'.
template <class Real>
struct RadialProfile {
    Complex<Real> f;
    Complex<Real> rf_prime;
};

enum class FieldPart { total, scattered };

template <class Real>
RadialProfile<Real> radial_profile(const LayerStack<Real>& stack, const WaveCoefficients<Real>& c,
                                   std::size_t layer, Real r, Real k0,
                                   FieldPart part = FieldPart::total) {
    using specfun::Kind;
    const Complex<Real> z = stack.medium(layer).wavenumber(k0) * r;
    RadialProfile<Real> p{};
    if (layer == 0) {
        p.f = c.c1 * specfun::sph_j1(z);
        p.rf_prime = c.c1 * specfun::riccati_deriv(Kind::j1, z);
        if (part == FieldPart::total) {
            p.f += specfun::sph_h1_1(z);
            p.rf_prime += specfun::riccati_deriv(Kind::h1, z);
        }
        return p;
    }
    const auto [cp, cm] = c.amplitudes(layer);
    p.f = cp * specfun::sph_h1_1(z);
    p.rf_prime = cp * specfun::riccati_deriv(Kind::h1, z);
    if (cm != Complex<Real>(0)) {
        p.f += cm * specfun::sph_h2_1(z);
        p.rf_prime += cm * specfun::riccati_deriv(Kind::h2, z);
    }
    return p;
}

/// E in (r, theta) components and B along phi.
template <class Real>
struct FieldSample {
    Complex<Real> e_r{0};
    Complex<Real> e_theta{0};
    Complex<Real> b_phi{0};

    [[nodiscard]] Real e_norm2() const { return std::norm(e_r) + std::norm(e_theta); }
    /// Cartesian z component of E.
    [[nodiscard]] Complex<Real> e_z(Real theta) const {
        return e_r * std::cos(theta) - e_theta * std::sin(theta);
    }
};

template <class Real>
FieldSample<Real> field_in_layer(const LayerStack<Real>& stack, const WaveCoefficients<Real>& c,
                                 Real r, Real theta, Real k0, FieldPart part = FieldPart::total) {
    if (!(r > Real(0))) {
        throw DomainError("field_in_layer: r must be > 0 (use field_center_limit)");
    }
    const Complex<Real> i(0, 1);
    const std::size_t layer = stack.layer_of(r);
    const auto prof = radial_profile(stack, c, layer, r, k0, part);
    const Complex<Real> eps1 = stack.medium(0).eps;
    const Complex<Real> pre = i * k0 * k0 * eps1 / stack.medium(layer).eps;
    FieldSample<Real> s;
    s.e_r = pre * Real(2) * prof.f / r * std::cos(theta);
    s.e_theta = -pre * prof.rf_prime / r * std::sin(theta);
    s.b_phi = eps1 * k0 * k0 * k0 * prof.f * std::sin(theta);
    return s;
}

/// Scattered field at the center, i k1 k0^2 C_1 (2/3) p, as a Cartesian vector.
template <class Real>
std::array<Complex<Real>, 3> field_center_limit(const WaveCoefficients<Real>& c,
                                                Complex<Real> eps1, Real k0) {
    const Complex<Real> i(0, 1);
    const Complex<Real> k1 = ComplexPermittivity<Real>(eps1).wavenumber(k0);
    return {Complex<Real>(0), Complex<Real>(0), i * k1 * k0 * k0 * c.c1 * (Real(2) / Real(3))};
}

/// Dipole field in an unbounded homogeneous medium, written directly in
/// terms of h0 and h1 of k r.
template <class Real>
FieldSample<Real> homogeneous_dipole_field(const ComplexPermittivity<Real>& m, Real k0, Real r,
                                           Real theta) {
    if (!(r > Real(0))) throw DomainError("homogeneous_dipole_field: r must be > 0");
    const Complex<Real> i(0, 1);
    const Complex<Real> k = m.wavenumber(k0);
    const Complex<Real> z = k * r;
    const Complex<Real> h0 = specfun::sph_h1_0(z);
    const Complex<Real> h1 = specfun::sph_h1_1(z);
    FieldSample<Real> s;
    s.e_r = i * k * k0 * k0 * Real(2) * h1 / z * std::cos(theta);
    s.e_theta = i * k * k0 * k0 * (h1 / z - h0) * std::sin(theta);
    s.b_phi = k * k * k0 * h1 * std::sin(theta);
    return s;
}

/// Callable field evaluator over a solved stack.
template <class Real = double>
class DipoleField {
public:
    DipoleField(LayerStack<Real> stack, Real k0, FieldPart part = FieldPart::total)
        : stack_(std::move(stack)), k0_(k0), coeffs_(coefficients(stack_, k0_)), part_(part) {}

    DipoleField(LayerStack<Real> stack, WaveCoefficients<Real> coeffs, Real k0,
                FieldPart part = FieldPart::total)
        : stack_(std::move(stack)), k0_(k0), coeffs_(std::move(coeffs)), part_(part) {}

    FieldSample<Real> operator()(Real r, Real theta) const {
        return field_in_layer(stack_, coeffs_, r, theta, k0_, part_);
    }

    [[nodiscard]] const LayerStack<Real>& stack() const { return stack_; }
    [[nodiscard]] const WaveCoefficients<Real>& coeffs() const { return coeffs_; }
    [[nodiscard]] Real k0() const { return k0_; }

private:
    LayerStack<Real> stack_;
    Real k0_;
    WaveCoefficients<Real> coeffs_;
    FieldPart part_;
};

/// Homogeneous-medium evaluator with the same call signature.
template <class Real = double>
class HomogeneousDipole {
public:
    HomogeneousDipole(Complex<Real> eps, Real k0) : medium_(eps), k0_(k0) {}

    FieldSample<Real> operator()(Real r, Real theta) const {
        return homogeneous_dipole_field(medium_, k0_, r, theta);
    }

    [[nodiscard]] const ComplexPermittivity<Real>& medium() const { return medium_; }
    [[nodiscard]] Real k0() const { return k0_; }

private:
    ComplexPermittivity<Real> medium_;
    Real k0_;
};

/// Largest relative mismatch of f and [r f]'/eps across all interfaces.
template <class Real>
Real boundary_residual(const LayerStack<Real>& stack, const WaveCoefficients<Real>& c, Real k0) {
    Real worst = 0;
    for (std::size_t s = 0; s + 1 < stack.layers(); ++s) {
        const Real r = stack.radii()[s];
        const auto in = radial_profile(stack, c, s, r, k0);
        const auto out = radial_profile(stack, c, s + 1, r, k0);
        const Complex<Real> d_in = in.rf_prime / stack.medium(s).eps;
        const Complex<Real> d_out = out.rf_prime / stack.medium(s + 1).eps;
        const Real ef = std::abs(in.f - out.f) / std::max(std::abs(in.f), std::abs(out.f));
        const Real ed = std::abs(d_in - d_out) / std::max(std::abs(d_in), std::abs(d_out));
        worst = std::max({worst, ef, ed});
    }
    return worst;
}

}  // namespace onsager
