#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "onsager/multilayer.hpp"
#include "onsager/rates.hpp"
#include "support.hpp"

using namespace onsager;
using testing_support::cd;
using testing_support::rel;

namespace {

double mismatch(const WaveCoefficients<double>& a, const WaveCoefficients<double>& b) {
    double worst = rel(a.c1, b.c1);
    for (std::size_t i = 0; i < a.c_plus.size(); ++i) {
        worst = std::max({worst, rel(a.c_plus[i], b.c_plus[i]), rel(a.c_minus[i], b.c_minus[i])});
    }
    return worst;
}

}  // namespace

TEST(TwoLayer, NoInterfaceNoReflection) {
    const auto c = coeffs_two_layer(cd(5, 2.5), cd(5, 2.5), 0.8, 1.0);
    EXPECT_LT(std::abs(c.c1), 1e-15);
    EXPECT_LT(std::abs(c.outgoing() - 1.0), 1e-14);
}

TEST(TwoLayer, OnsagerCavityTracksExpansion) {
    const ComplexPermittivity<double> m(cd(5, 2.5));
    const auto c = coeffs_two_layer(cd(1, 0), m.eps, 0.01, 1.0);
    const double exact = 1.0 + c.c1.real();
    EXPECT_LT(rel(exact, gamma0_loc(m, 1.0, 0.01)), 1e-2);
}

TEST(ThreeLayer, OuterBetasReproduceBareSphere) {
    const cd eps(5, 2.5), ext(1.3, 0.0);
    const double r = 2.0, k0 = 0.9;
    const auto b = outer_interface_betas(eps, ext, r, k0);
    const cd c_bare = coeffs_two_layer(eps, ext, r, k0).c1;
    EXPECT_LT(rel(2.0 * b[0] / (b[0] + b[1]), -c_bare), 1e-13);
}

TEST(ThreeLayer, MergedOuterLayersReduceToTwoLayer) {
    const cd e1(1, 0), e2(4, 0.7);
    const auto three = coeffs_three_layer(e1, e2, e2, 0.3, 1.7, 1.1);
    const auto two = coeffs_two_layer(e1, e2, 0.3, 1.1);
    EXPECT_LT(rel(three.c1, two.c1), 1e-12);
    EXPECT_LT(std::abs(three.c_minus[0]), 1e-12 * std::abs(three.c_plus[0]));
    EXPECT_LT(rel(three.outgoing(), two.outgoing()), 1e-12);
}

TEST(ThreeLayer, LosslessCavityFinitePartTracksExpansion) {
    const ComplexPermittivity<double> m(cd(5, 0));
    const double x = 1e-3, r = 2.0;
    const auto c = coeffs_three_layer(cd(1, 0), m.eps, cd(1, 0), x, r, 1.0);
    const cd e = cavity_coefficient_expansion(m, cd(1, 0), 1.0, x, r);
    EXPECT_LT(std::abs(c.c1.real() - e.real()), 10 * x);
}

TEST(Solver, MatchesClosedFormsOnFigureStack) {
    const LayerStack<double> s2({2.0}, {cd(5, 2.5), cd(1, 0)});
    const LayerStack<double> s3({0.2, 2.0}, {cd(1, 0), cd(5, 2.5), cd(1, 0)});
    EXPECT_LT(mismatch(coefficients(s2, 1.0), solve_boundary_conditions(s2, 1.0).coeffs), 1e-12);
    EXPECT_LT(mismatch(coefficients(s3, 1.0), solve_boundary_conditions(s3, 1.0).coeffs), 1e-12);
}

TEST(Solver, MatchesClosedFormsOnRandomStacks) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst2 = 0, worst3 = 0;
    for (int n = 0; n < 200; ++n) {
        const double k0 = 0.2 + 1.8 * u(rng);
        const double r1 = 0.01 + u(rng);
        const double r2 = r1 + 0.05 + 3.0 * u(rng);
        const cd e1 = testing_support::passive_eps(rng);
        const cd e2 = testing_support::passive_eps(rng);
        const cd e3 = testing_support::passive_eps(rng);
        const LayerStack<double> s2({r1}, {e1, e2});
        const LayerStack<double> s3({r1, r2}, {e1, e2, e3});
        worst2 = std::max(worst2, mismatch(coeffs_two_layer(e1, e2, r1, k0), coeffs_general_n(s2, k0)));
        worst3 = std::max(worst3, mismatch(coeffs_three_layer(e1, e2, e3, r1, r2, k0), coeffs_general_n(s3, k0)));
    }
    EXPECT_LT(worst2, 1e-10);
    EXPECT_LT(worst3, 1e-10);
}

TEST(Solver, UniformStackHasNoScattering) {
    const cd e(3, 0.4);
    const LayerStack<double> s({0.3, 0.9, 1.4, 2.2}, {e, e, e, e, e});
    const auto c = coefficients(s, 1.2);
    EXPECT_LT(std::abs(c.c1), 1e-13);
    EXPECT_LT(std::abs(external_dipole(s, 1.2) - 1.0), 1e-13);
}

TEST(Solver, FiveLayerBoundaryConditions) {
    const LayerStack<double> s({0.1, 0.5, 1.0, 1.8}, {cd(1, 0), cd(5, 2.5), cd(2, 0), cd(9, 1), cd(1, 0)});
    const auto sol = solve_boundary_conditions(s, 1.3);
    EXPECT_LT(sol.residual, 1e-14);
    EXPECT_LT(boundary_residual(s, sol.coeffs, 1.3), 1e-10);
}

TEST(Solver, ClosedFormSatisfiesBoundaryConditions) {
    const LayerStack<double> s({0.2, 2.0}, {cd(1, 0), cd(5, 2.5), cd(1, 0)});
    EXPECT_LT(boundary_residual(s, coefficients(s, 1.0), 1.0), 1e-12);
}

TEST(Fields, UniformStackIsFreeDipole) {
    const cd e(2.5, 0.3);
    const LayerStack<double> s({0.5, 1.5}, {e, e, e});
    const DipoleField<double> f(s, 1.1);
    const HomogeneousDipole<double> h(e, 1.1);
    for (double r : {0.2, 0.9, 3.0}) {
        const auto a = f(r, 0.7), b = h(r, 0.7);
        EXPECT_LT(rel(a.e_r, b.e_r), 1e-12);
        EXPECT_LT(rel(a.e_theta, b.e_theta), 1e-12);
        EXPECT_LT(rel(a.b_phi, b.b_phi), 1e-12);
    }
}

TEST(Fields, InterfaceContinuity) {
    const LayerStack<double> s({0.2, 2.0}, {cd(1, 0), cd(5, 2.5), cd(1.5, 0)});
    const auto c = coefficients(s, 1.0);
    for (std::size_t l = 0; l + 1 < s.layers(); ++l) {
        const double r = s.radii()[l];
        const auto in = radial_profile(s, c, l, r, 1.0);
        const auto out = radial_profile(s, c, l + 1, r, 1.0);
        EXPECT_LT(rel(in.f, out.f), 1e-10);
        EXPECT_LT(rel(in.rf_prime / s.medium(l).eps, out.rf_prime / s.medium(l + 1).eps), 1e-10);

        // Sampled fields straddling the interface: B_phi, D_r, E_theta.  The
        // 2e-9 relative gap bounds what agreement can be expected.
        const double th = 0.9;
        const auto a = field_in_layer(s, c, r * (1 - 1e-9), th, 1.0);
        const auto b = field_in_layer(s, c, r * (1 + 1e-9), th, 1.0);
        EXPECT_LT(rel(a.b_phi, b.b_phi), 1e-7);
        EXPECT_LT(rel(s.medium(l).eps * a.e_r, s.medium(l + 1).eps * b.e_r), 1e-7);
        EXPECT_LT(rel(a.e_theta, b.e_theta), 1e-7);
    }
}

TEST(Fields, OutermostLayerIsEffectiveDipole) {
    const LayerStack<double> s({0.2, 2.0}, {cd(1, 0), cd(5, 2.5), cd(1.2, 0.05)});
    const DipoleField<double> f(s, 1.0);
    const cd p = external_dipole(s, 1.0);
    const HomogeneousDipole<double> h(cd(1.2, 0.05), 1.0);
    for (double r : {2.5, 6.0}) {
        const auto a = f(r, 1.1), b = h(r, 1.1);
        EXPECT_LT(rel(a.e_r, p * b.e_r), 1e-12);
        EXPECT_LT(rel(a.e_theta, p * b.e_theta), 1e-12);
        EXPECT_LT(rel(a.b_phi, p * b.b_phi), 1e-12);
    }
}

TEST(Fields, CenterLimit) {
    const LayerStack<double> s({0.4, 2.0}, {cd(1, 0), cd(5, 2.5), cd(1, 0)});
    const auto c = coefficients(s, 1.0);
    const auto center = field_center_limit(c, cd(1, 0), 1.0);
    EXPECT_EQ(center[0], cd(0, 0));
    EXPECT_EQ(center[1], cd(0, 0));
    for (double th : {0.0, 0.6, 2.0}) {
        const auto near = field_in_layer(s, c, 1e-8, th, 1.0, FieldPart::scattered);
        EXPECT_LT(rel(near.e_z(th), center[2]), 1e-6);
        const cd ex = near.e_r * std::sin(th) + near.e_theta * std::cos(th);
        EXPECT_LT(std::abs(ex), 1e-6 * std::abs(center[2]));
    }
    WaveCoefficients<double> zero = c;
    zero.c1 = 0;
    EXPECT_EQ(field_center_limit(zero, cd(1, 0), 1.0)[2], cd(0, 0));
}

TEST(Stack, Validation) {
    EXPECT_THROW(LayerStack<double>({}, {cd(1, 0)}), DomainError);
    EXPECT_THROW(LayerStack<double>({1.0}, {cd(1, 0)}), DomainError);
    EXPECT_THROW(LayerStack<double>({-1.0}, {cd(1, 0), cd(2, 0)}), DomainError);
    EXPECT_THROW(LayerStack<double>({1.0, 0.5}, {cd(1, 0), cd(2, 0), cd(3, 0)}), DomainError);
    EXPECT_THROW(LayerStack<double>({1.0}, {cd(1, 0), cd(0, 0)}), DomainError);
}

TEST(Stack, LayerLookup) {
    const LayerStack<double> s({1.0, 2.0}, {cd(1, 0), cd(2, 0), cd(3, 0)});
    EXPECT_EQ(s.layer_of(0.5), 0u);
    EXPECT_EQ(s.layer_of(1.0), 0u);
    EXPECT_EQ(s.layer_of(1.5), 1u);
    EXPECT_EQ(s.layer_of(2.0), 1u);
    EXPECT_EQ(s.layer_of(7.0), 2u);
}

TEST(Fields, OriginRejected) {
    const LayerStack<double> s({1.0}, {cd(1, 0), cd(2, 0)});
    const auto c = coefficients(s, 1.0);
    EXPECT_THROW(field_in_layer(s, c, 0.0, 0.3, 1.0), DomainError);
}

TEST(Coefficients, BadGeometryRejected) {
    EXPECT_THROW(coeffs_two_layer(cd(1, 0), cd(2, 0), 0.0, 1.0), DomainError);
    EXPECT_THROW(coeffs_three_layer(cd(1, 0), cd(2, 0), cd(1, 0), 1.0, 0.5, 1.0), DomainError);
}
