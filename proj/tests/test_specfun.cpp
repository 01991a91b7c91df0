#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

#include "onsager/specfun.hpp"
#include "support.hpp"

using namespace onsager::specfun;
using testing_support::cd;
using testing_support::rel;

namespace {

// j1(z) = sum_k (-1)^k (2k+2) z^(2k+1) / (2k+3)!
cd j1_taylor(cd z, int terms = 50) {
    cd sum = 0;
    cd zpow = z;
    double fact = 6.0;  // 3!
    for (int k = 0; k < terms; ++k) {
        sum += (k % 2 == 0 ? 1.0 : -1.0) * (2.0 * k + 2.0) * zpow / fact;
        zpow *= z * z;
        fact *= (2.0 * k + 4.0) * (2.0 * k + 5.0);
    }
    return sum;
}

// y1 from trigonometric functions, independent of the exponential form.
// [z j1]'/z = j0 - j1/z = sum_k (-1)^k z^(2k) [1/(2k+1)! - (2k+2)/(2k+3)!]
cd riccati_j1_over_z_taylor(cd z, int terms = 50) {
    cd sum = 0;
    cd zpow = 1;
    double f1 = 1.0;  // (2k+1)!
    for (int k = 0; k < terms; ++k) {
        const double f3 = f1 * (2.0 * k + 2.0) * (2.0 * k + 3.0);
        sum += (k % 2 == 0 ? 1.0 : -1.0) * zpow * (1.0 / f1 - (2.0 * k + 2.0) / f3);
        zpow *= z * z;
        f1 = f3;
    }
    return sum;
}

cd y1_trig(cd z) { return -std::cos(z) / (z * z) - std::sin(z) / z; }

cd fd(auto f, cd z, double h = 1e-6) { return (f(z + h) - f(z - h)) / (2.0 * h); }

}  // namespace

TEST(SphericalBessel, MatchesTaylorSeriesOffAxis) {
    const cd z(1.0, 0.5);
    EXPECT_LT(rel(sph_j1(z), j1_taylor(z)), 1e-14);
}

TEST(SphericalBessel, MatchesTaylorSeriesInsideSeriesDisc) {
    for (cd z : {cd(0.3, 0.1), cd(-0.2, 0.25), cd(1e-3, 1e-3)}) {
        EXPECT_LT(rel(sph_j1(z), j1_taylor(z)), 1e-14) << z;
    }
}

TEST(SphericalBessel, ValueAtHalfPi) {
    const cd v = sph_j1(cd(std::numbers::pi / 2, 0));
    EXPECT_NEAR(v.real(), 4.0 / (std::numbers::pi * std::numbers::pi), 1e-15);
    EXPECT_EQ(v.imag(), 0.0);
}

TEST(SphericalBessel, LimitsAtOrigin) {
    EXPECT_EQ(sph_j1(cd(0, 0)), cd(0, 0));
    EXPECT_EQ(sph_j1_over_z(cd(0, 0)), cd(1.0 / 3.0, 0));
    EXPECT_NEAR(std::abs(riccati_j1_over_z(cd(0, 0)) - 2.0 / 3.0), 0.0, 2e-16);
    for (double phase : {0.0, 0.7, 2.0}) {
        const cd z = std::polar(1e-8, phase);
        EXPECT_NEAR(std::abs(sph_j1_over_z(z) - 1.0 / 3.0), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(riccati_j1_over_z(z) - 2.0 / 3.0), 0.0, 1e-15);
    }
}

TEST(SphericalBessel, AccurateOnBothSidesOfSeriesSwitch) {
    for (double phase : {0.0, 1.0, 2.5}) {
        for (double scale : {1 - 1e-12, 1 + 1e-12}) {
            const cd z = std::polar(kSeriesRadius * scale, phase);
            EXPECT_LT(rel(riccati_j1_over_z(z), riccati_j1_over_z_taylor(z)), 1e-14) << z;
            EXPECT_LT(rel(sph_j1(z), j1_taylor(z)), 1e-14) << z;
        }
    }
}

TEST(Hankel, ClosedFormsAgainstTrigonometricOracle) {
    for (cd z : {cd(1, 0), cd(2, 1), cd(0.4, 0.3), cd(7.5, 0.2)}) {
        const cd j = j1_taylor(z, 80);
        const cd y = y1_trig(z);
        const cd i(0, 1);
        EXPECT_LT(rel(sph_h1_1(z), j + i * y), 1e-12) << z;
        EXPECT_LT(rel(sph_h2_1(z), j - i * y), 1e-12) << z;
        EXPECT_LT(rel(sph_h1_0(z), std::sin(z) / z - i * std::cos(z) / z), 1e-14) << z;
    }
}

TEST(Hankel, RealArgumentConjugation) {
    for (double x : {0.1, 1.0, 3.7, 25.0}) {
        EXPECT_LT(rel(sph_h2_1(cd(x, 0)), std::conj(sph_h1_1(cd(x, 0)))), 1e-15);
    }
}

TEST(Hankel, WronskianOnSampledPoints) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> logr(std::log(0.05), std::log(30.0)), ph(-0.5, 3.6);
    for (int n = 0; n < 300; ++n) {
        const cd z = std::polar(std::exp(logr(rng)), ph(rng));
        if (std::abs(z.imag()) > 25) continue;
        const cd w = sph_h1_1(z) * derivative(Kind::h2, z) - sph_h2_1(z) * derivative(Kind::h1, z);
        EXPECT_LT(rel(w, cd(0, -2) / (z * z)), 1e-10) << z;
    }
}

TEST(Hankel, WronskianNearOriginWithinConditioning) {
    // h1 h2' and h2 h1' are O(|z|^-5) and cancel to O(|z|^-2): the achievable
    // relative accuracy is about eps / |z|^3 for a complex argument.
    for (double r : {1e-3, 3e-3, 1e-2, 3e-2}) {
        for (double phase : {0.3, 1.2, 2.9}) {
            const cd z = std::polar(r, phase);
            const cd w = sph_h1_1(z) * derivative(Kind::h2, z) - sph_h2_1(z) * derivative(Kind::h1, z);
            const double bound = 100 * std::numeric_limits<double>::epsilon() / (r * r * r);
            EXPECT_LT(rel(w, cd(0, -2) / (z * z)), bound) << z;

            using LD = long double;
            const std::complex<LD> zl(z.real(), z.imag());
            const auto wl = sph_h1_1(zl) * derivative(Kind::h2, zl) - sph_h2_1(zl) * derivative(Kind::h1, zl);
            const auto el = std::complex<LD>(0, -2) / (zl * zl);
            EXPECT_LT(static_cast<double>(std::abs(wl - el) / std::abs(el)), 1e-9) << z;
        }
    }
}

TEST(Hankel, SumIsTwiceBessel) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> re(0.05, 20.0), im(-3.0, 3.0);
    for (int n = 0; n < 200; ++n) {
        const cd z(re(rng), im(rng));
        EXPECT_LT(rel(sph_h1_1(z) + sph_h2_1(z), 2.0 * sph_j1(z)), 1e-12) << z;
    }
}

TEST(Riccati, BesselMatchesFiniteDifference) {
    for (cd z : {cd(0.2, 0.1), cd(1, 0.5), cd(3, -0.4), cd(6, 2)}) {
        const cd num = fd([](cd x) { return x * sph_j1(x); }, z);
        EXPECT_LT(rel(riccati_deriv(Kind::j1, z), num), 1e-6) << z;
        EXPECT_LT(rel(riccati_deriv(Kind::j1, z), z * sph_j0(z) - sph_j1(z)), 1e-13) << z;
    }
}

TEST(Riccati, HankelMatchesFiniteDifference) {
    const cd z(2, 1);
    EXPECT_LT(rel(riccati_deriv(Kind::h1, z), fd([](cd x) { return x * sph_h1_1(x); }, z)), 1e-6);
    EXPECT_LT(rel(riccati_deriv(Kind::h2, z), fd([](cd x) { return x * sph_h2_1(x); }, z)), 1e-6);
}

TEST(Riccati, PlainDerivativeMatchesFiniteDifference) {
    const cd z(1.3, 0.6);
    EXPECT_LT(rel(derivative(Kind::j1, z), fd([](cd x) { return sph_j1(x); }, z)), 1e-6);
    EXPECT_LT(rel(derivative(Kind::h1, z), fd([](cd x) { return sph_h1_1(x); }, z)), 1e-6);
}

TEST(Errors, HankelPoleAtOrigin) {
    EXPECT_THROW(sph_h1_0(cd(0, 0)), onsager::DomainError);
    EXPECT_THROW(sph_h1_1(cd(0, 0)), onsager::DomainError);
    EXPECT_THROW(sph_h2_1(cd(0, 0)), onsager::DomainError);
    EXPECT_THROW(riccati_deriv(Kind::h1, cd(0, 0)), onsager::DomainError);
    EXPECT_NO_THROW(riccati_deriv(Kind::j1, cd(0, 0)));
}

TEST(Errors, OverflowGuard) {
    EXPECT_THROW(sph_h1_1(cd(1, 701)), onsager::OverflowError);
    EXPECT_THROW(sph_h2_1(cd(1, -701)), onsager::OverflowError);
    EXPECT_THROW(sph_j1(cd(1, 800)), onsager::OverflowError);
    EXPECT_NO_THROW(sph_h1_1(cd(1, 699)));
}
