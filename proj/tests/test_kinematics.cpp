#include <gtest/gtest.h>

#include <random>

#include <metaslab/kinematics.hpp>

using namespace metaslab;

TEST(Wavenumber, PositiveMassLead) {
    const auto k = wavenumber(0.2, Layer{0.4, 0.0, 0.0});
    EXPECT_EQ(k.regime, Regime::propagating);
    EXPECT_NEAR(k.value.real(), 1.449051, 2e-6);
    EXPECT_EQ(k.value.imag(), 0.0);
}

TEST(Wavenumber, NegativeMassBelowBarrierPropagatesOnNegativeBranch) {
    const auto k = wavenumber(0.2, Layer{-0.02, 0.5, 5.0});
    EXPECT_EQ(k.regime, Regime::propagating);
    EXPECT_NEAR(k.value.real(), -0.396840, 2e-6);
}

TEST(Wavenumber, CriticalAtBarrierTop) {
    const auto k = wavenumber(0.5, Layer{-0.02, 0.5, 5.0});
    EXPECT_EQ(k.regime, Regime::critical);
    EXPECT_EQ(k.value, cplx(0.0, 0.0));
}

TEST(Wavenumber, NegativeMassAboveBarrierIsEvanescent) {
    const auto k = wavenumber(0.7, Layer{-0.02, 0.5, 5.0});
    EXPECT_EQ(k.regime, Regime::evanescent);
    EXPECT_EQ(k.value.real(), 0.0);
    EXPECT_GT(k.value.imag(), 0.0);
}

TEST(Wavenumber, RejectsZeroMass) {
    EXPECT_THROW(wavenumber(0.1, Layer{0.0, 0.0, 1.0}), DomainError);
}

TEST(Wavenumber, Properties) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> mag(0.01, 1.0), pot(0.0, 1.0), energy(-0.5, 1.5);
    std::bernoulli_distribution sign;
    const double c0 = constants().hbar_sq_over_2m0;
    for (int i = 0; i < 2000; ++i) {
        const Layer l{sign(rng) ? mag(rng) : -mag(rng), pot(rng), 1.0};
        const double e = energy(rng);
        if (e == l.potential) continue;
        const auto k = wavenumber(e, l);
        // Propagation rule flips with the sign of the mass.
        const bool below = e < l.potential;
        const bool expect_prop = l.mass < 0 ? below : !below;
        EXPECT_EQ(k.propagating(), expect_prop);
        if (k.propagating()) {
            EXPECT_EQ(k.value.imag(), 0.0);
            // J = hbar k |A|^2 / m > 0 for a forward wave of either mass sign.
            EXPECT_GT(k.value.real() / l.mass, 0.0);
        } else {
            EXPECT_EQ(k.value.real(), 0.0);
            EXPECT_GT(k.value.imag(), 0.0);
        }
        const double kinetic = std::norm(k.value) * c0 / std::abs(l.mass);
        EXPECT_NEAR(kinetic / std::abs(e - l.potential), 1.0, 1e-12);
    }
}
