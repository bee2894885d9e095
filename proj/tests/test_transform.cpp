#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "leray/nonlinear.hpp"
#include "leray/transform.hpp"
#include "oracles.hpp"

using namespace leray;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::size_t flat(int m, int i1, int i2, int i3) { return (std::size_t(i1) * m + i2) * m + i3; }

}  // namespace

TEST(Transform, FftFriendlySizes) {
    EXPECT_EQ(fft_friendly_size(17), 18);
    EXPECT_EQ(fft_friendly_size(11), 12);
    EXPECT_EQ(fft_friendly_size(49), 49);
    EXPECT_EQ(fft_friendly_size(22), 24);
    EXPECT_EQ(product_grid(16), 49);
    EXPECT_EQ(product_grid(8), 25);
}

TEST(Transform, SingleModeIsCosine) {
    SpectralField u(3);
    u.set({1, 0, 0}, {Complex(0), Complex(0.5), Complex(0)});
    const int m = 8;
    const auto f = to_physical(u, m);
    for (int i1 = 0; i1 < m; ++i1)
        for (int i2 = 0; i2 < m; ++i2)
            for (int i3 = 0; i3 < m; ++i3) {
                const std::size_t j = flat(m, i1, i2, i3);
                EXPECT_NEAR(f.comp[0][j], 0.0, 1e-15);
                EXPECT_NEAR(f.comp[1][j], std::cos(two_pi * i1 / m), 1e-15);
                EXPECT_NEAR(f.comp[2][j], 0.0, 1e-15);
            }
}

TEST(Transform, MatchesDirectEvaluationAndIsReal) {
    const auto u = random_field(3, 17, 1.0);
    const int m = 7;
    const auto f = to_physical(u, m);
    for (int i1 = 0; i1 < m; i1 += 2)
        for (int i2 = 0; i2 < m; i2 += 3)
            for (int i3 = 0; i3 < m; ++i3) {
                const auto ref = oracle::evaluate(u, two_pi * i1 / m, two_pi * i2 / m, two_pi * i3 / m);
                for (int d = 0; d < 3; ++d) {
                    EXPECT_NEAR(f.comp[d][flat(m, i1, i2, i3)], ref[d].real(), 1e-12);
                    EXPECT_LE(std::abs(ref[d].imag()), 1e-12 * (1.0 + std::abs(ref[d].real())));
                }
            }
}

TEST(Transform, RoundTrip) {
    for (int n : {1, 4, 7}) {
        const auto u = random_field(n, 3 + n, 0.5);
        for (int m : {minimum_grid(n), quadrature_grid(n), product_grid(n)}) {
            const auto back = to_spectral(to_physical(u, m), n);
            EXPECT_LE(sobolev_norm(back - u, 0.0), 1e-12 * sobolev_norm(u, 0.0)) << "n=" << n << " m=" << m;
        }
    }
}

TEST(Transform, ZeroFieldAndErrors) {
    const auto f = to_physical(SpectralField(4), 10);
    for (const auto& c : f.comp)
        for (double x : c)
            EXPECT_EQ(x, 0.0);
    EXPECT_THROW(to_physical(SpectralField(4), 8), std::invalid_argument);
    PhysicalField bad(9);
    bad.comp[1][5] = std::nan("");
    EXPECT_THROW(to_spectral(bad, 4), std::invalid_argument);
    for (double p : {1.0, 2.0, 6.0, std::numeric_limits<double>::infinity()})
        EXPECT_EQ(lp_norm(SpectralField(4), p), 0.0);
    EXPECT_THROW(lp_norm(f, 0.5), std::invalid_argument);
}

TEST(LpNorm, ParsevalAndCosine) {
    SpectralField u(2);
    u.set({1, 0, 0}, {Complex(0), Complex(0.5), Complex(0)});
    // ∫ cos² x₁ over [0,2π]³ = 4π³.
    EXPECT_NEAR(lp_norm(u, 2.0), std::sqrt(4.0 * std::pow(std::numbers::pi, 3)), 1e-12);
    EXPECT_NEAR(lp_norm(u, std::numeric_limits<double>::infinity()), 1.0, 1e-15);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto v = random_field(5, seed, 1.0);
        EXPECT_NEAR(lp_norm(v, 2.0) / (std::pow(two_pi, 1.5) * sobolev_norm(v, 0.0)), 1.0, 1e-12);
    }
}

TEST(LpNorm, EmbeddingRatioFiniteAndStable) {
    // ‖u‖_{L⁶} / ‖Λu‖_{L²} (both with Lebesgue measure) over random fields.
    std::vector<double> worst;
    for (int n : {4, 8}) {
        double w = 0.0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const auto u = random_field(n, seed, 0.5 + 0.5 * double(seed % 4));
            const double ratio = lp_norm(u, 6.0) / lp_norm(fractional_laplacian(u, 1.0), 2.0);
            ASSERT_TRUE(std::isfinite(ratio));
            w = std::max(w, ratio);
        }
        worst.push_back(w);
    }
    EXPECT_GT(worst[0], 0.0);
    EXPECT_LT(worst[1] / worst[0], 2.0);
    EXPECT_GT(worst[1] / worst[0], 0.5);
}
