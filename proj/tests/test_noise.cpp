#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "leray/noise.hpp"

using namespace leray;

namespace {

std::vector<double> draws(const WienerStream& s, std::size_t count, double dt) {
    std::vector<double> out;
    out.reserve(count);
    for (std::uint64_t step = 0; out.size() < count; ++step)
        for (double v : wiener_increment(s, step, dt, 4).values)
            if (out.size() < count)
                out.push_back(v);
    return out;
}

double mean(const std::vector<double>& x) { return std::accumulate(x.begin(), x.end(), 0.0) / double(x.size()); }

ModelContext context(int n) { return ModelContext(ModelParameters{1.0, 1.0, 1.0, 1.0, n}); }

}  // namespace

TEST(Wiener, MomentsOfIncrements) {
    const double dt = 0.01;
    const std::size_t count = 100000;
    const auto x = draws({12345, 0}, count, dt);
    const double m = mean(x);
    EXPECT_LE(std::abs(m), 4.0 * std::sqrt(dt / double(count)));
    double var = 0.0;
    for (double v : x)
        var += (v - m) * (v - m);
    var /= double(count - 1);
    EXPECT_NEAR(var / dt, 1.0, 0.05);
}

TEST(Wiener, DeterministicAndIndependentStreams) {
    const auto a = wiener_increment({7, 3}, 11, 0.1, 5);
    const auto b = wiener_increment({7, 3}, 11, 0.1, 5);
    EXPECT_EQ(a.values, b.values);
    EXPECT_NE(a.values, wiener_increment({7, 4}, 11, 0.1, 5).values);
    EXPECT_NE(a.values, wiener_increment({7, 3}, 12, 0.1, 5).values);
    EXPECT_NE(a.values, wiener_increment({8, 3}, 11, 0.1, 5).values);
    // seeds differing only in the upper 32 bits are distinct streams
    EXPECT_NE(wiener_increment({1, 0}, 0, 1.0, 1).values, wiener_increment({1 + (1ull << 32), 0}, 0, 1.0, 1).values);
    EXPECT_THROW(wiener_increment({1, 0}, 0, 0.0, 1), std::invalid_argument);

    const std::size_t count = 100000;
    const auto x = draws({99, 0}, count, 1.0), y = draws({99, 1}, count, 1.0);
    const double mx = mean(x), my = mean(y);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < count; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    EXPECT_LT(std::abs(sxy / std::sqrt(sxx * syy)), 4.0 / std::sqrt(double(count)));
}

TEST(NoiseFamily, Validation) {
    EXPECT_THROW(NoiseFamily::linear_multiplicative(-1.0), std::invalid_argument);
    EXPECT_THROW(NoiseFamily::additive({{{0, 0, 0}, 0, false, 1.0}}), std::invalid_argument);
    EXPECT_THROW(NoiseFamily::additive({{{1, 0, 0}, 2, false, 1.0}}), std::invalid_argument);
    EXPECT_THROW(NoiseFamily::additive({{{1, 0, 0}, 0, false, 1.0}, {{-1, 0, 0}, 0, false, 2.0}}),
                 std::invalid_argument);
    EXPECT_NO_THROW(NoiseFamily::additive({{{1, 0, 0}, 0, false, 1.0}, {{1, 0, 0}, 0, true, 1.0}}));
    const auto f = NoiseFamily::diagonal_spectral({{{-1, 2, -3}, 0, false, 0.5}});
    EXPECT_EQ(f.drivers()[0].k, (WaveIndex{1, -2, 3}));
    EXPECT_EQ(f.required_truncation(), 3);
    EXPECT_THROW(apply_noise(f, SpectralField(2), {1.0, {0.1}}), std::invalid_argument);
    EXPECT_THROW(apply_noise(NoiseFamily::linear_multiplicative(1), SpectralField(2), {1.0, {0.1, 0.2}}),
                 std::invalid_argument);
}

TEST(ApplyNoise, LinearMultiplicativeScales) {
    const auto u = random_field(4, 1, 1.0);
    const auto f = NoiseFamily::linear_multiplicative(0.3);
    const auto out = apply_noise(f, u, {0.01, {-0.7}});
    EXPECT_TRUE(out == (0.3 * -0.7) * u);
}

TEST(ApplyNoise, ZeroAmplitudeAndDisjointSupport) {
    const auto u = random_field(3, 2, 1.0);
    const auto add = NoiseFamily::additive(additive_decay_drivers(6, 0.0, 0.0));
    EXPECT_EQ(sobolev_norm(apply_noise(add, u, wiener_increment({1, 0}, 0, 0.1, 6)), 0.0), 0.0);
    const auto v = single_mode_field(3, {2, 1, 0}, 0, 1.0);
    const auto diag = NoiseFamily::diagonal_spectral(spectral_decay_drivers(6, 1.0, 0.0));
    EXPECT_EQ(sobolev_norm(apply_noise(diag, v, wiener_increment({1, 0}, 0, 0.1, 6)), 0.0), 0.0);
}

TEST(ApplyNoise, LinearInIncrement) {
    const auto u = random_field(4, 3, 1.0);
    for (const auto& fam : {NoiseFamily::linear_multiplicative(0.4),
                            NoiseFamily::additive(additive_decay_drivers(10, 0.5, 1.0)),
                            NoiseFamily::diagonal_spectral(spectral_decay_drivers(10, 0.5, 1.0))}) {
        const std::size_t d = fam.dimension();
        const auto w1 = wiener_increment({5, 0}, 0, 0.1, d), w2 = wiener_increment({5, 0}, 1, 0.1, d);
        WienerIncrement combo{0.1, std::vector<double>(d)};
        for (std::size_t j = 0; j < d; ++j)
            combo.values[j] = 2.0 * w1.values[j] - 0.5 * w2.values[j];
        const auto lhs = apply_noise(fam, u, combo);
        const auto rhs = 2.0 * apply_noise(fam, u, w1) - 0.5 * apply_noise(fam, u, w2);
        EXPECT_LE(sobolev_norm(lhs - rhs, 0.0), 1e-15 * (1.0 + sobolev_norm(rhs, 0.0)));
        // column sum reproduces the full application
        SpectralField cols(u.lattice_ptr());
        for (std::size_t j = 0; j < d; ++j)
            cols += w1.values[j] * noise_column(fam, u, j);
        EXPECT_LE(sobolev_norm(cols - apply_noise(fam, u, w1), 0.0), 1e-15 * (1.0 + sobolev_norm(cols, 0.0)));
    }
}

TEST(ApplyNoise, RangeIsSolenoidal) {
    const auto u = random_field(4, 8, 1.0);
    for (const auto& fam : {NoiseFamily::linear_multiplicative(0.4),
                            NoiseFamily::additive(additive_decay_drivers(40, 1.0, 0.5)),
                            NoiseFamily::diagonal_spectral(spectral_decay_drivers(40, 1.0, 0.5))}) {
        const auto g = apply_noise(fam, u, wiener_increment({1, 2}, 3, 1.0, fam.dimension()));
        EXPECT_LE(divergence_defect(g), 1e-14);
        for (std::size_t j = 0; j < fam.dimension(); ++j)
            EXPECT_LE(divergence_defect(noise_column(fam, u, j)), 1e-14);
    }
}

TEST(HsNorm, ClosedForms) {
    const auto u = random_field(4, 4, 1.0);
    const auto lm = NoiseFamily::linear_multiplicative(0.3);
    EXPECT_NEAR(hs_norm_sq(lm, u, 0.0), 0.09 * sobolev_norm_sq(u, 0.0), 1e-15);
    EXPECT_NEAR(hs_norm_sq(lm, u, 1.0), 0.09 * sobolev_norm_sq(u, 1.0), 1e-14);

    const auto add = NoiseFamily::additive(additive_decay_drivers(30, 0.8, 1.0));
    for (double s : {0.0, 1.0}) {
        double ref = 0.0;
        for (std::size_t j = 0; j < add.dimension(); ++j)
            ref += sobolev_norm_sq(noise_column(add, u, j), s);
        EXPECT_NEAR(hs_norm_sq(add, u, s), ref, 1e-13 * ref);
        EXPECT_EQ(hs_norm_sq(add, u, s), hs_norm_sq(add, random_field(4, 99, 0.5), s));
    }
    const auto diag = NoiseFamily::diagonal_spectral(spectral_decay_drivers(30, 0.8, 0.5));
    for (double s : {0.0, 1.0}) {
        double ref = 0.0;
        for (std::size_t j = 0; j < diag.dimension(); ++j)
            ref += sobolev_norm_sq(noise_column(diag, u, j), s);
        EXPECT_NEAR(hs_norm_sq(diag, u, s), ref, 1e-13 * ref);
    }
}

TEST(DecayDrivers, EnumerationOrder) {
    const auto d = additive_decay_drivers(6, 2.0, 1.0);
    ASSERT_EQ(d.size(), 6u);
    EXPECT_EQ(d[0].k, d[3].k);
    EXPECT_EQ(d[0].polarization, 0);
    EXPECT_FALSE(d[0].sine);
    EXPECT_TRUE(d[1].sine);
    EXPECT_EQ(d[2].polarization, 1);
    EXPECT_EQ(d[0].k.norm_sq(), 1);
    EXPECT_DOUBLE_EQ(d[0].amplitude, 2.0);
    const auto s = spectral_decay_drivers(10, 1.0, 2.0);
    for (std::size_t j = 1; j < s.size(); ++j)
        EXPECT_LE(s[j - 1].k.norm_sq(), s[j].k.norm_sq());
    EXPECT_DOUBLE_EQ(s.back().amplitude, 1.0 / double(s.back().k.norm_sq()));
}

TEST(Audit, LinearMultiplicative) {
    const auto r = audit_hypotheses(NoiseFamily::linear_multiplicative(0.5), context(4), 8, 1);
    EXPECT_LE(r.growth_l2, 0.25);
    EXPECT_LE(r.growth_h1, 0.25);
    EXPECT_NEAR(r.lipschitz, 0.5, 1e-14);
    EXPECT_GT(r.growth_l2, 0.24);  // approaches σ² at large norms
    EXPECT_FALSE(r.growth_unbounded);
    EXPECT_FALSE(r.lipschitz_unbounded);
    EXPECT_TRUE(r.within_bounds);
}

TEST(Audit, AdditiveHasZeroLipschitz) {
    const auto fam = NoiseFamily::additive(additive_decay_drivers(12, 1.0, 1.0));
    const auto r = audit_hypotheses(fam, context(4), 8, 2);
    EXPECT_EQ(r.lipschitz, 0.0);
    EXPECT_TRUE(r.within_bounds);
    EXPECT_FALSE(r.growth_unbounded);
    std::ostringstream os;
    print_audit(os, r);
    EXPECT_NE(os.str().find("within closed-form bounds: yes"), std::string::npos);
}

TEST(Audit, DiagonalSpectralBoundedByMaxAmplitude) {
    std::vector<DriverMode> drivers = spectral_decay_drivers(20, 1.0, 0.0);
    double top = 0.0;
    for (std::size_t j = 0; j < drivers.size(); ++j) {
        drivers[j].amplitude = 0.1 + 0.03 * double(j % 7);
        top = std::max(top, drivers[j].amplitude);
    }
    const auto r = audit_hypotheses(NoiseFamily::diagonal_spectral(drivers), context(4), 8, 3);
    EXPECT_LE(r.growth_l2, top * top * (1 + 1e-12));
    EXPECT_LE(r.lipschitz, top * (1 + 1e-12));
    EXPECT_TRUE(r.within_bounds);
    EXPECT_THROW(audit_hypotheses(NoiseFamily::linear_multiplicative(1.0), context(4), 1, 3), std::invalid_argument);
}
