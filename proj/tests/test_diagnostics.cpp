#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "leray/diagnostics.hpp"
#include "leray/ensemble.hpp"

using namespace leray;

namespace {

RunConfig deterministic_config(double dt, bool nonlinear) {
    RunConfig cfg;
    cfg.ctx = ModelContext(ModelParameters{0.2, 1.0, 1.0, 1.0, 5});
    cfg.dt = dt;
    cfg.horizon = 0.5;
    cfg.nonlinear = nonlinear;
    cfg.initial.slope = 1.5;
    cfg.initial.amplitude = 1.0;
    return cfg;
}

RunConfig ou_config(double dt, double horizon) {
    RunConfig cfg;
    cfg.ctx = ModelContext(ModelParameters{1.0, 1.0, 1.0, 1.0, 2});
    cfg.dt = dt;
    cfg.horizon = horizon;
    cfg.nonlinear = false;
    cfg.initial.kind = InitialKind::zero;
    cfg.noise = NoiseFamily::additive({{{1, 0, 0}, 0, false, 1.0}});
    return cfg;
}

std::vector<double> final_energies(const std::vector<TrajectoryRecord>& recs) {
    std::vector<double> out;
    for (const auto& r : recs)
        out.push_back(r.norm_l2.back() * r.norm_l2.back());
    return out;
}

}  // namespace

TEST(Jackknife, MeanStandardErrorMatchesClassicalFormula) {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 10.0};
    const auto e = jackknife_mean(x);
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / 5.0;
    double s2 = 0.0;
    for (double v : x)
        s2 += (v - m) * (v - m);
    s2 /= 4.0;
    EXPECT_DOUBLE_EQ(e.mean, 4.0);
    EXPECT_NEAR(e.se, std::sqrt(s2 / 5.0), 1e-14);
    const std::vector<double> one{3.5};
    EXPECT_EQ(jackknife_mean(one).se, 0.0);
    EXPECT_THROW(jackknife_mean(std::span<const double>{}), std::invalid_argument);
}

TEST(EnergyLedger, DeterministicResidualIsFirstOrder) {
    for (bool nonlinear : {false, true}) {
        const auto r1 = run_trajectory(deterministic_config(0.01, nonlinear));
        const auto r2 = run_trajectory(deterministic_config(0.005, nonlinear));
        const double a = integrated_abs_residual(energy_ledger(r1)), b = integrated_abs_residual(energy_ledger(r2));
        EXPECT_GT(a, 0.0);
        EXPECT_GE(a / b, 1.7) << "nonlinear=" << nonlinear;
        EXPECT_LE(a / b, 2.3) << "nonlinear=" << nonlinear;
        const double ah = integrated_abs_residual(energy_ledger(r1, LedgerNorm::h1));
        const double bh = integrated_abs_residual(energy_ledger(r2, LedgerNorm::h1));
        EXPECT_GE(ah / bh, 1.7);
        EXPECT_LE(ah / bh, 2.3);
    }
}

TEST(EnergyLedger, TransferVanishesInL2) {
    const auto rec = run_trajectory(deterministic_config(0.01, true));
    double l2 = 0.0, h1 = 0.0;
    for (const auto& t : rec.terms) {
        l2 = std::max(l2, std::abs(t.transfer_l2));
        h1 = std::max(h1, std::abs(t.transfer_h1));
    }
    EXPECT_LE(l2, 1e-14);
    EXPECT_GT(h1, 1e-8);
}

TEST(EnergyLedger, SingleModeDissipationFormula) {
    RunConfig cfg;
    cfg.ctx = ModelContext(ModelParameters{0.4, 1.0, 1.0, 1.25, 3});
    cfg.dt = 0.01;
    cfg.horizon = 0.2;
    cfg.initial.kind = InitialKind::single_mode;
    cfg.initial.mode = {1, 2, 0};
    const auto rec = run_trajectory(cfg);
    const auto ledger = energy_ledger(rec);
    ASSERT_EQ(ledger.size(), 20u);
    for (std::size_t i = 0; i < ledger.size(); ++i) {
        const double expected = 2.0 * 0.4 * std::pow(5.0, 1.25) * rec.norm_l2[i] * rec.norm_l2[i] * 0.01;
        EXPECT_NEAR(ledger[i].dissipation, expected, 1e-15 * expected + 1e-300);
        EXPECT_EQ(ledger[i].injection, 0.0);
        EXPECT_EQ(ledger[i].martingale, 0.0);
    }
}

TEST(EnergyLedger, LinearMultiplicativeInjection) {
    RunConfig cfg = deterministic_config(0.01, true);
    cfg.noise = NoiseFamily::linear_multiplicative(0.3);
    const auto rec = run_trajectory(cfg);
    const auto ledger = energy_ledger(rec);
    for (std::size_t i = 0; i < ledger.size(); ++i) {
        const double expected = 0.09 * rec.norm_l2[i] * rec.norm_l2[i] * 0.01;
        EXPECT_NEAR(ledger[i].injection, expected, 1e-14 * expected);
        EXPECT_NE(ledger[i].martingale, 0.0);
        const double closure = ledger[i].kinetic - rec.norm_l2[i] * rec.norm_l2[i] + ledger[i].dissipation -
                               ledger[i].injection - ledger[i].martingale - ledger[i].transfer;
        EXPECT_NEAR(closure, ledger[i].residual, 1e-15);
    }
    EXPECT_NEAR(rec.injection_cum.back(),
                std::accumulate(ledger.begin(), ledger.end(), 0.0,
                                [](double a, const EnergyLedgerEntry& e) { return a + e.injection; }),
                1e-14);
}

TEST(EnergyLedger, ExpectedBalanceForLinearAdditiveSystem) {
    const auto cfg = ou_config(0.01, 1.0);
    const auto recs = run_ensemble(cfg, 256, 1);
    std::vector<double> drift, mart;
    for (const auto& r : recs) {
        double d = 0.0, m = 0.0;
        for (const auto& e : energy_ledger(r)) {
            d += e.residual + e.martingale;  // Δ‖u‖² + dissipation - injection
            m += e.martingale;
        }
        drift.push_back(d);
        mart.push_back(m);
    }
    const auto dm = jackknife_mean(drift), mm = jackknife_mean(mart);
    EXPECT_LE(std::abs(dm.mean), 4.0 * mm.se);
    EXPECT_LE(std::abs(mm.mean), 4.0 * mm.se);
}

TEST(EnsembleMoments, DegenerateEnsembleHasZeroError) {
    const auto cfg = deterministic_config(0.01, true);
    const auto recs = run_ensemble(cfg, 8, 2);
    const auto s = ensemble_moments(recs, 3.0);
    EXPECT_EQ(s.trajectories, 8u);
    EXPECT_EQ(s.sup_l2_p.se, 0.0);
    EXPECT_EQ(s.sup_h1_p.se, 0.0);
    EXPECT_EQ(s.dissipation_l2.se, 0.0);
    EXPECT_EQ(s.final_energy.se, 0.0);
    const auto single = ensemble_moments(std::span(recs.data(), 1), 3.0);
    EXPECT_DOUBLE_EQ(s.sup_l2_p.mean, single.sup_l2_p.mean);
    EXPECT_DOUBLE_EQ(s.dissipation_h1.mean, single.dissipation_h1.mean);
    EXPECT_DOUBLE_EQ(s.sup_l2_p.mean, std::pow(recs[0].norm_l2.front(), 3.0));  // decaying energy
    // p = 2: ∫ ‖u‖²_{θ₂} dt is the recorded trapezoidal integral
    EXPECT_NEAR(ensemble_moments(recs, 2.0).dissipation_l2.mean, recs[0].int_diss_theta2.back(), 1e-14);
}

TEST(EnsembleMoments, Rejections) {
    const auto a = run_trajectory(deterministic_config(0.01, false));
    auto cfg = deterministic_config(0.01, false);
    cfg.seed = 2;
    const std::vector<TrajectoryRecord> mixed{a, run_trajectory(cfg)};
    EXPECT_THROW(ensemble_moments(mixed, 2.0), std::invalid_argument);
    const std::vector<TrajectoryRecord> one{a};
    EXPECT_THROW(ensemble_moments(one, 1.5), std::invalid_argument);
    EXPECT_THROW(ensemble_moments(std::span<const TrajectoryRecord>{}, 2.0), std::invalid_argument);
}

TEST(EnsembleMoments, StandardErrorScalesWithSize) {
    const auto cfg = ou_config(0.05, 2.0);
    const auto recs = run_ensemble(cfg, 1024, 1);
    const auto energies = final_energies(recs);
    const auto small = jackknife_mean(std::span(energies).first(512));
    const auto all = ensemble_moments(recs, 2.0).final_energy;
    const double ratio = all.se / small.se;
    EXPECT_GE(ratio, 0.6);
    EXPECT_LE(ratio, 0.82);
}

TEST(Theorem44Exponent, CaseSplit) {
    EXPECT_EQ(theorem44_exponent(0.0, 1.5), 6.0);
    EXPECT_EQ(theorem44_exponent(1.0, 1.0), 3.0);
    EXPECT_THROW(theorem44_exponent(0.0, 1.25), std::invalid_argument);
    EXPECT_THROW(theorem44_exponent(0.25, 1.0), std::invalid_argument);
    EXPECT_THROW(theorem44_exponent(1.0, 0.0), std::invalid_argument);
}

TEST(Theorem44Exponent, FiniteAndDecreasingOnFirstBranch) {
    for (double th2 = 0.05; th2 < 2.5; th2 += 0.05) {
        double prev = std::numeric_limits<double>::infinity();
        for (double th1 = 0.0; th1 < 2.5; th1 += 0.01) {
            if (!(th1 + th2 > 1.25))
                continue;
            const double m = theorem44_exponent(th1, th2);
            ASSERT_TRUE(std::isfinite(m));
            EXPECT_GT(m, 1.0);
            if (th1 + 0.5 * th2 < 1.25) {
                EXPECT_LT(m, prev);
                prev = m;
            } else {
                EXPECT_DOUBLE_EQ(m, 2.0 + 1.0 / th2);
            }
        }
    }
}

TEST(ClassifyRegime, AnchorPoints) {
    EXPECT_EQ(classify_regime(1.0, 1.0).verdict, Regime::global_h0);
    EXPECT_EQ(classify_regime(0.0, 1.25).verdict, Regime::global_h0);
    EXPECT_EQ(classify_regime(0.0, 1.0).verdict, Regime::local_only);
    EXPECT_EQ(classify_regime(0.25, 1.0).verdict, Regime::global_h0);
}

TEST(ClassifyRegime, Boundaries) {
    EXPECT_EQ(classify_regime(1.0, 0.5).verdict, Regime::global_h1);
    EXPECT_EQ(classify_regime(1.2, 0.05).verdict, Regime::global_h1);
    EXPECT_EQ(classify_regime(0.5, 0.3).verdict, Regime::local_only);
    EXPECT_EQ(classify_regime(0.25, 0.5).verdict, Regime::outside);
    EXPECT_EQ(classify_regime(1.0, 0.0).verdict, Regime::outside);
    EXPECT_EQ(classify_regime(1.0, -1.0).verdict, Regime::outside);
    EXPECT_EQ(classify_regime(-0.1, 2.0).verdict, Regime::outside);
    EXPECT_EQ(to_string(Regime::global_h1), "global-H1");
}

TEST(ClassifyRegime, TotalAndMonotoneOnGrid) {
    constexpr int n = 50;
    auto t1 = [](int i) { return 2.0 * i / (n - 1); };
    auto t2 = [](int j) { return 2.0 * (j + 1) / n; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto v = classify_regime(t1(i), t2(j)).verdict;
            EXPECT_GE(int(v), 0);
            EXPECT_LE(int(v), 3);
            if (i + 1 < n)
                EXPECT_LE(int(v), int(classify_regime(t1(i + 1), t2(j)).verdict));
            if (j + 1 < n)
                EXPECT_LE(int(v), int(classify_regime(t1(i), t2(j + 1)).verdict));
        }
}
