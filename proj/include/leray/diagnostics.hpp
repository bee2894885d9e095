#pragma once

// Post-processing of trajectory records: Itô energy ledgers, ensemble moment
// estimates with jackknife errors, and the (θ₁, θ₂) well-posedness regimes.

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "leray/integrator.hpp"

namespace leray {

enum class LedgerNorm { l2, h1 };

struct EnergyLedgerEntry {
    double t = 0.0;            // end of the step
    double kinetic = 0.0;      // ‖u(t)‖² (L² or H¹)
    double dissipation = 0.0;  // 2ν‖u^n‖²_{θ₂(+1)} Δt
    double injection = 0.0;    // χ²‖(Λ)g(u^n)‖²_HS Δt
    double martingale = 0.0;   // 2<(Λ)χg(u^n)ΔW, (Λ)u^n>
    double transfer = 0.0;     // -2χΔt<(Λ)B(u^n), (Λ)u^n>; zero in L² up to rounding
    double residual = 0.0;     // Δkinetic + dissipation - injection - martingale - transfer
};

// Per-step discrete energy balance. The residual measures the scheme's
// departure from the Itô identity.
inline std::vector<EnergyLedgerEntry> energy_ledger(const TrajectoryRecord& rec, LedgerNorm norm = LedgerNorm::l2) {
    std::vector<EnergyLedgerEntry> out;
    const bool h1 = norm == LedgerNorm::h1;
    const auto& level = h1 ? rec.norm_h1 : rec.norm_l2;
    const auto& diss = h1 ? rec.norm_theta2p1 : rec.norm_theta2;
    const std::size_t steps = std::min(rec.terms.size(), rec.points() - 1);
    out.reserve(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const auto& terms = rec.terms[i];
        EnergyLedgerEntry e;
        e.t = rec.t[i + 1];
        e.kinetic = level[i + 1] * level[i + 1];
        e.dissipation = 2.0 * rec.nu * diss[i] * diss[i] * rec.dt;
        e.injection = (h1 ? terms.hs_h1 : terms.hs_l2) * rec.dt;
        e.martingale = h1 ? terms.martingale_h1 : terms.martingale_l2;
        e.transfer = h1 ? terms.transfer_h1 : terms.transfer_l2;
        e.residual = (e.kinetic - level[i] * level[i]) + e.dissipation - e.injection - e.martingale - e.transfer;
        out.push_back(e);
    }
    return out;
}

// Σ_n |residual_n|: the time-integrated ledger defect over the run.
inline double integrated_abs_residual(std::span<const EnergyLedgerEntry> ledger) {
    double acc = 0.0;
    for (const auto& e : ledger)
        acc += std::abs(e.residual);
    return acc;
}

struct Estimate {
    double mean = 0.0;
    double se = 0.0;
};

// Sample mean with its delete-one jackknife standard error (0 for one value).
inline Estimate jackknife_mean(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0)
        throw std::invalid_argument("jackknife_mean: no values");
    double total = 0.0;
    for (double v : values)
        total += v;
    Estimate e{total / double(n), 0.0};
    if (n == 1)
        return e;
    double acc = 0.0;
    for (double v : values) {
        const double loo = (total - v) / double(n - 1);
        acc += (loo - e.mean) * (loo - e.mean);
    }
    e.se = std::sqrt(double(n - 1) / double(n) * acc);
    return e;
}

struct EnsembleStats {
    std::size_t trajectories = 0;
    double p = 2.0;
    Estimate sup_l2_p;        // E sup_t ‖u‖^p_{L²} over grid times
    Estimate sup_h1_p;        // E sup_t ‖u‖₁^p
    Estimate dissipation_l2;  // E ∫ ‖u‖^{p-2}_{L²} ‖u‖²_{θ₂} dt
    Estimate dissipation_h1;  // E ∫ ‖u‖₁^{p-2} ‖u‖²_{θ₂+1} dt
    Estimate final_energy;    // E ‖u(T)‖²_{L²}
};

namespace detail {

inline double weighted_integral(const TrajectoryRecord& r, const std::vector<double>& level,
                                const std::vector<double>& diss, double p) {
    double acc = 0.0;
    auto f = [&](std::size_t i) { return std::pow(level[i], p - 2.0) * diss[i] * diss[i]; };
    for (std::size_t i = 0; i + 1 < r.points(); ++i)
        acc += 0.5 * (r.t[i + 1] - r.t[i]) * (f(i) + f(i + 1));
    return acc;
}

}  // namespace detail

// Moment estimates over records of one configuration. Sup moments use grid
// times only, so they are lower-bound estimators of the continuous-time sup.
inline EnsembleStats ensemble_moments(std::span<const TrajectoryRecord> records, double p) {
    if (records.empty())
        throw std::invalid_argument("ensemble_moments: no records");
    if (!(p >= 2.0) || !std::isfinite(p))
        throw std::invalid_argument("ensemble_moments: p must be >= 2");
    for (const auto& r : records)
        if (r.config_id != records.front().config_id)
            throw std::invalid_argument("ensemble_moments: records come from different configurations");
    std::vector<double> sup_l2, sup_h1, int_l2, int_h1, final_e;
    for (const auto& r : records) {
        if (r.points() == 0)
            throw std::invalid_argument("ensemble_moments: empty record");
        double a = 0.0, b = 0.0;
        for (std::size_t i = 0; i < r.points(); ++i) {
            a = std::max(a, std::pow(r.norm_l2[i], p));
            b = std::max(b, std::pow(r.norm_h1[i], p));
        }
        sup_l2.push_back(a);
        sup_h1.push_back(b);
        int_l2.push_back(detail::weighted_integral(r, r.norm_l2, r.norm_theta2, p));
        int_h1.push_back(detail::weighted_integral(r, r.norm_h1, r.norm_theta2p1, p));
        final_e.push_back(r.norm_l2.back() * r.norm_l2.back());
    }
    EnsembleStats s;
    s.trajectories = records.size();
    s.p = p;
    s.sup_l2_p = jackknife_mean(sup_l2);
    s.sup_h1_p = jackknife_mean(sup_h1);
    s.dissipation_l2 = jackknife_mean(int_l2);
    s.dissipation_h1 = jackknife_mean(int_h1);
    s.final_energy = jackknife_mean(final_e);
    return s;
}

// Moment-transfer exponent m for the subcritical regime θ₁ + θ₂ > 5/4:
//   m = 1 + (1 + θ₂) / (2(θ₁ + θ₂ - 5/4))  if θ₁ + θ₂/2 < 5/4,
//   m = 2 + 1/θ₂                            otherwise.
inline double theorem44_exponent(double theta1, double theta2) {
    if (!(theta1 >= 0.0) || !(theta2 > 0.0))
        throw std::invalid_argument("theorem44_exponent: need theta1 >= 0 and theta2 > 0");
    if (!(theta1 + theta2 > 1.25))
        throw std::invalid_argument("theorem44_exponent: requires theta1 + theta2 > 5/4 (subcritical)");
    if (theta1 + 0.5 * theta2 < 1.25)
        return 1.0 + (1.0 + theta2) / (2.0 * (theta1 + theta2 - 1.25));
    return 2.0 + 1.0 / theta2;
}

enum class Regime { outside = 0, local_only = 1, global_h1 = 2, global_h0 = 3 };

inline std::string to_string(Regime r) {
    switch (r) {
    case Regime::outside: return "outside";
    case Regime::local_only: return "local-only";
    case Regime::global_h1: return "global-H1";
    case Regime::global_h0: return "global-H0";
    }
    return "?";
}

struct RegimeVerdict {
    double theta1 = 0.0;
    double theta2 = 0.0;
    Regime verdict = Regime::outside;
};

// Strongest well-posedness statement available at (θ₁, θ₂):
//   global-H0:  θ₂ > 1/2 and θ₁ + θ₂ >= 5/4  (H⁰ data, global strong solution)
//   global-H1:  θ₂ > 0   and θ₁ + θ₂ >= 5/4  (H¹ data, global strong solution)
//   local-only: θ₂ > 0   and θ₁ + θ₂ > 3/4   (maximal local solution)
inline RegimeVerdict classify_regime(double theta1, double theta2) {
    RegimeVerdict v{theta1, theta2, Regime::outside};
    if (!(theta1 >= 0.0) || !(theta2 > 0.0) || !std::isfinite(theta1) || !std::isfinite(theta2))
        return v;
    const double sum = theta1 + theta2;
    if (sum >= 1.25)
        v.verdict = theta2 > 0.5 ? Regime::global_h0 : Regime::global_h1;
    else if (sum > 0.75)
        v.verdict = Regime::local_only;
    return v;
}

}  // namespace leray
