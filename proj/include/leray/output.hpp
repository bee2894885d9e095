#pragma once

#include <charconv>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "leray/diagnostics.hpp"

namespace leray {

// Shortest round-trip decimal representation.
inline std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

inline std::string monitor_column(const MonitorSpec& m, std::size_t index) {
    return "hit_" + to_string(m.kind) + "_" + std::to_string(index);
}

// Columns: t, norm_L2, norm_H1, norm_Htheta2, norm_Htheta2p1, int_diss_theta2,
// int_diss_theta2p1, injection_cum, then one 0/1 flag per monitor (1 once hit).
inline void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec) {
    os << "t,norm_L2,norm_H1,norm_Htheta2,norm_Htheta2p1,int_diss_theta2,int_diss_theta2p1,injection_cum";
    for (std::size_t m = 0; m < rec.monitors.size(); ++m)
        os << ',' << monitor_column(rec.monitors[m], m);
    os << '\n';
    for (std::size_t i = 0; i < rec.points(); ++i) {
        os << format_number(rec.t[i]) << ',' << format_number(rec.norm_l2[i]) << ',' << format_number(rec.norm_h1[i])
           << ',' << format_number(rec.norm_theta2[i]) << ',' << format_number(rec.norm_theta2p1[i]) << ','
           << format_number(rec.int_diss_theta2[i]) << ',' << format_number(rec.int_diss_theta2p1[i]) << ','
           << format_number(rec.injection_cum[i]);
        for (const auto& hit : rec.hits)
            os << ',' << (hit && hit->step <= i ? 1 : 0);
        os << '\n';
    }
}

inline void write_ledger_csv(std::ostream& os, std::span<const EnergyLedgerEntry> ledger) {
    os << "t,kinetic,dissipation,injection,martingale,transfer,residual\n";
    for (const auto& e : ledger)
        os << format_number(e.t) << ',' << format_number(e.kinetic) << ',' << format_number(e.dissipation) << ','
           << format_number(e.injection) << ',' << format_number(e.martingale) << ',' << format_number(e.transfer)
           << ',' << format_number(e.residual) << '\n';
}

inline void write_summary_csv(std::ostream& os, const EnsembleStats& s) {
    os << "statistic,p,trajectories,mean,se\n";
    auto row = [&](const char* name, const Estimate& e) {
        os << name << ',' << format_number(s.p) << ',' << s.trajectories << ',' << format_number(e.mean) << ','
           << format_number(e.se) << '\n';
    };
    row("sup_norm_L2_p", s.sup_l2_p);
    row("sup_norm_H1_p", s.sup_h1_p);
    row("int_L2_pm2_Htheta2_sq", s.dissipation_l2);
    row("int_H1_pm2_Htheta2p1_sq", s.dissipation_h1);
    row("final_norm_L2_sq", s.final_energy);
}

// One row per trajectory: hit time of each monitor (empty when never hit) and halt status.
inline void write_stopping_csv(std::ostream& os, std::span<const TrajectoryRecord> records) {
    os << "trajectory";
    if (!records.empty())
        for (std::size_t m = 0; m < records.front().monitors.size(); ++m)
            os << ',' << monitor_column(records.front().monitors[m], m);
    os << ",halt\n";
    for (const auto& r : records) {
        os << r.trajectory;
        for (const auto& hit : r.hits)
            os << ',' << (hit ? format_number(hit->hit_time) : std::string());
        os << ',' << (!r.halt ? "none" : (r.numerical_blowup() ? "numerical_overflow" : "stopping_time")) << '\n';
    }
}

inline void write_regime_csv(std::ostream& os, std::span<const RegimeVerdict> verdicts) {
    os << "theta1,theta2,verdict\n";
    for (const auto& v : verdicts)
        os << format_number(v.theta1) << ',' << format_number(v.theta2) << ',' << to_string(v.verdict) << '\n';
}

}  // namespace leray
