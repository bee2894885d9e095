#pragma once

// Semi-implicit Euler–Maruyama integration of the Galerkin system
//
//   du + ν Λ^{2θ₂} u dt + χ_R(‖u‖₁) B(Gu, u) dt = χ_R(‖u‖₁) g(u) dW
//
// with the dissipation treated exactly-implicitly per mode and the
// nonlinearity and noise explicitly:
//
//   û^{n+1}_k = [û^n_k - Δt χ B̂(u^n)_k + χ (g(u^n)ΔW_n)^_k] / (1 + Δt ν |k|^{2θ₂}).

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "leray/noise.hpp"
#include "leray/nonlinear.hpp"

namespace leray {

// χ_R: 1 on [0, R], 0 on [2R, ∞), and the C^∞ step 1 - ψ((x - R)/R) between,
// where ψ(t) = e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)}). χ_R(1.5R) = 1/2.
inline double cutoff_chi(double x, double radius) {
    if (!(radius > 0.0))
        throw std::invalid_argument("cutoff_chi: R must be > 0");
    if (x <= radius)
        return 1.0;
    if (x >= 2.0 * radius)
        return 0.0;
    const double t = (x - radius) / radius;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return 1.0 - a / (a + b);
}

enum class StoppingKind { tau_R, rho_M, gamma_K };

inline std::string to_string(StoppingKind k) {
    switch (k) {
    case StoppingKind::tau_R: return "tau_R";
    case StoppingKind::rho_M: return "rho_M";
    case StoppingKind::gamma_K: return "gamma_K";
    }
    return "?";
}

struct MonitorSpec {
    StoppingKind kind = StoppingKind::tau_R;
    double threshold = 0.0;
};

struct StoppingRecord {
    StoppingKind kind = StoppingKind::tau_R;
    double threshold = 0.0;
    double hit_time = 0.0;
    std::size_t step = 0;
};

struct HaltRecord {
    enum class Reason { stopping_time, numerical_overflow };
    Reason reason = Reason::numerical_overflow;
    double time = 0.0;
    std::size_t step = 0;
    std::string detail;
};

enum class InitialKind { zero, single_mode, random };

struct InitialData {
    InitialKind kind = InitialKind::random;
    WaveIndex mode{1, 0, 0};  // single_mode
    int polarization = 0;     // single_mode
    double amplitude = 1.0;   // ‖u₀‖_{L²}
    std::uint64_t seed = 1;   // random
    double slope = 2.0;       // random
};

inline SpectralField make_initial_field(const InitialData& init, int n) {
    switch (init.kind) {
    case InitialKind::zero: return SpectralField(n);
    case InitialKind::single_mode: return single_mode_field(n, init.mode, init.polarization, init.amplitude);
    case InitialKind::random: return random_field(n, init.seed, init.slope, init.amplitude);
    }
    throw std::logic_error("unknown initial kind");
}

struct RunConfig {
    ModelContext ctx;
    double dt = 1e-3;
    double horizon = 1.0;
    NoiseFamily noise = NoiseFamily::linear_multiplicative(0.0);
    InitialData initial;
    std::optional<SpectralField> initial_field;  // overrides `initial` when set
    std::optional<double> cutoff_radius;
    std::vector<MonitorSpec> monitors;
    bool stop_on_hit = false;
    bool nonlinear = true;
    double snapshot_every = 0.0;  // 0 disables snapshots
    std::uint64_t seed = 1;       // master seed of the Wiener streams

    std::size_t steps() const { return static_cast<std::size_t>(std::llround(horizon / dt)); }

    void validate() const {
        if (!(std::isfinite(dt) && dt > 0.0))
            throw std::invalid_argument("dt must be > 0");
        if (!(std::isfinite(horizon) && dt < horizon))
            throw std::invalid_argument("dt must be < T");
        if (std::abs(double(steps()) * dt - horizon) > 1e-9 * horizon)
            throw std::invalid_argument("T must be an integer multiple of dt");
        if (cutoff_radius && !(std::isfinite(*cutoff_radius) && *cutoff_radius > 0.0))
            throw std::invalid_argument("cutoff R must be > 0");
        for (const auto& m : monitors)
            if (!(std::isfinite(m.threshold) && m.threshold > 0.0))
                throw std::invalid_argument("monitor thresholds must be > 0");
        if (!(std::isfinite(snapshot_every) && snapshot_every >= 0.0))
            throw std::invalid_argument("snapshot_every must be >= 0");
        if (noise.required_truncation() > ctx.truncation())
            throw std::invalid_argument("noise driver modes exceed the truncation");
        if (initial_field && initial_field->truncation() != ctx.truncation())
            throw std::invalid_argument("initial field truncation does not match model");
    }

    // Canonical text identifying the run; records of one ensemble share it.
    std::string fingerprint() const {
        std::ostringstream os;
        os.precision(17);
        const auto& p = ctx.params();
        os << "nu=" << p.nu << ";alpha=" << p.alpha << ";theta1=" << p.theta1 << ";theta2=" << p.theta2
           << ";n=" << p.n << ";dt=" << dt << ";T=" << horizon << ";noise=" << to_string(noise.kind())
           << ";sigma=" << noise.sigma();
        for (const auto& d : noise.drivers())
            os << ";drv=" << to_string(d.k) << "/" << d.polarization << "/" << d.sine << "/" << d.amplitude;
        if (initial_field)
            os << ";init=explicit";
        else
            os << ";init=" << int(initial.kind) << "/" << to_string(initial.mode) << "/" << initial.polarization << "/"
               << initial.amplitude << "/" << initial.seed << "/" << initial.slope;
        if (cutoff_radius)
            os << ";R=" << *cutoff_radius;
        for (const auto& m : monitors)
            os << ";mon=" << to_string(m.kind) << "/" << m.threshold;
        os << ";stop=" << stop_on_hit << ";nonlinear=" << nonlinear << ";seed=" << seed;
        return os.str();
    }
};

struct TrajectoryState {
    double t = 0.0;
    SpectralField u;
    std::size_t step = 0;
    std::uint64_t trajectory = 0;
    std::optional<HaltRecord> halted;
};

// Per-step terms of the L² and H¹ Itô energy balances, evaluated at u^n.
struct StepTerms {
    double chi = 1.0;
    double hs_l2 = 0.0;          // χ²‖g(u)‖²_HS
    double hs_h1 = 0.0;          // χ²‖Λg(u)‖²_HS
    double martingale_l2 = 0.0;  // 2<χ g(u)ΔW, u>
    double martingale_h1 = 0.0;  // 2<Λχ g(u)ΔW, Λu>
    double transfer_l2 = 0.0;    // -2χΔt <B(u), u>
    double transfer_h1 = 0.0;    // -2χΔt <ΛB(u), Λu>
};

struct StepResult {
    TrajectoryState state;
    StepTerms terms;
};

inline StepResult advance(const TrajectoryState& state, const RunConfig& cfg) {
    if (state.halted)
        throw std::logic_error("advance: trajectory is halted");
    const auto& ctx = cfg.ctx;
    const SpectralField& u = state.u;
    const double dt = cfg.dt;

    StepTerms terms;
    terms.chi = cfg.cutoff_radius ? cutoff_chi(sobolev_norm(u, 1.0), *cfg.cutoff_radius) : 1.0;
    const double chi = terms.chi;

    SpectralField nonlinear(u.lattice_ptr());
    if (cfg.nonlinear && chi > 0.0)
        nonlinear = leray_nonlinearity(u, ctx);

    SpectralField forcing(u.lattice_ptr());
    const std::size_t dim = cfg.noise.dimension();
    if (dim > 0) {
        const auto incr = wiener_increment({cfg.seed, state.trajectory}, state.step, dt, dim);
        forcing = apply_noise(cfg.noise, u, incr);
        forcing *= chi;
        terms.hs_l2 = chi * chi * hs_norm_sq(cfg.noise, u, 0.0);
        terms.hs_h1 = chi * chi * hs_norm_sq(cfg.noise, u, 1.0);
        terms.martingale_l2 = 2.0 * inner(forcing, u);
        terms.martingale_h1 = 2.0 * sobolev_inner(forcing, u, 1.0);
    }
    terms.transfer_l2 = -2.0 * chi * dt * inner(nonlinear, u);
    terms.transfer_h1 = -2.0 * chi * dt * sobolev_inner(nonlinear, u, 1.0);

    TrajectoryState next{0.0, u, state.step + 1, state.trajectory, std::nullopt};
    next.t = double(next.step) * dt;
    const auto& symbol = ctx.dissipation_symbol();
    const double nu = ctx.nu();
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double denom = 1.0 + dt * nu * symbol[i];
        for (int d = 0; d < 3; ++d)
            next.u[i][d] = (u[i][d] - (dt * chi) * nonlinear[i][d] + forcing[i][d]) / denom;
    }
    return {std::move(next), terms};
}

inline TrajectoryState step(const TrajectoryState& state, const RunConfig& cfg) {
    return advance(state, cfg).state;
}

struct Snapshot {
    double t = 0.0;
    std::size_t step = 0;
    SpectralField u;
};

// One sample path: norms on the time grid t_i = iΔt, per-step balance terms,
// and monitor outcomes. `terms[i]` covers the interval [t_i, t_{i+1}].
struct TrajectoryRecord {
    std::uint64_t trajectory = 0;
    std::string config_id;
    double dt = 0.0;
    double nu = 0.0;
    double theta2 = 0.0;
    std::vector<double> t;
    std::vector<double> norm_l2;
    std::vector<double> norm_h1;
    std::vector<double> norm_theta2;
    std::vector<double> norm_theta2p1;
    std::vector<double> int_diss_theta2;    // ∫ ‖u‖²_{θ₂} ds, trapezoidal
    std::vector<double> int_diss_theta2p1;  // ∫ ‖u‖²_{θ₂+1} ds, trapezoidal
    std::vector<double> injection_cum;      // Σ χ²‖g(u)‖²_HS Δt
    std::vector<StepTerms> terms;
    std::vector<MonitorSpec> monitors;
    std::vector<std::optional<StoppingRecord>> hits;
    std::vector<Snapshot> snapshots;
    std::optional<HaltRecord> halt;

    std::size_t points() const { return t.size(); }
    bool numerical_blowup() const { return halt && halt->reason == HaltRecord::Reason::numerical_overflow; }
};

namespace detail {

inline double monitor_value(StoppingKind kind, double sup_h1, double int_t2, double int_t2p1) {
    switch (kind) {
    case StoppingKind::tau_R: return sup_h1;
    case StoppingKind::rho_M: return sup_h1 * sup_h1 + int_t2p1;
    case StoppingKind::gamma_K: return int_t2;
    }
    return 0.0;
}

}  // namespace detail

// First grid time at which the monitored functional reaches `threshold`:
//   tau_R:   sup_{s<=t} ‖u(s)‖₁
//   rho_M:   sup_{s<=t} ‖u(s)‖₁² + ∫_0^t ‖u‖²_{θ₂+1} ds
//   gamma_K: ∫_0^t ‖u‖²_{θ₂} ds
inline std::optional<double> detect_stopping(const TrajectoryRecord& rec, StoppingKind kind, double threshold) {
    double sup = 0.0;
    for (std::size_t i = 0; i < rec.points(); ++i) {
        sup = std::max(sup, rec.norm_h1.at(i));
        const double t2 = kind == StoppingKind::gamma_K ? rec.int_diss_theta2.at(i) : 0.0;
        const double t2p1 = kind == StoppingKind::rho_M ? rec.int_diss_theta2p1.at(i) : 0.0;
        if (detail::monitor_value(kind, sup, t2, t2p1) >= threshold)
            return rec.t[i];
    }
    return std::nullopt;
}

inline TrajectoryRecord run_trajectory(const RunConfig& cfg, std::uint64_t trajectory = 0) {
    cfg.validate();
    const int n = cfg.ctx.truncation();
    const double dt = cfg.dt;
    const double th2 = cfg.ctx.theta2();

    TrajectoryRecord rec;
    rec.trajectory = trajectory;
    rec.config_id = cfg.fingerprint();
    rec.dt = dt;
    rec.nu = cfg.ctx.nu();
    rec.theta2 = th2;
    rec.monitors = cfg.monitors;
    rec.hits.assign(cfg.monitors.size(), std::nullopt);

    TrajectoryState state{0.0, cfg.initial_field ? *cfg.initial_field : make_initial_field(cfg.initial, n), 0,
                          trajectory, std::nullopt};
    const std::size_t total = cfg.steps();
    const std::size_t stride =
        cfg.snapshot_every > 0.0 ? std::max<std::size_t>(1, std::size_t(std::llround(cfg.snapshot_every / dt))) : 0;

    double sup_h1 = 0.0;
    double prev_t2 = 0.0, prev_t2p1 = 0.0;
    auto record_point = [&](const TrajectoryState& s) {
        const double l2 = sobolev_norm(s.u, 0.0);
        const double h1 = sobolev_norm(s.u, 1.0);
        const double t2 = sobolev_norm_sq(s.u, th2);
        const double t2p1 = sobolev_norm_sq(s.u, th2 + 1.0);
        const bool first = rec.t.empty();
        rec.t.push_back(s.t);
        rec.norm_l2.push_back(l2);
        rec.norm_h1.push_back(h1);
        rec.norm_theta2.push_back(std::sqrt(t2));
        rec.norm_theta2p1.push_back(std::sqrt(t2p1));
        rec.int_diss_theta2.push_back(first ? 0.0 : rec.int_diss_theta2.back() + 0.5 * dt * (prev_t2 + t2));
        rec.int_diss_theta2p1.push_back(first ? 0.0 : rec.int_diss_theta2p1.back() + 0.5 * dt * (prev_t2p1 + t2p1));
        if (first)
            rec.injection_cum.push_back(0.0);
        prev_t2 = t2;
        prev_t2p1 = t2p1;
        sup_h1 = std::max(sup_h1, h1);
        bool stop = false;
        for (std::size_t m = 0; m < cfg.monitors.size(); ++m) {
            if (rec.hits[m])
                continue;
            const auto& mon = cfg.monitors[m];
            if (detail::monitor_value(mon.kind, sup_h1, rec.int_diss_theta2.back(), rec.int_diss_theta2p1.back()) >=
                mon.threshold) {
                rec.hits[m] = StoppingRecord{mon.kind, mon.threshold, s.t, s.step};
                stop = stop || cfg.stop_on_hit;
            }
        }
        if (stride > 0 && s.step % stride == 0)
            rec.snapshots.push_back({s.t, s.step, s.u});
        return stop;
    };

    if (record_point(state)) {
        rec.halt = HaltRecord{HaltRecord::Reason::stopping_time, 0.0, 0, "monitor threshold reached"};
        return rec;
    }
    for (std::size_t k = 0; k < total; ++k) {
        auto result = advance(state, cfg);
        if (!result.state.u.all_finite() || !std::isfinite(sobolev_norm_sq(result.state.u, th2 + 1.0))) {
            rec.halt = HaltRecord{HaltRecord::Reason::numerical_overflow, result.state.t, result.state.step,
                                  "non-finite coefficient"};
            break;
        }
        state = std::move(result.state);
        rec.terms.push_back(result.terms);
        rec.injection_cum.push_back(rec.injection_cum.back() + result.terms.hs_l2 * dt);
        if (record_point(state)) {
            rec.halt = HaltRecord{HaltRecord::Reason::stopping_time, state.t, state.step, "monitor threshold reached"};
            break;
        }
    }
    return rec;
}

}  // namespace leray
