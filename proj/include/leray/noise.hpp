#pragma once

// Finite-dimensional realisations of the noise coefficient g and of the
// cylindrical Wiener driver, plus an empirical auditor of the growth and
// Lipschitz conditions the well-posedness theory places on g.
//
// Wiener increments use MT19937-64 seeded through std::seed_seq with the words
// (master seed, trajectory id, step index), and std::normal_distribution for
// the Gaussian draws. A step's increment therefore depends only on that triple
// and never on execution order.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "leray/spectral.hpp"

namespace leray {

enum class NoiseKind { additive, linear_multiplicative, diagonal_spectral };

inline std::string to_string(NoiseKind k) {
    switch (k) {
    case NoiseKind::additive: return "additive";
    case NoiseKind::linear_multiplicative: return "linear_multiplicative";
    case NoiseKind::diagonal_spectral: return "diagonal_spectral";
    }
    return "?";
}

// One driver direction e_j of U.
struct DriverMode {
    WaveIndex k;             // canonical representative
    int polarization = 0;    // additive only
    bool sine = false;       // additive only: i·e_pol instead of e_pol
    double amplitude = 0.0;  // σ_j
};

class NoiseFamily {
public:
    static NoiseFamily linear_multiplicative(double sigma) {
        check_amplitude(sigma);
        NoiseFamily f;
        f.kind_ = NoiseKind::linear_multiplicative;
        f.sigma_ = sigma;
        return f;
    }

    // g(u)e_j = σ_j f_j with f_j a unit-L² single-mode divergence-free field.
    static NoiseFamily additive(std::vector<DriverMode> drivers) {
        NoiseFamily f;
        f.kind_ = NoiseKind::additive;
        f.drivers_ = canonicalize(std::move(drivers), true);
        return f;
    }

    // g(u)e_j keeps only mode k_j of u, scaled by σ_j.
    static NoiseFamily diagonal_spectral(std::vector<DriverMode> drivers) {
        NoiseFamily f;
        f.kind_ = NoiseKind::diagonal_spectral;
        f.drivers_ = canonicalize(std::move(drivers), false);
        return f;
    }

    NoiseKind kind() const { return kind_; }
    double sigma() const { return sigma_; }
    const std::vector<DriverMode>& drivers() const { return drivers_; }
    std::size_t dimension() const { return kind_ == NoiseKind::linear_multiplicative ? 1 : drivers_.size(); }

    // Largest |k_j| used; fields must have truncation >= this.
    int required_truncation() const {
        int n = 0;
        for (const auto& d : drivers_)
            n = std::max({n, std::abs(d.k.k1), std::abs(d.k.k2), std::abs(d.k.k3)});
        return n;
    }

private:
    static void check_amplitude(double s) {
        if (!std::isfinite(s) || s < 0.0)
            throw std::invalid_argument("noise amplitude must be finite and >= 0");
    }

    static std::vector<DriverMode> canonicalize(std::vector<DriverMode> drivers, bool with_polarization) {
        for (auto& d : drivers) {
            check_amplitude(d.amplitude);
            if (d.k.is_zero())
                throw std::invalid_argument("noise driver mode must be nonzero");
            // the driver direction is defined by the canonical representative of ±k
            if (!is_canonical(d.k))
                d.k = -d.k;
            if (d.polarization != 0 && d.polarization != 1)
                throw std::invalid_argument("noise driver polarization must be 0 or 1");
        }
        for (std::size_t i = 0; i < drivers.size(); ++i)
            for (std::size_t j = i + 1; j < drivers.size(); ++j) {
                const bool same = drivers[i].k == drivers[j].k &&
                                  (!with_polarization || (drivers[i].polarization == drivers[j].polarization &&
                                                          drivers[i].sine == drivers[j].sine));
                if (same)
                    throw std::invalid_argument("duplicate noise driver " + to_string(drivers[i].k));
            }
        return drivers;
    }

    NoiseKind kind_ = NoiseKind::additive;
    double sigma_ = 0.0;
    std::vector<DriverMode> drivers_;
};

// Canonical modes ordered by |k|², then lattice order.
inline std::vector<WaveIndex> modes_by_shell(int n) {
    auto modes = lattice_for(n)->modes();
    std::stable_sort(modes.begin(), modes.end(),
                     [](const WaveIndex& a, const WaveIndex& b) { return a.norm_sq() < b.norm_sq(); });
    return modes;
}

// First `count` drivers of the enumeration (shell order) x (polarization 0, 1) x (cos, sin)
// with σ_j = sigma·|k_j|^{-gamma}.
inline std::vector<DriverMode> additive_decay_drivers(std::size_t count, double sigma, double gamma) {
    std::vector<DriverMode> out;
    for (int n = 1; out.size() < count; ++n) {
        out.clear();
        for (const auto& k : modes_by_shell(n))
            for (int pol = 0; pol < 2; ++pol)
                for (bool sine : {false, true})
                    if (out.size() < count)
                        out.push_back({k, pol, sine, sigma * std::pow(double(k.norm_sq()), -0.5 * gamma)});
        if (n > 64)
            throw std::invalid_argument("driver count too large");
    }
    return out;
}

// First `count` modes in shell order with σ_j = sigma·|k_j|^{-gamma}.
inline std::vector<DriverMode> spectral_decay_drivers(std::size_t count, double sigma, double gamma) {
    std::vector<DriverMode> out;
    for (int n = 1; out.size() < count; ++n) {
        out.clear();
        for (const auto& k : modes_by_shell(n))
            if (out.size() < count)
                out.push_back({k, 0, false, sigma * std::pow(double(k.norm_sq()), -0.5 * gamma)});
        if (n > 64)
            throw std::invalid_argument("driver count too large");
    }
    return out;
}

// Identifies one trajectory's increment stream.
struct WienerStream {
    std::uint64_t master_seed = 0;
    std::uint64_t trajectory = 0;
};

struct WienerIncrement {
    double dt = 0.0;
    std::vector<double> values;  // one N(0, dt) draw per driver dimension
};

inline WienerIncrement wiener_increment(const WienerStream& stream, std::uint64_t step, double dt,
                                        std::size_t dimension) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("wiener_increment: dt must be > 0");
    auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x); };
    auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
    std::seed_seq seq{lo(stream.master_seed), hi(stream.master_seed), lo(stream.trajectory),
                      hi(stream.trajectory),  lo(step),               hi(step)};
    std::mt19937_64 gen(seq);
    std::normal_distribution<double> normal(0.0, std::sqrt(dt));
    WienerIncrement w{dt, std::vector<double>(dimension)};
    for (auto& v : w.values)
        v = normal(gen);
    return w;
}

namespace detail {

inline void check_noise_input(const NoiseFamily& family, const SpectralField& u) {
    if (family.required_truncation() > u.truncation())
        throw std::invalid_argument("noise driver mode outside field truncation");
}

inline CVec3 additive_coefficient(const DriverMode& d) {
    const auto e = polarization(d.k, d.polarization);
    const Complex a = (d.sine ? Complex(0.0, 1.0) : Complex(1.0, 0.0)) * std::sqrt(0.5);
    return {a * e[0], a * e[1], a * e[2]};
}

}  // namespace detail

// g(u) e_j.
inline SpectralField noise_column(const NoiseFamily& family, const SpectralField& u, std::size_t j) {
    detail::check_noise_input(family, u);
    if (j >= family.dimension())
        throw std::out_of_range("noise_column: driver index out of range");
    switch (family.kind()) {
    case NoiseKind::linear_multiplicative:
        return family.sigma() * u;
    case NoiseKind::additive: {
        SpectralField out(u.lattice_ptr());
        const auto& d = family.drivers()[j];
        auto c = detail::additive_coefficient(d);
        for (auto& z : c)
            z *= d.amplitude;
        out.set(d.k, c);
        return out;
    }
    case NoiseKind::diagonal_spectral: {
        SpectralField out(u.lattice_ptr());
        const auto& d = family.drivers()[j];
        auto c = u.at(d.k);
        for (auto& z : c)
            z *= d.amplitude;
        out.set(d.k, c);
        return out;
    }
    }
    throw std::logic_error("noise_column: unknown kind");
}

// g(u)ΔW.
inline SpectralField apply_noise(const NoiseFamily& family, const SpectralField& u, const WienerIncrement& incr) {
    detail::check_noise_input(family, u);
    if (incr.values.size() != family.dimension())
        throw std::invalid_argument("apply_noise: increment dimension " + std::to_string(incr.values.size()) +
                                    " does not match family dimension " + std::to_string(family.dimension()));
    if (family.kind() == NoiseKind::linear_multiplicative)
        return (family.sigma() * incr.values[0]) * u;
    SpectralField out(u.lattice_ptr());
    const auto& drivers = family.drivers();
    for (std::size_t j = 0; j < drivers.size(); ++j) {
        const auto& d = drivers[j];
        const double w = d.amplitude * incr.values[j];
        const auto slot = out.lattice().find(d.k);
        auto& target = out[std::size_t(slot.index)];
        const CVec3 c = family.kind() == NoiseKind::additive ? detail::additive_coefficient(d) : u.at(d.k);
        for (int i = 0; i < 3; ++i)
            target[i] += w * c[i];
    }
    return out;
}

// ‖Λ^s g(u)‖²_{HS} = Σ_j ‖Λ^s g(u)e_j‖²_{L²}.
inline double hs_norm_sq(const NoiseFamily& family, const SpectralField& u, double s) {
    detail::check_noise_input(family, u);
    switch (family.kind()) {
    case NoiseKind::linear_multiplicative:
        return family.sigma() * family.sigma() * sobolev_norm_sq(u, s);
    case NoiseKind::additive: {
        double acc = 0.0;
        for (const auto& d : family.drivers())
            acc += d.amplitude * d.amplitude * std::pow(double(d.k.norm_sq()), s);
        return acc;
    }
    case NoiseKind::diagonal_spectral: {
        double acc = 0.0;
        for (const auto& d : family.drivers()) {
            const auto c = u.at(d.k);
            const double mag = std::norm(c[0]) + std::norm(c[1]) + std::norm(c[2]);
            acc += d.amplitude * d.amplitude * std::pow(double(d.k.norm_sq()), s) * 2.0 * mag;
        }
        return acc;
    }
    }
    return 0.0;
}

// ‖g(u) - g(v)‖²_{HS}.
inline double hs_distance_sq(const NoiseFamily& family, const SpectralField& u, const SpectralField& v) {
    double acc = 0.0;
    for (std::size_t j = 0; j < family.dimension(); ++j)
        acc += sobolev_norm_sq(noise_column(family, u, j) - noise_column(family, v, j), 0.0);
    return acc;
}

// Closed-form envelopes of the audited ratios for the shipped families.
struct NoiseBounds {
    double growth_l2 = 0.0;  // sup ‖g(u)‖²_HS / (1 + ‖u‖²_{L²})
    double growth_h1 = 0.0;  // sup ‖Λg(u)‖²_HS / (1 + ‖u‖₁²)
    double lipschitz = 0.0;  // sup ‖g(u) - g(v)‖_HS / ‖u - v‖_{L²}
};

inline NoiseBounds closed_form_bounds(const NoiseFamily& family) {
    NoiseBounds b;
    switch (family.kind()) {
    case NoiseKind::linear_multiplicative: {
        const double s2 = family.sigma() * family.sigma();
        b = {s2, s2, family.sigma()};
        break;
    }
    case NoiseKind::additive:
        for (const auto& d : family.drivers()) {
            b.growth_l2 += d.amplitude * d.amplitude;
            b.growth_h1 += d.amplitude * d.amplitude * double(d.k.norm_sq());
        }
        break;
    case NoiseKind::diagonal_spectral: {
        double m = 0.0;
        for (const auto& d : family.drivers())
            m = std::max(m, d.amplitude);
        b = {m * m, m * m, m};
        break;
    }
    }
    return b;
}

struct ScaleAudit {
    double scale = 0.0;
    double growth_l2 = 0.0;
    double growth_h1 = 0.0;
    double lipschitz = 0.0;
};

struct AuditReport {
    NoiseKind kind = NoiseKind::additive;
    std::size_t dimension = 0;
    std::size_t samples = 0;
    std::vector<ScaleAudit> per_scale;
    double growth_l2 = 0.0;
    double growth_h1 = 0.0;
    double lipschitz = 0.0;
    NoiseBounds bounds;
    bool growth_unbounded = false;
    bool lipschitz_unbounded = false;
    bool within_bounds = true;
};

// Samples random divergence-free pairs at norm scales 1, 10, 100, 1000 and
// records the worst ratios. A ratio whose worst value at the largest scale
// exceeds four times its worst value at the smallest scale is flagged.
inline AuditReport audit_hypotheses(const NoiseFamily& family, const ModelContext& ctx, std::size_t samples,
                                    std::uint64_t seed) {
    if (samples < 2)
        throw std::invalid_argument("audit_hypotheses: need at least 2 samples");
    AuditReport r;
    r.kind = family.kind();
    r.dimension = family.dimension();
    r.samples = samples;
    r.bounds = closed_form_bounds(family);
    const int n = ctx.truncation();
    std::uint64_t counter = 0;
    for (double scale : {1.0, 10.0, 100.0, 1000.0}) {
        ScaleAudit a{scale};
        for (std::size_t i = 0; i < samples; ++i) {
            const double slope = 1.0 + 0.5 * double(i % 3);
            const SpectralField u = random_field(n, seed + 2 * counter, slope, scale);
            const SpectralField v = random_field(n, seed + 2 * counter + 1, slope, scale * (0.5 + 0.25 * (i % 3)));
            ++counter;
            a.growth_l2 = std::max(a.growth_l2, hs_norm_sq(family, u, 0.0) / (1.0 + sobolev_norm_sq(u, 0.0)));
            a.growth_h1 = std::max(a.growth_h1, hs_norm_sq(family, u, 1.0) / (1.0 + sobolev_norm_sq(u, 1.0)));
            const double dist = sobolev_norm(u - v, 0.0);
            if (dist > 0.0)
                a.lipschitz = std::max(a.lipschitz, std::sqrt(hs_distance_sq(family, u, v)) / dist);
        }
        r.growth_l2 = std::max(r.growth_l2, a.growth_l2);
        r.growth_h1 = std::max(r.growth_h1, a.growth_h1);
        r.lipschitz = std::max(r.lipschitz, a.lipschitz);
        r.per_scale.push_back(a);
    }
    const auto& first = r.per_scale.front();
    const auto& last = r.per_scale.back();
    auto grows = [](double lo, double hi) { return hi > 4.0 * lo + 1e-300; };
    r.growth_unbounded = grows(first.growth_l2, last.growth_l2) || grows(first.growth_h1, last.growth_h1);
    r.lipschitz_unbounded = grows(first.lipschitz, last.lipschitz);
    constexpr double slack = 1e-12;
    auto within = [&](double x, double b) { return x <= b * (1.0 + slack) + slack; };
    r.within_bounds = within(r.growth_l2, r.bounds.growth_l2) && within(r.growth_h1, r.bounds.growth_h1) &&
                      within(r.lipschitz, r.bounds.lipschitz);
    return r;
}

inline void print_audit(std::ostream& os, const AuditReport& r) {
    os << "noise family: " << to_string(r.kind) << " (dimension " << r.dimension << ", " << r.samples
       << " samples per scale)\n";
    os << "scale      growth_L2        growth_H1        lipschitz\n";
    for (const auto& a : r.per_scale) {
        std::ostringstream line;
        line.precision(6);
        line << std::scientific << a.scale << "  " << a.growth_l2 << "  " << a.growth_h1 << "  " << a.lipschitz;
        os << line.str() << "\n";
    }
    os.precision(10);
    os << "max growth ||g(u)||^2_HS/(1+||u||^2_L2):      " << r.growth_l2 << "  (closed form " << r.bounds.growth_l2
       << ")\n";
    os << "max growth ||Lg(u)||^2_HS/(1+||u||_1^2):      " << r.growth_h1 << "  (closed form " << r.bounds.growth_h1
       << ")\n";
    os << "max lipschitz ||g(u)-g(v)||_HS/||u-v||_L2:    " << r.lipschitz << "  (closed form " << r.bounds.lipschitz
       << ")\n";
    os << "growth unbounded: " << (r.growth_unbounded ? "yes" : "no") << "\n";
    os << "lipschitz unbounded: " << (r.lipschitz_unbounded ? "yes" : "no") << "\n";
    os << "within closed-form bounds: " << (r.within_bounds ? "yes" : "no") << "\n";
}

}  // namespace leray
