#pragma once

// Diagonal operator calculus on spectral fields: Leray projection, Λ^s,
// the Leray-α smoothing G, Sobolev norms, and divergence-free generators.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

#include "leray/field.hpp"
#include "leray/model.hpp"

namespace leray {

// P_σ: removes the component of each coefficient along its wavevector.
inline SpectralField leray_project(SpectralField u) {
    const auto& lat = u.lattice();
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto& k = lat.mode(i);
        auto& c = u[i];
        const Complex dot = c[0] * double(k.k1) + c[1] * double(k.k2) + c[2] * double(k.k3);
        const Complex f = dot / lat.norm_sq(i);
        c[0] -= f * double(k.k1);
        c[1] -= f * double(k.k2);
        c[2] -= f * double(k.k3);
    }
    return u;
}

// Multiplies every stored mode by factor(i).
template <class Factor>
SpectralField apply_multiplier(SpectralField u, Factor&& factor) {
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double f = factor(i);
        for (auto& z : u[i])
            z *= f;
    }
    return u;
}

// Λ^s u = Σ |k|^s û_k e^{ik·x}. Any real s is allowed since k = 0 is absent.
inline SpectralField fractional_laplacian(SpectralField u, double s) {
    if (s == 0.0)
        return u;
    const auto& lat = u.lattice();
    return apply_multiplier(std::move(u), [&](std::size_t i) { return std::pow(lat.norm_sq(i), 0.5 * s); });
}

// G u = (I + α^{2θ₁} Λ^{2θ₁})^{-1} u.
inline SpectralField smoothing_G(SpectralField u, const ModelContext& ctx) {
    if (u.truncation() != ctx.truncation())
        throw std::invalid_argument("smoothing_G: field truncation does not match model");
    const auto& m = ctx.smoothing_multiplier();
    return apply_multiplier(std::move(u), [&](std::size_t i) { return m[i]; });
}

// sup_k |k|^β / (1 + α^{2θ₁}|k|^{2θ₁}) over the truncation: the exact constant in
// ‖Gu‖_{s+β} ≤ C ‖u‖_s on the lattice.
inline double smoothing_constant(const ModelContext& ctx, double beta) {
    const auto& lat = *ctx.lattice();
    const auto& m = ctx.smoothing_multiplier();
    double best = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i)
        best = std::max(best, std::pow(lat.norm_sq(i), 0.5 * beta) * m[i]);
    return best;
}

// ‖u‖_s² = Σ_{k≠0} |k|^{2s} |û_k|², summed over both halves of the lattice.
inline double sobolev_norm_sq(const SpectralField& u, double s) {
    const auto& lat = u.lattice();
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double mag = std::norm(u[i][0]) + std::norm(u[i][1]) + std::norm(u[i][2]);
        acc += (s == 0.0 ? 1.0 : std::pow(lat.norm_sq(i), s)) * mag;
    }
    return 2.0 * acc;
}

inline double sobolev_norm(const SpectralField& u, double s) { return std::sqrt(sobolev_norm_sq(u, s)); }

// H^s pairing Σ |k|^{2s} û_k · conj(v̂_k).
inline double sobolev_inner(const SpectralField& u, const SpectralField& v, double s) {
    u.require_same(v);
    const auto& lat = u.lattice();
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double dot = 0.0;
        for (int d = 0; d < 3; ++d)
            dot += (u[i][d] * std::conj(v[i][d])).real();
        acc += (s == 0.0 ? 1.0 : std::pow(lat.norm_sq(i), s)) * dot;
    }
    return 2.0 * acc;
}

// Unit real vector orthogonal to k. Index 0 is k × e_a normalised, where e_a is
// the axis least aligned with k; index 1 completes the right-handed triad.
inline std::array<double, 3> polarization(const WaveIndex& k, int which) {
    if (k.is_zero())
        throw std::invalid_argument("polarization: k must be nonzero");
    if (which != 0 && which != 1)
        throw std::invalid_argument("polarization: index must be 0 or 1");
    const double kv[3] = {double(k.k1), double(k.k2), double(k.k3)};
    int axis = 0;
    for (int a = 1; a < 3; ++a)
        if (std::abs(kv[a]) < std::abs(kv[axis]))
            axis = a;
    double e[3] = {0, 0, 0};
    e[axis] = 1.0;
    std::array<double, 3> p{kv[1] * e[2] - kv[2] * e[1], kv[2] * e[0] - kv[0] * e[2], kv[0] * e[1] - kv[1] * e[0]};
    double len = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    for (auto& x : p)
        x /= len;
    if (which == 1) {
        const double kn = std::sqrt(double(k.norm_sq()));
        std::array<double, 3> q{(kv[1] * p[2] - kv[2] * p[1]) / kn, (kv[2] * p[0] - kv[0] * p[2]) / kn,
                                (kv[0] * p[1] - kv[1] * p[0]) / kn};
        return q;
    }
    return p;
}

// Divergence-free single mode with ‖u‖_{L²} = amplitude:
// û_k = amplitude/√2 · e_pol (cosine phase) or i·amplitude/√2 · e_pol (sine phase).
inline SpectralField single_mode_field(int n, const WaveIndex& k, int pol, double amplitude, bool sine = false) {
    SpectralField u(n);
    const auto e = polarization(k, pol);
    const Complex a = (sine ? Complex(0.0, 1.0) : Complex(1.0, 0.0)) * (amplitude / std::numbers::sqrt2);
    u.set(k, CVec3{a * e[0], a * e[1], a * e[2]});
    return u;
}

// Random divergence-free field with |û_k| ∝ |k|^{-slope}. Deterministic in seed.
// When amplitude > 0 the field is rescaled so that ‖u‖_{L²} = amplitude.
inline SpectralField random_field(int n, std::uint64_t seed, double slope, double amplitude = 0.0) {
    SpectralField u(n);
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    const auto& lat = u.lattice();
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double scale = std::pow(lat.norm_sq(i), -0.5 * slope);
        for (auto& z : u[i]) {
            const double re = normal(gen);
            const double im = normal(gen);
            z = scale * Complex(re, im);
        }
    }
    u = leray_project(std::move(u));
    if (amplitude > 0.0) {
        const double norm = sobolev_norm(u, 0.0);
        if (norm > 0.0)
            u *= amplitude / norm;
    }
    return u;
}

inline SpectralField random_field(const ModelContext& ctx, std::uint64_t seed, double slope, double amplitude = 0.0) {
    return random_field(ctx.truncation(), seed, slope, amplitude);
}

}  // namespace leray
