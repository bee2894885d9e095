#pragma once

// Quadratic terms evaluated pseudo-spectrally.
//
// Products are formed on an M³ grid with M >= 3n + 1 (the 3/2 padding form of
// the 2/3 rule): every retained output mode |k_i| <= n is free of aliases, so
// the result is the exact Galerkin truncation of the product.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>

#include "leray/spectral.hpp"
#include "leray/transform.hpp"

namespace leray {

inline int product_grid(int n) { return fft_friendly_size(std::max(2 * n + 2, 3 * n + 1)); }

namespace detail {

struct ProductWorkspace {
    explicit ProductWorkspace(int m) : plan(&plans(m)), spec(plan->half_points()), tmp(plan->grid_points()) {
        for (auto& g : left)
            g.assign(plan->grid_points(), 0.0);
        for (auto& g : acc)
            g.assign(plan->grid_points(), 0.0);
    }
    const PlanPair* plan;
    HalfSpectrum spec;
    RealGrid tmp;
    std::array<RealGrid, 3> left;
    std::array<RealGrid, 3> acc;
};

// Scratch buffers are per thread.
inline ProductWorkspace& workspace(int m) {
    thread_local std::map<int, std::unique_ptr<ProductWorkspace>> cache;
    auto& w = cache[m];
    if (!w)
        w = std::make_unique<ProductWorkspace>(m);
    return *w;
}

template <class Value>
void synthesize(ProductWorkspace& ws, const Lattice& lat, RealGrid& out, Value&& value) {
    scatter(lat, ws.plan->grid(), ws.spec, value);
    ws.plan->backward(ws.spec, out);
}

// Forward transform of `grid` (destroyed) into component d of `out`, times factor(i).
template <class Factor>
void analyze(ProductWorkspace& ws, RealGrid& grid, SpectralField& out, int d, Factor&& factor) {
    const int m = ws.plan->grid();
    ws.plan->forward(grid, ws.spec);
    const double scale = 1.0 / double(ws.plan->grid_points());
    const auto& lat = out.lattice();
    for (std::size_t i = 0; i < lat.size(); ++i)
        out[i][d] = ws.spec[half_offset(lat.mode(i), m)] * (scale * factor(i));
}

inline void multiply_add(RealGrid& acc, const RealGrid& a, const RealGrid& b) {
    const std::size_t count = acc.size();
    for (std::size_t j = 0; j < count; ++j)
        acc[j] += a[j] * b[j];
}

}  // namespace detail

// Truncated (a·∇)v = Σ_m a_m ∂_m v without the Leray projection.
inline SpectralField advect(const SpectralField& a, const SpectralField& v) {
    a.require_same(v);
    const auto& lat = a.lattice();
    auto& ws = detail::workspace(product_grid(a.truncation()));
    for (int m = 0; m < 3; ++m)
        detail::synthesize(ws, lat, ws.left[m], [&](std::size_t i) { return a[i][m]; });
    for (int d = 0; d < 3; ++d) {
        std::fill(ws.acc[d].begin(), ws.acc[d].end(), 0.0);
        for (int m = 0; m < 3; ++m) {
            detail::synthesize(ws, lat, ws.tmp,
                               [&](std::size_t i) { return Complex(0.0, double(lat.mode(i)[m])) * v[i][d]; });
            detail::multiply_add(ws.acc[d], ws.left[m], ws.tmp);
        }
    }
    SpectralField out(a.lattice_ptr());
    for (int d = 0; d < 3; ++d)
        detail::analyze(ws, ws.acc[d], out, d, [](std::size_t) { return 1.0; });
    return out;
}

// B(u, v) = P_σ((u·∇)v) on the Galerkin space.
inline SpectralField bilinear_B(const SpectralField& u, const SpectralField& v) {
    return leray_project(advect(u, v));
}

// B(u) = B(Gu, u).
inline SpectralField leray_nonlinearity(const SpectralField& u, const ModelContext& ctx) {
    return bilinear_B(smoothing_G(u, ctx), u);
}

// <B(u, v), w>.
inline double trilinear(const SpectralField& u, const SpectralField& v, const SpectralField& w) {
    u.require_same(w);
    return inner(bilinear_B(u, v), w);
}

// [Λ^s, f]g = Λ^s(fg) - f Λ^s g with component-wise products (fg)_i = f_i g_i.
// Both products are truncated to the lattice and their means dropped.
inline SpectralField commutator(double s, const SpectralField& f, const SpectralField& g) {
    if (s < 0.0)
        throw std::invalid_argument("commutator: s must be >= 0");
    f.require_same(g);
    const auto& lat = f.lattice();
    const SpectralField lg = fractional_laplacian(g, s);
    auto& ws = detail::workspace(product_grid(f.truncation()));
    SpectralField first(f.lattice_ptr());
    SpectralField second(f.lattice_ptr());
    for (int d = 0; d < 3; ++d) {
        detail::synthesize(ws, lat, ws.left[0], [&](std::size_t i) { return f[i][d]; });
        detail::synthesize(ws, lat, ws.tmp, [&](std::size_t i) { return g[i][d]; });
        std::fill(ws.acc[0].begin(), ws.acc[0].end(), 0.0);
        detail::multiply_add(ws.acc[0], ws.left[0], ws.tmp);
        detail::analyze(ws, ws.acc[0], first, d, [&](std::size_t i) { return std::pow(lat.norm_sq(i), 0.5 * s); });
        detail::synthesize(ws, lat, ws.tmp, [&](std::size_t i) { return lg[i][d]; });
        std::fill(ws.acc[0].begin(), ws.acc[0].end(), 0.0);
        detail::multiply_add(ws.acc[0], ws.left[0], ws.tmp);
        detail::analyze(ws, ws.acc[0], second, d, [](std::size_t) { return 1.0; });
    }
    return first - second;
}

// [Λ^s, a]·∇v = Λ^s((a·∇)v) - (a·∇)Λ^s v.
inline SpectralField advective_commutator(double s, const SpectralField& a, const SpectralField& v) {
    return fractional_laplacian(advect(a, v), s) - advect(a, fractional_laplacian(v, s));
}

// (∫ |∇u|^p dx)^{1/p} with |∇u| the pointwise Frobenius norm of ∂_m u_i.
inline double gradient_lp_norm(const SpectralField& u, double p, int grid = 0) {
    const int m = grid > 0 ? grid : quadrature_grid(u.truncation());
    if (m < minimum_grid(u.truncation()))
        throw std::invalid_argument("gradient_lp_norm: grid too small");
    const auto& plan = detail::plans(m);
    const auto& lat = u.lattice();
    HalfSpectrum spec(plan.half_points());
    RealGrid tmp(plan.grid_points());
    RealGrid sq(plan.grid_points(), 0.0);
    for (int d = 0; d < 3; ++d)
        for (int a = 0; a < 3; ++a) {
            detail::scatter(lat, m, spec, [&](std::size_t i) { return Complex(0.0, double(lat.mode(i)[a])) * u[i][d]; });
            plan.backward(spec, tmp);
            for (std::size_t j = 0; j < sq.size(); ++j)
                sq[j] += tmp[j] * tmp[j];
        }
    const double cell = std::pow(2.0 * std::numbers::pi / m, 3);
    if (std::isinf(p)) {
        double best = 0.0;
        for (double x : sq)
            best = std::max(best, std::sqrt(x));
        return best;
    }
    double acc = 0.0;
    for (double x : sq)
        acc += std::pow(x, 0.5 * p);
    return std::pow(acc * cell, 1.0 / p);
}

}  // namespace leray
