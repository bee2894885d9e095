#pragma once

// Spectral <-> physical transforms on uniform collocation grids, backed by
// FFTW real-to-complex plans. Physical samples sit at x = 2π(i1, i2, i3)/M,
// row-major with i3 fastest.

#include <fftw3.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "leray/field.hpp"

namespace leray {

template <class T>
struct FftwAllocator {
    using value_type = T;
    FftwAllocator() = default;
    template <class U>
    constexpr FftwAllocator(const FftwAllocator<U>&) noexcept {}
    T* allocate(std::size_t count) {
        void* p = fftw_malloc(count * sizeof(T));
        if (!p)
            throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }
    template <class U>
    bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

using RealGrid = std::vector<double, FftwAllocator<double>>;
using HalfSpectrum = std::vector<Complex, FftwAllocator<Complex>>;

// Smallest size >= minimum whose prime factors are all in {2, 3, 5, 7}.
inline int fft_friendly_size(int minimum) {
    for (int m = std::max(minimum, 1);; ++m) {
        int r = m;
        for (int p : {2, 3, 5, 7})
            while (r % p == 0)
                r /= p;
        if (r == 1)
            return m;
    }
}

namespace detail {

// One forward/backward plan pair per grid size. Planning is serialised; the
// plans are executed concurrently through the new-array interface.
class PlanPair {
public:
    explicit PlanPair(int m) : m_(m) {
        RealGrid real(grid_points());
        HalfSpectrum spec(half_points());
        auto* s = reinterpret_cast<fftw_complex*>(spec.data());
        forward_ = fftw_plan_dft_r2c_3d(m, m, m, real.data(), s, FFTW_ESTIMATE);
        backward_ = fftw_plan_dft_c2r_3d(m, m, m, s, real.data(), FFTW_ESTIMATE);
        if (!forward_ || !backward_)
            throw std::runtime_error("FFTW planning failed for grid " + std::to_string(m));
    }
    ~PlanPair() {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }
    PlanPair(const PlanPair&) = delete;
    PlanPair& operator=(const PlanPair&) = delete;

    int grid() const { return m_; }
    std::size_t grid_points() const { return std::size_t(m_) * m_ * m_; }
    std::size_t half_points() const { return std::size_t(m_) * m_ * (m_ / 2 + 1); }

    // Destroys `spec`.
    void backward(HalfSpectrum& spec, RealGrid& out) const {
        fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(spec.data()), out.data());
    }
    void forward(RealGrid& in, HalfSpectrum& spec) const {
        fftw_execute_dft_r2c(forward_, in.data(), reinterpret_cast<fftw_complex*>(spec.data()));
    }

private:
    int m_;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

inline const PlanPair& plans(int m) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<PlanPair>> cache;
    std::lock_guard lock(mutex);
    auto& p = cache[m];
    if (!p)
        p = std::make_unique<PlanPair>(m);
    return *p;
}

inline std::size_t half_offset(const WaveIndex& k, int m) {
    const int a = k.k1 < 0 ? k.k1 + m : k.k1;
    const int b = k.k2 < 0 ? k.k2 + m : k.k2;
    return (std::size_t(a) * m + std::size_t(b)) * std::size_t(m / 2 + 1) + std::size_t(k.k3);
}

// Writes value(i) for every stored mode (and its conjugate where it falls in the
// k3 = 0 plane) into a zeroed half spectrum. Requires m > 2n.
template <class Value>
void scatter(const Lattice& lat, int m, HalfSpectrum& spec, Value&& value) {
    std::fill(spec.begin(), spec.end(), Complex{});
    for (std::size_t i = 0; i < lat.size(); ++i) {
        const auto& k = lat.mode(i);
        const Complex v = value(i);
        spec[half_offset(k, m)] = v;
        if (k.k3 == 0)
            spec[half_offset(-k, m)] = std::conj(v);
    }
}

}  // namespace detail

// Real vector field sampled on an M³ grid.
struct PhysicalField {
    int grid = 0;
    std::array<RealGrid, 3> comp;

    explicit PhysicalField(int m = 0) : grid(m) {
        for (auto& c : comp)
            c.assign(std::size_t(m) * m * m, 0.0);
    }
    std::size_t points() const { return std::size_t(grid) * grid * grid; }
};

inline int minimum_grid(int n) { return 2 * n + 1; }

inline PhysicalField to_physical(const SpectralField& u, int grid) {
    const int n = u.truncation();
    if (grid < minimum_grid(n))
        throw std::invalid_argument("to_physical: grid " + std::to_string(grid) + " too small for truncation " +
                                    std::to_string(n) + " (need >= " + std::to_string(minimum_grid(n)) + ")");
    const auto& plan = detail::plans(grid);
    PhysicalField out(grid);
    HalfSpectrum spec(plan.half_points());
    for (int d = 0; d < 3; ++d) {
        detail::scatter(u.lattice(), grid, spec, [&](std::size_t i) { return u[i][d]; });
        plan.backward(spec, out.comp[d]);
    }
    return out;
}

// Projects grid samples onto the modes of truncation n (discarding the mean).
inline SpectralField to_spectral(const PhysicalField& f, int n) {
    if (f.grid < minimum_grid(n))
        throw std::invalid_argument("to_spectral: grid " + std::to_string(f.grid) + " too small for truncation " +
                                    std::to_string(n) + " (need >= " + std::to_string(minimum_grid(n)) + ")");
    for (const auto& c : f.comp)
        for (double x : c)
            if (!std::isfinite(x))
                throw std::invalid_argument("to_spectral: non-finite sample");
    const auto& plan = detail::plans(f.grid);
    SpectralField out(n);
    HalfSpectrum spec(plan.half_points());
    RealGrid scratch(plan.grid_points());
    const double scale = 1.0 / double(plan.grid_points());
    const auto& lat = out.lattice();
    for (int d = 0; d < 3; ++d) {
        scratch.assign(f.comp[d].begin(), f.comp[d].end());
        plan.forward(scratch, spec);
        for (std::size_t i = 0; i < lat.size(); ++i)
            out[i][d] = spec[detail::half_offset(lat.mode(i), f.grid)] * scale;
    }
    return out;
}

// Default quadrature grid for L^p diagnostics.
inline int quadrature_grid(int n) { return 2 * n + 2; }

// (∫_{[0,2π]³} |u(x)|^p dx)^{1/p} by uniform collocation; p = ∞ gives max |u|.
// For p = 2 this equals (2π)^{3/2} ‖u‖_{L²} in the coefficient normalisation.
inline double lp_norm(const PhysicalField& f, double p) {
    if (!(p >= 1.0))
        throw std::invalid_argument("lp_norm: p must be >= 1");
    const std::size_t count = f.points();
    const double cell = std::pow(2.0 * std::numbers::pi / f.grid, 3);
    if (std::isinf(p)) {
        double best = 0.0;
        for (std::size_t j = 0; j < count; ++j) {
            const double a = f.comp[0][j], b = f.comp[1][j], c = f.comp[2][j];
            best = std::max(best, std::sqrt(a * a + b * b + c * c));
        }
        return best;
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
        const double a = f.comp[0][j], b = f.comp[1][j], c = f.comp[2][j];
        acc += std::pow(a * a + b * b + c * c, 0.5 * p);
    }
    return std::pow(acc * cell, 1.0 / p);
}

inline double lp_norm(const SpectralField& u, double p, int grid = 0) {
    return lp_norm(to_physical(u, grid > 0 ? grid : quadrature_grid(u.truncation())), p);
}

}  // namespace leray
