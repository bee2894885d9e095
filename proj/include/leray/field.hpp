#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "leray/lattice.hpp"

namespace leray {

using Complex = std::complex<double>;
using CVec3 = std::array<Complex, 3>;

inline CVec3 conj(const CVec3& v) { return {std::conj(v[0]), std::conj(v[1]), std::conj(v[2])}; }

// Real, zero-mean vector field on the torus stored as Fourier coefficients on
// the canonical half of the truncation cube. The coefficient of -k is the
// complex conjugate of the coefficient of k, so every field is real.
class SpectralField {
public:
    explicit SpectralField(int n) : SpectralField(lattice_for(n)) {}
    explicit SpectralField(std::shared_ptr<const Lattice> lattice)
        : lattice_(std::move(lattice)), coeffs_(lattice_->size(), CVec3{}) {}

    int truncation() const { return lattice_->truncation(); }
    const Lattice& lattice() const { return *lattice_; }
    const std::shared_ptr<const Lattice>& lattice_ptr() const { return lattice_; }
    std::size_t size() const { return coeffs_.size(); }

    CVec3& operator[](std::size_t i) { return coeffs_[i]; }
    const CVec3& operator[](std::size_t i) const { return coeffs_[i]; }
    std::span<CVec3> coeffs() { return coeffs_; }
    std::span<const CVec3> coeffs() const { return coeffs_; }

    // Coefficient at any nonzero k of the full cube; zero outside it.
    CVec3 at(const WaveIndex& k) const {
        const auto slot = lattice_->find(k);
        if (slot.index < 0)
            return {};
        const CVec3& c = coeffs_[static_cast<std::size_t>(slot.index)];
        return slot.conjugate ? conj(c) : c;
    }

    // Sets the coefficient of k (and implicitly of -k).
    void set(const WaveIndex& k, const CVec3& value) {
        const auto slot = lattice_->find(k);
        if (slot.index < 0)
            throw std::out_of_range("SpectralField::set: " + to_string(k) + " outside truncation " +
                                    std::to_string(truncation()));
        coeffs_[static_cast<std::size_t>(slot.index)] = slot.conjugate ? conj(value) : value;
    }

    bool all_finite() const {
        for (const auto& c : coeffs_)
            for (const auto& z : c)
                if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                    return false;
        return true;
    }

    SpectralField& operator+=(const SpectralField& o) {
        require_same(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            for (int d = 0; d < 3; ++d)
                coeffs_[i][d] += o.coeffs_[i][d];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        require_same(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            for (int d = 0; d < 3; ++d)
                coeffs_[i][d] -= o.coeffs_[i][d];
        return *this;
    }
    SpectralField& operator*=(double a) {
        for (auto& c : coeffs_)
            for (auto& z : c)
                z *= a;
        return *this;
    }

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }
    friend SpectralField operator*(SpectralField a, double s) { return a *= s; }

    friend bool operator==(const SpectralField& a, const SpectralField& b) {
        return a.truncation() == b.truncation() && a.coeffs_ == b.coeffs_;
    }

    void require_same(const SpectralField& o) const {
        if (o.truncation() != truncation())
            throw std::invalid_argument("truncation mismatch: " + std::to_string(truncation()) + " vs " +
                                        std::to_string(o.truncation()));
    }

private:
    std::shared_ptr<const Lattice> lattice_;
    std::vector<CVec3> coeffs_;
};

// Real L² pairing <u, v> = Σ_{k in Z³\0} û_k · conj(v̂_k); both halves counted.
inline double inner(const SpectralField& u, const SpectralField& v) {
    u.require_same(v);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        for (int d = 0; d < 3; ++d)
            acc += (u[i][d] * std::conj(v[i][d])).real();
    return 2.0 * acc;
}

// Largest |û_k·k| / (|û_k||k|) over stored modes; 0 for a divergence-free field.
inline double divergence_defect(const SpectralField& u) {
    double worst = 0.0;
    const auto& lat = u.lattice();
    for (std::size_t i = 0; i < u.size(); ++i) {
        const auto& k = lat.mode(i);
        const Complex dot = u[i][0] * double(k.k1) + u[i][1] * double(k.k2) + u[i][2] * double(k.k3);
        const double mag = std::sqrt(std::norm(u[i][0]) + std::norm(u[i][1]) + std::norm(u[i][2]));
        if (mag > 0.0)
            worst = std::max(worst, std::abs(dot) / (mag * std::sqrt(lat.norm_sq(i))));
    }
    return worst;
}

// Copies the modes of `u` shared with truncation m into a new field.
inline SpectralField retruncate(const SpectralField& u, int m) {
    SpectralField out(m);
    const auto& lat = out.lattice();
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = u.at(lat.mode(i));
    return out;
}

}  // namespace leray
