#pragma once

// Truncated wavenumber lattice on the periodic torus [0, 2π)³.
//
// The cube |k_i| ≤ n minus the origin is split into ±k pairs. Only one
// representative per pair is stored ("canonical"):
//   k3 > 0,  or  k3 = 0 and k2 > 0,  or  k2 = k3 = 0 and k1 > 0.
// Stored modes are kept in lexicographic order (k1 slowest, k3 fastest).

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace leray {

struct WaveIndex {
    int k1 = 0;
    int k2 = 0;
    int k3 = 0;

    constexpr int operator[](int axis) const { return axis == 0 ? k1 : (axis == 1 ? k2 : k3); }
    constexpr long norm_sq() const {
        return static_cast<long>(k1) * k1 + static_cast<long>(k2) * k2 + static_cast<long>(k3) * k3;
    }
    constexpr bool is_zero() const { return k1 == 0 && k2 == 0 && k3 == 0; }
    constexpr WaveIndex operator-() const { return {-k1, -k2, -k3}; }
    constexpr WaveIndex operator+(const WaveIndex& o) const { return {k1 + o.k1, k2 + o.k2, k3 + o.k3}; }
    constexpr bool operator==(const WaveIndex&) const = default;
};

constexpr bool is_canonical(const WaveIndex& k) {
    return k.k3 > 0 || (k.k3 == 0 && (k.k2 > 0 || (k.k2 == 0 && k.k1 > 0)));
}

constexpr bool in_cube(const WaveIndex& k, int n) {
    return k.k1 >= -n && k.k1 <= n && k.k2 >= -n && k.k2 <= n && k.k3 >= -n && k.k3 <= n;
}

inline std::string to_string(const WaveIndex& k) {
    return "(" + std::to_string(k.k1) + "," + std::to_string(k.k2) + "," + std::to_string(k.k3) + ")";
}

class Lattice {
public:
    // Location of a cube point in half-lattice storage.
    struct Slot {
        std::ptrdiff_t index = -1;  // -1 for k = 0 or outside the cube
        bool conjugate = false;     // true when the stored representative is -k
    };

    explicit Lattice(int n) : n_(n) {
        if (n < 1)
            throw std::invalid_argument("Lattice: truncation must be >= 1, got " + std::to_string(n));
        const int side = 2 * n + 1;
        slots_.assign(static_cast<std::size_t>(side) * side * side, 0);
        modes_.reserve((slots_.size() - 1) / 2);
        for (int a = -n; a <= n; ++a)
            for (int b = -n; b <= n; ++b)
                for (int c = -n; c <= n; ++c) {
                    const WaveIndex k{a, b, c};
                    if (is_canonical(k)) {
                        modes_.push_back(k);
                        norm_sq_.push_back(static_cast<double>(k.norm_sq()));
                        slots_[cube_offset(k)] = static_cast<std::int32_t>(modes_.size());
                    }
                }
        for (const auto& k : modes_)
            slots_[cube_offset(-k)] = -slots_[cube_offset(k)];
    }

    int truncation() const { return n_; }
    std::size_t size() const { return modes_.size(); }
    const WaveIndex& mode(std::size_t i) const { return modes_[i]; }
    const std::vector<WaveIndex>& modes() const { return modes_; }
    double norm_sq(std::size_t i) const { return norm_sq_[i]; }

    Slot find(const WaveIndex& k) const {
        if (!in_cube(k, n_) || k.is_zero())
            return {};
        const std::int32_t s = slots_[cube_offset(k)];
        return s > 0 ? Slot{s - 1, false} : Slot{-s - 1, true};
    }

private:
    std::size_t cube_offset(const WaveIndex& k) const {
        const std::size_t side = 2 * static_cast<std::size_t>(n_) + 1;
        return (static_cast<std::size_t>(k.k1 + n_) * side + static_cast<std::size_t>(k.k2 + n_)) * side +
               static_cast<std::size_t>(k.k3 + n_);
    }

    int n_;
    std::vector<WaveIndex> modes_;
    std::vector<double> norm_sq_;
    std::vector<std::int32_t> slots_;  // +(i+1) canonical, -(i+1) conjugate, 0 origin
};

// Shared immutable lattice per truncation level.
inline std::shared_ptr<const Lattice> lattice_for(int n) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const Lattice>> cache;
    std::lock_guard lock(mutex);
    auto& entry = cache[n];
    if (!entry)
        entry = std::make_shared<const Lattice>(n);
    return entry;
}

}  // namespace leray
