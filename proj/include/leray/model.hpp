#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "leray/lattice.hpp"

namespace leray {

struct ModelParameters {
    double nu = 1.0;      // viscosity
    double alpha = 1.0;   // smoothing length scale
    double theta1 = 1.0;  // order of the smoothing kernel
    double theta2 = 1.0;  // order of the fractional dissipation
    int n = 8;            // Galerkin truncation |k_i| <= n
};

// Model parameters plus the diagonal multipliers they induce on the lattice.
class ModelContext {
public:
    ModelContext() : ModelContext(ModelParameters{}) {}
    explicit ModelContext(const ModelParameters& p) : params_(p) {
        if (!(std::isfinite(p.nu) && p.nu > 0.0))
            throw std::invalid_argument("nu must be > 0");
        if (!(std::isfinite(p.alpha) && p.alpha > 0.0))
            throw std::invalid_argument("alpha must be > 0");
        if (!(std::isfinite(p.theta1) && p.theta1 >= 0.0))
            throw std::invalid_argument("theta1 must be >= 0");
        if (!(std::isfinite(p.theta2) && p.theta2 > 0.0))
            throw std::invalid_argument("theta2 must be > 0");
        lattice_ = lattice_for(p.n);
        const double a2t1 = std::pow(p.alpha, 2.0 * p.theta1);
        dissipation_.reserve(lattice_->size());
        smoothing_.reserve(lattice_->size());
        for (std::size_t i = 0; i < lattice_->size(); ++i) {
            const double ksq = lattice_->norm_sq(i);
            dissipation_.push_back(std::pow(ksq, p.theta2));
            smoothing_.push_back(1.0 / (1.0 + a2t1 * std::pow(ksq, p.theta1)));
        }
    }

    const ModelParameters& params() const { return params_; }
    double nu() const { return params_.nu; }
    double alpha() const { return params_.alpha; }
    double theta1() const { return params_.theta1; }
    double theta2() const { return params_.theta2; }
    int truncation() const { return params_.n; }
    const std::shared_ptr<const Lattice>& lattice() const { return lattice_; }

    // |k|^{2θ₂} per stored mode.
    const std::vector<double>& dissipation_symbol() const { return dissipation_; }
    // (1 + α^{2θ₁}|k|^{2θ₁})^{-1} per stored mode, always in (0, 1].
    const std::vector<double>& smoothing_multiplier() const { return smoothing_; }

private:
    ModelParameters params_;
    std::shared_ptr<const Lattice> lattice_;
    std::vector<double> dissipation_;
    std::vector<double> smoothing_;
};

}  // namespace leray
