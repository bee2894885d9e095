#pragma once

// Randomised invariant suite over a model context; used by the
// check-invariants command.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "leray/nonlinear.hpp"

namespace leray {

struct InvariantCheck {
    std::string name;
    double worst = 0.0;  // largest observed defect
    double tolerance = 0.0;
    bool passed() const { return worst <= tolerance; }
};

// ‖a - b‖_{L²} / max(‖b‖_{L²}, tiny).
inline double relative_difference(const SpectralField& a, const SpectralField& b) {
    const double ref = sobolev_norm(b, 0.0);
    return sobolev_norm(a - b, 0.0) / (ref > 0.0 ? ref : 1e-300);
}

// Interpolation defect: ‖u‖_δ - ‖u‖_0^{1-δ/θ} ‖u‖_θ^{δ/θ}, relative to ‖u‖_δ (<= 0 when it holds).
inline double interpolation_excess(const SpectralField& u, double delta, double theta) {
    const double lhs = sobolev_norm(u, delta);
    const double rhs = std::pow(sobolev_norm(u, 0.0), 1.0 - delta / theta) * std::pow(sobolev_norm(u, theta), delta / theta);
    return (lhs - rhs) / lhs;
}

inline std::vector<InvariantCheck> run_invariant_suite(const ModelContext& ctx, std::size_t samples,
                                                       std::uint64_t seed) {
    InvariantCheck idem{"projection idempotence", 0.0, 1e-14};
    InvariantCheck semigroup{"fractional Laplacian semigroup", 0.0, 1e-12};
    InvariantCheck commute{"G, Lambda^s, P commute", 0.0, 1e-12};
    InvariantCheck norm_id{"norm identity ||u||_s = ||Lambda^s u||_0", 0.0, 1e-12};
    InvariantCheck interp{"interpolation inequality", 0.0, 1e-12};
    InvariantCheck smoothing{"smoothing bound ||Gu||_{s+2theta1} <= alpha^{-2theta1}||u||_s", 0.0, 1e-12};
    InvariantCheck cancel{"cancellation <B(Gu,u),u> = 0", 0.0, 1e-10};
    InvariantCheck skew{"skew symmetry <B(u,v),w> = -<B(u,w),v>", 0.0, 1e-10};
    InvariantCheck divfree{"B output divergence-free", 0.0, 1e-12};

    const int n = ctx.truncation();
    const double th1 = ctx.theta1(), th2 = ctx.theta2();
    const double a2 = std::pow(ctx.alpha(), -2.0 * th1);
    for (std::size_t i = 0; i < samples; ++i) {
        const double slope = 0.5 + double(i % 4) * 0.5;
        const SpectralField u = random_field(n, seed + 3 * i, slope);
        const SpectralField v = random_field(n, seed + 3 * i + 1, slope);
        const SpectralField w = random_field(n, seed + 3 * i + 2, slope);

        const auto pu = leray_project(u);
        idem.worst = std::max(idem.worst, relative_difference(leray_project(pu), pu));
        semigroup.worst = std::max(
            semigroup.worst, relative_difference(fractional_laplacian(fractional_laplacian(u, 0.7), th2),
                                                 fractional_laplacian(u, 0.7 + th2)));
        commute.worst = std::max(commute.worst, relative_difference(smoothing_G(fractional_laplacian(u, th2), ctx),
                                                                    fractional_laplacian(smoothing_G(u, ctx), th2)));
        commute.worst = std::max(commute.worst, relative_difference(leray_project(smoothing_G(u, ctx)),
                                                                    smoothing_G(leray_project(u), ctx)));
        for (double s : {0.5, 1.0, th2 + 1.0}) {
            const double a = sobolev_norm(u, s), b = sobolev_norm(fractional_laplacian(u, s), 0.0);
            norm_id.worst = std::max(norm_id.worst, std::abs(a - b) / b);
        }
        for (auto [d, t] : {std::pair{0.5, 1.0}, std::pair{1.0, 1.25}, std::pair{th2, th2 + 1.0}})
            interp.worst = std::max(interp.worst, interpolation_excess(u, d, t));
        for (double s : {0.0, 1.0}) {
            const double lhs = sobolev_norm(smoothing_G(u, ctx), s + 2.0 * th1);
            const double rhs = a2 * sobolev_norm(u, s);
            smoothing.worst = std::max(smoothing.worst, (lhs - rhs) / rhs);
        }
        const auto gu = smoothing_G(u, ctx);
        const double c = inner(bilinear_B(gu, u), u);
        cancel.worst = std::max(cancel.worst, std::abs(c) / (sobolev_norm(gu, 1.0) * sobolev_norm(u, 1.0) *
                                                             sobolev_norm(u, 0.0)));
        const double t1 = trilinear(u, v, w), t2 = trilinear(u, w, v);
        skew.worst = std::max(skew.worst, std::abs(t1 + t2) / (std::abs(t1) + std::abs(t2)));
        divfree.worst = std::max(divfree.worst, divergence_defect(bilinear_B(u, v)));
    }
    return {idem, semigroup, commute, norm_id, interp, smoothing, cancel, skew, divfree};
}

}  // namespace leray
