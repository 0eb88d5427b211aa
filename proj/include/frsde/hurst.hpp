#pragma once

#include <cmath>
#include <stdexcept>

#include "frsde/special.hpp"

namespace frsde::core {

/// Hurst index H in (1/2, 1) with the derived normalization constants
///
///   kappa_H  = 2 H Gamma(3/2 - H) Gamma(H + 1/2)
///   lambda_H = 2 H Gamma(3 - 2H) Gamma(H + 1/2) / Gamma(3/2 - H)
///
/// used by the deterministic kernel and the weight function below.
class HurstModel {
public:
    explicit HurstModel(double h) : HurstModel(h, Checked{}) {
        if (!(h > 0.5) || !(h < 1.0))
            throw std::invalid_argument("HurstModel: H must lie in (1/2, 1)");
    }

    /// Test-only constructor admitting H = 1/2, where the kernel
    /// degenerates to 1 on (0, t) and the weight to t (standard
    /// Brownian motion).
    static HurstModel degenerate_brownian() { return HurstModel(0.5, Checked{}); }

    double h() const { return h_; }
    double kappa() const { return kappa_; }
    double lambda() const { return lambda_; }

    /// Kernel exponent 1/2 - H, in (-1/2, 0] over the admitted range.
    double exponent() const { return 0.5 - h_; }

private:
    struct Checked {};
    HurstModel(double h, Checked)
        : h_(h),
          kappa_(2.0 * h * gamma_fn(1.5 - h) * gamma_fn(h + 0.5)),
          lambda_(2.0 * h * gamma_fn(3.0 - 2.0 * h) * gamma_fn(h + 0.5) /
                  gamma_fn(1.5 - h)) {
        if (!(h >= 0.5) || !(h < 1.0))
            throw std::invalid_argument("HurstModel: H must lie in [1/2, 1)");
    }

    double h_;
    double kappa_;
    double lambda_;
};

/// Deterministic kernel kappa_H^{-1} s^{1/2-H} (t-s)^{1/2-H} on 0 < s < t,
/// zero outside (total via the indicator).
inline double kernel_kH(const HurstModel& model, double t, double s) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel_kH: requires t > 0");
    if (s <= 0.0 || s >= t) return 0.0;
    const double a = model.exponent();
    return std::pow(s, a) * std::pow(t - s, a) / model.kappa();
}

/// Weight function w_t = lambda_H^{-1} t^{2-2H}; strictly increasing, w_0 = 0.
inline double weight_wH(const HurstModel& model, double t) {
    if (t < 0.0) throw std::invalid_argument("weight_wH: requires t >= 0");
    if (t == 0.0) return 0.0;
    return std::pow(t, 2.0 - 2.0 * model.h()) / model.lambda();
}

} // namespace frsde::core
