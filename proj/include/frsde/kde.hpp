#pragma once

#include <vector>

namespace frsde::density {

/// Gaussian-kernel density estimate with fixed bandwidth.
class KernelDensity {
public:
    KernelDensity(std::vector<double> samples, double bandwidth);

    double operator()(double x) const;

    double bandwidth() const { return bandwidth_; }
    const std::vector<double>& samples() const { return samples_; }

private:
    std::vector<double> samples_; // kept sorted so evaluation order is canonical
    double bandwidth_;
};

enum class SilvermanVariant {
    scaled_iqr,   ///< 1.06 min(sd, 1.34 IQR) n^{-1/5}
    classical,    ///< 1.06 min(sd, IQR / 1.34) n^{-1/5}
};

/// Rule-of-thumb bandwidth. IQR uses linearly interpolated (type-7)
/// quantiles. Throws when sd and IQR are both zero.
double silverman_bandwidth(const std::vector<double>& samples,
                           SilvermanVariant variant = SilvermanVariant::scaled_iqr);

KernelDensity fit_kde(const std::vector<double>& samples, double bandwidth);

/// Type-7 (linear interpolation) sample quantile, p in [0, 1].
double quantile_type7(std::vector<double> samples, double p);

} // namespace frsde::density
