#include "frsde/kde.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace frsde::density {

KernelDensity::KernelDensity(std::vector<double> samples, double bandwidth)
    : samples_(std::move(samples)), bandwidth_(bandwidth) {
    if (samples_.empty()) throw std::invalid_argument("KernelDensity: empty sample");
    if (!(bandwidth_ > 0.0))
        throw std::invalid_argument("KernelDensity: bandwidth must be > 0");
    std::sort(samples_.begin(), samples_.end());
}

double KernelDensity::operator()(double x) const {
    constexpr double inv_sqrt_two_pi = 0.3989422804014327;
    double acc = 0.0;
    for (const double s : samples_) {
        const double z = (x - s) / bandwidth_;
        acc += std::exp(-0.5 * z * z);
    }
    return acc * inv_sqrt_two_pi / (bandwidth_ * static_cast<double>(samples_.size()));
}

double quantile_type7(std::vector<double> samples, double p) {
    if (samples.empty()) throw std::invalid_argument("quantile_type7: empty sample");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile_type7: p in [0,1]");
    std::sort(samples.begin(), samples.end());
    const double pos = p * static_cast<double>(samples.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= samples.size()) return samples.back();
    const double frac = pos - static_cast<double>(lo);
    return samples[lo] + frac * (samples[lo + 1] - samples[lo]);
}

double silverman_bandwidth(const std::vector<double>& samples,
                           SilvermanVariant variant) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("silverman_bandwidth: need n >= 2");
    double mean = 0.0;
    for (const double s : samples) mean += s;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const double s : samples) ss += (s - mean) * (s - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const double iqr = quantile_type7(samples, 0.75) - quantile_type7(samples, 0.25);
    const double spread = (variant == SilvermanVariant::scaled_iqr)
                              ? std::min(sd, 1.34 * iqr)
                              : std::min(sd, iqr / 1.34);
    if (!(spread > 0.0))
        throw std::invalid_argument(
            "silverman_bandwidth: degenerate sample (sd = IQR = 0); "
            "supply an explicit bandwidth");
    return 1.06 * spread * std::pow(static_cast<double>(n), -0.2);
}

KernelDensity fit_kde(const std::vector<double>& samples, double bandwidth) {
    return KernelDensity(samples, bandwidth);
}

} // namespace frsde::density
