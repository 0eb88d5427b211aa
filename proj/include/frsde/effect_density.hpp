#pragma once

#include <functional>
#include <string>
#include <vector>

#include "frsde/rng.hpp"

namespace frsde::sde {

/// A distribution for the per-subject random effect, supported on [0, 1].
/// Carries the density together with its first two derivatives (needed by
/// the asymptotic formulas) and an exact sampler.
struct EffectDensity {
    std::string name;
    std::function<double(double)> pdf;
    std::function<double(double)> dpdf;
    std::function<double(double)> d2pdf;
    std::function<double(core::RngStream&)> sample;
};

/// Beta(alpha, beta) with integer parameters; sampled exactly as an order
/// statistic of alpha+beta-1 uniforms.
EffectDensity beta_density(int alpha, int beta);

/// Equal-weight mixture of Beta(3,9) and Beta(9,3).
EffectDensity beta_mix_density();

/// 0.6 N(0.5, 0.1^2) + 0.4 N(0.9, 0.03^2), each component truncated to
/// [0, 1] and renormalized; sampled by rejection from the untruncated
/// normal.
EffectDensity truncnorm_mix_density();

/// Degenerate point mass (test fixture; pdf members are empty).
EffectDensity point_mass_density(double at);

/// n i.i.d. draws from the effect density; validates support.
std::vector<double> sample_effects(const EffectDensity& density,
                                   std::size_t n_subjects,
                                   core::RngStream& rng);

} // namespace frsde::sde
