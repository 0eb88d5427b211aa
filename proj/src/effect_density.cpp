#include "frsde/effect_density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "frsde/special.hpp"

namespace frsde::sde {

namespace {

// c x^p (1-x)^q and its first two derivatives, with vanishing-coefficient
// guards so no negative power is ever formed.
double poly_beta(double c, int p, int q, double x) {
    return c * std::pow(x, p) * std::pow(1.0 - x, q);
}

double poly_beta_d1(double c, int p, int q, double x) {
    double r = 0.0;
    if (p > 0) r += p * std::pow(x, p - 1) * std::pow(1.0 - x, q);
    if (q > 0) r -= q * std::pow(x, p) * std::pow(1.0 - x, q - 1);
    return c * r;
}

double poly_beta_d2(double c, int p, int q, double x) {
    double r = 0.0;
    if (p > 1) r += p * (p - 1.0) * std::pow(x, p - 2) * std::pow(1.0 - x, q);
    if (p > 0 && q > 0) r -= 2.0 * p * q * std::pow(x, p - 1) * std::pow(1.0 - x, q - 1);
    if (q > 1) r += q * (q - 1.0) * std::pow(x, p) * std::pow(1.0 - x, q - 2);
    return c * r;
}

double order_statistic_draw(int k, int n, core::RngStream& rng) {
    // k-th smallest of n uniforms.
    std::vector<double> u(n);
    for (auto& v : u) v = rng.next_uniform();
    std::nth_element(u.begin(), u.begin() + (k - 1), u.end());
    return u[k - 1];
}

constexpr double kInvSqrtTwoPi = 0.3989422804014327;

double normal_pdf(double z) { return kInvSqrtTwoPi * std::exp(-0.5 * z * z); }

} // namespace

EffectDensity beta_density(int alpha, int beta) {
    if (alpha < 1 || beta < 1)
        throw std::invalid_argument("beta_density: integer parameters >= 1 required");
    const double norm = 1.0 / core::beta_fn(alpha, beta);
    const int p = alpha - 1, q = beta - 1;
    EffectDensity d;
    d.name = "beta_" + std::to_string(alpha) + "_" + std::to_string(beta);
    d.pdf = [=](double x) { return poly_beta(norm, p, q, x); };
    d.dpdf = [=](double x) { return poly_beta_d1(norm, p, q, x); };
    d.d2pdf = [=](double x) { return poly_beta_d2(norm, p, q, x); };
    d.sample = [=](core::RngStream& rng) {
        return order_statistic_draw(alpha, alpha + beta - 1, rng);
    };
    return d;
}

EffectDensity beta_mix_density() {
    const auto b39 = beta_density(3, 9);
    const auto b93 = beta_density(9, 3);
    EffectDensity d;
    d.name = "beta_mix";
    d.pdf = [=](double x) { return 0.5 * b39.pdf(x) + 0.5 * b93.pdf(x); };
    d.dpdf = [=](double x) { return 0.5 * b39.dpdf(x) + 0.5 * b93.dpdf(x); };
    d.d2pdf = [=](double x) { return 0.5 * b39.d2pdf(x) + 0.5 * b93.d2pdf(x); };
    d.sample = [=](core::RngStream& rng) {
        return rng.next_uniform() <= 0.5 ? b39.sample(rng) : b93.sample(rng);
    };
    return d;
}

EffectDensity truncnorm_mix_density() {
    struct Comp {
        double w, mu, sd, mass;
    };
    const Comp c1{0.6, 0.5, 0.1,
                  core::normal_cdf((1.0 - 0.5) / 0.1) - core::normal_cdf((0.0 - 0.5) / 0.1)};
    const Comp c2{0.4, 0.9, 0.03,
                  core::normal_cdf((1.0 - 0.9) / 0.03) - core::normal_cdf((0.0 - 0.9) / 0.03)};
    auto comp_pdf = [](const Comp& c, double x, int deriv) {
        const double z = (x - c.mu) / c.sd;
        const double base = c.w * normal_pdf(z) / (c.sd * c.mass);
        if (deriv == 0) return base;
        if (deriv == 1) return base * (-z / c.sd);
        return base * (z * z - 1.0) / (c.sd * c.sd);
    };
    EffectDensity d;
    d.name = "truncnorm_mix";
    d.pdf = [=](double x) { return comp_pdf(c1, x, 0) + comp_pdf(c2, x, 0); };
    d.dpdf = [=](double x) { return comp_pdf(c1, x, 1) + comp_pdf(c2, x, 1); };
    d.d2pdf = [=](double x) { return comp_pdf(c1, x, 2) + comp_pdf(c2, x, 2); };
    d.sample = [=](core::RngStream& rng) {
        for (;;) {
            const bool first = rng.next_uniform() <= 0.6;
            const double mu = first ? c1.mu : c2.mu;
            const double sd = first ? c1.sd : c2.sd;
            const double v = mu + sd * rng.next_normal();
            if (v >= 0.0 && v <= 1.0) return v;
        }
    };
    return d;
}

EffectDensity point_mass_density(double at) {
    if (at < 0.0 || at > 1.0)
        throw std::invalid_argument("point_mass_density: support is [0, 1]");
    EffectDensity d;
    d.name = "point_mass";
    d.sample = [at](core::RngStream&) { return at; };
    return d;
}

std::vector<double> sample_effects(const EffectDensity& density,
                                   std::size_t n_subjects,
                                   core::RngStream& rng) {
    std::vector<double> out(n_subjects);
    for (auto& v : out) {
        v = density.sample(rng);
        if (!(v >= 0.0 && v <= 1.0))
            throw std::runtime_error("sample_effects: draw outside [0, 1] from " +
                                     density.name);
    }
    return out;
}

} // namespace frsde::sde
