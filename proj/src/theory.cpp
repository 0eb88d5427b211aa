#include "frsde/theory.hpp"

#include <cmath>
#include <stdexcept>

#include "frsde/quadrature.hpp"

namespace frsde::theory {

namespace {

constexpr int kSupNormGrid = 10001;

double grid_sup(const std::function<double(double)>& f) {
    double best = 0.0;
    for (int i = 0; i < kSupNormGrid; ++i) {
        const double x = static_cast<double>(i) / (kSupNormGrid - 1);
        best = std::max(best, std::fabs(f(x)));
    }
    return best;
}

// Composite Simpson with one resolution-doubling self check.
double checked_simpson(const std::function<double(double)>& f, double a, double b) {
    auto simpson = [&](int panels) {
        const double h = (b - a) / (2 * panels);
        double acc = f(a) + f(b);
        for (int i = 1; i < 2 * panels; ++i)
            acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
        return acc * h / 3.0;
    };
    const double coarse = simpson(512);
    const double fine = simpson(1024);
    const double scale = std::max({std::fabs(fine), std::fabs(coarse), 1e-12});
    if (std::fabs(fine - coarse) > 1e-6 * scale)
        throw core::QuadratureError("theory: quadrature failed its doubling self-check");
    return fine;
}

} // namespace

DensityModel::DensityModel(std::string name, std::function<double(double)> f,
                           std::function<double(double)> df,
                           std::function<double(double)> d2f)
    : name_(std::move(name)), f_(std::move(f)), df_(std::move(df)), d2f_(std::move(d2f)) {
    for (int i = 0; i < kSupNormGrid; ++i) {
        const double x = static_cast<double>(i) / (kSupNormGrid - 1);
        if (f_(x) < -1e-12)
            throw std::invalid_argument("DensityModel: density must be nonnegative");
    }
    const double mass = checked_simpson(f_, 0.0, 1.0);
    if (std::fabs(mass - 1.0) > 1e-6)
        throw std::invalid_argument("DensityModel: density must integrate to 1 on [0,1]");
    sup_df_ = grid_sup(df_);
    sup_d2f_ = grid_sup(d2f_);
}

DensityModel DensityModel::from_effect_density(const sde::EffectDensity& density) {
    if (!density.pdf || !density.dpdf || !density.d2pdf)
        throw std::invalid_argument(
            "DensityModel: effect density lacks derivative information");
    return DensityModel(density.name, density.pdf, density.dpdf, density.d2pdf);
}

double edge_variance_profile(double x) {
    if (!(x > 0.0) || !(x < 1.0))
        throw std::domain_error("edge_variance_profile: x must lie in (0, 1)");
    return 1.0 / std::sqrt(4.0 * M_PI * x * (1.0 - x));
}

double asymptotic_bias(const DensityModel& model, int m, double x) {
    if (m < 1) throw std::invalid_argument("asymptotic_bias: m must be >= 1");
    return (1.0 - 2.0 * x) / 2.0 * model.df(x) / static_cast<double>(m);
}

double asymptotic_variance(const DensityModel& model, int m,
                           std::size_t n_subjects, double x) {
    const double n = static_cast<double>(n_subjects);
    if (x == 0.0 || x == 1.0) return m / n * model.f(x);
    return std::sqrt(static_cast<double>(m)) / n * model.f(x) * edge_variance_profile(x);
}

MiseConstants mise_constants(const DensityModel& model, BiasConstant variant) {
    // x = sin^2(theta) turns int f psi into pi^{-1/2} int f(sin^2 th) dth.
    const double c_var =
        checked_simpson([&](double th) { return model.f(std::sin(th) * std::sin(th)); },
                        0.0, M_PI / 2.0) /
        std::sqrt(M_PI);
    const double c_bias = checked_simpson(
        [&](double x) {
            const double g = (variant == BiasConstant::derivative_squared)
                                 ? model.df(x)
                                 : model.f(x);
            const double half = (1.0 - 2.0 * x) / 2.0;
            return half * half * g * g;
        },
        0.0, 1.0);
    return {c_var, c_bias};
}

double asymptotic_mise(const DensityModel& model, double m, std::size_t n_subjects,
                       BiasConstant variant) {
    if (!(m >= 1.0)) throw std::invalid_argument("asymptotic_mise: m must be >= 1");
    const auto c = mise_constants(model, variant);
    const double n = static_cast<double>(n_subjects);
    return std::sqrt(m) / n * c.c_var + c.c_bias / (m * m);
}

OptimalOrder optimal_m(const DensityModel& model, std::size_t n_subjects,
                       BiasConstant variant) {
    const auto c = mise_constants(model, variant);
    if (!(c.c_bias > 0.0))
        throw std::invalid_argument(
            "optimal_m: squared-bias constant vanishes (flat density); "
            "tune m against the variance term directly");
    const double n = static_cast<double>(n_subjects);
    const double m_opt = std::pow(4.0 * c.c_bias / c.c_var, 0.4) * std::pow(n, 0.4);
    const double attained = 1.25 * std::pow(4.0, 0.2) * std::pow(c.c_var, 0.8) *
                            std::pow(c.c_bias, 0.2) * std::pow(n, -0.8);
    return {m_opt, attained};
}

double uniform_error_bound(const DensityModel& model, int m, std::size_t n_subjects,
                           double horizon, const core::HurstModel& hurst,
                           double c_lower) {
    if (m < 1) throw std::invalid_argument("uniform_error_bound: m must be >= 1");
    if (!(c_lower > 0.0))
        throw std::invalid_argument("uniform_error_bound: needs a positive lower bound on b/sigma");
    const double md = static_cast<double>(m);
    const double n = static_cast<double>(n_subjects);
    const double estimation = hurst.lambda() * std::pow(md, 4.0) /
                              (c_lower * c_lower * std::pow(horizon, 2.0 - 2.0 * hurst.h()));
    const double sampling = std::pow(md, 1.5) / std::sqrt(n);
    const double smoothing = (model.sup_df() / 2.0 + model.sup_d2f() / 8.0) / md;
    return estimation + sampling + smoothing;
}

} // namespace frsde::theory
