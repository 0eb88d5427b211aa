#pragma once

#include <functional>
#include <string>

#include "frsde/effect_density.hpp"
#include "frsde/hurst.hpp"

namespace frsde::theory {

/// Twice continuously differentiable density on [0, 1] with cached sup
/// norms of its derivatives (dense-grid maximization, 10001 points).
class DensityModel {
public:
    DensityModel(std::string name, std::function<double(double)> f,
                 std::function<double(double)> df,
                 std::function<double(double)> d2f);

    static DensityModel from_effect_density(const sde::EffectDensity& density);

    double f(double x) const { return f_(x); }
    double df(double x) const { return df_(x); }
    double d2f(double x) const { return d2f_(x); }
    double sup_df() const { return sup_df_; }
    double sup_d2f() const { return sup_d2f_; }
    const std::string& name() const { return name_; }

private:
    std::string name_;
    std::function<double(double)> f_, df_, d2f_;
    double sup_df_, sup_d2f_;
};

/// Edge-variance profile psi(x) = (4 pi x (1-x))^{-1/2}.
double edge_variance_profile(double x);

/// Leading smoothing bias m^{-1} (1-2x)/2 f'(x).
double asymptotic_bias(const DensityModel& model, int m, double x);

/// Leading estimator variance: m^{1/2} n^{-1} f(x) psi(x) in the interior,
/// m n^{-1} f(x) at x in {0, 1}.
double asymptotic_variance(const DensityModel& model, int m,
                           std::size_t n_subjects, double x);

/// Which integrand enters the squared-bias constant. derivative_squared is
/// the default; density_squared reproduces an alternate published constant
/// for side-by-side comparison.
enum class BiasConstant { derivative_squared, density_squared };

struct MiseConstants {
    double c_var;  ///< int_0^1 f psi
    double c_bias; ///< int_0^1 ((1-2x)/2)^2 (f' or f)^2
};

/// Both integrals with self-checked quadrature (resolution doubling must
/// agree to 1e-6 relative or a QuadratureError is raised). The variance
/// integral is evaluated as pi^{-1/2} int_0^{pi/2} f(sin^2 theta) dtheta,
/// which removes psi's endpoint singularities exactly.
MiseConstants mise_constants(const DensityModel& model,
                             BiasConstant variant = BiasConstant::derivative_squared);

/// MISE(m, n) ~ m^{1/2} n^{-1} c_var + m^{-2} c_bias.
double asymptotic_mise(const DensityModel& model, double m, std::size_t n_subjects,
                       BiasConstant variant = BiasConstant::derivative_squared);

struct OptimalOrder {
    double m_opt;          ///< (4 c_bias / c_var)^{2/5} n^{2/5}
    double attained_mise;  ///< (5/4) 4^{1/5} c_var^{4/5} c_bias^{1/5} n^{-4/5}
};

/// Stationary point of the asymptotic MISE in m. Requires c_bias > 0
/// (flat densities need variance-only tuning and are rejected).
OptimalOrder optimal_m(const DensityModel& model, std::size_t n_subjects,
                       BiasConstant variant = BiasConstant::derivative_squared);

/// Non-asymptotic bound on E sup |f_hat - f|:
///   lambda_H m^4 / (C^2 T^{2-2H}) + m^{3/2} n^{-1/2}
///     + m^{-1} (||f'||/2 + ||f''||/8),
/// where C is a positive lower bound on b/sigma.
double uniform_error_bound(const DensityModel& model, int m, std::size_t n_subjects,
                           double horizon, const core::HurstModel& hurst,
                           double c_lower);

} // namespace frsde::theory
