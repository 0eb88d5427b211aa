#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "frsde/fbm.hpp"
#include "frsde/grid.hpp"
#include "frsde/hurst.hpp"
#include "frsde/sde.hpp"

namespace frsde::mle {

/// Raised when the effect multiplier carries no information
/// (the normalizing integral of J2^2 dw is not positive).
struct UnidentifiableEffectError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Path-independent discretization data shared by every trajectory on a
/// common (model, grid, drift): the weights w, the effect functional J2,
/// and the per-cell kernel masses
///
///   K[k][i] = integral of k_H(t_k, .) over (t_i, t_{i+1}),
///
/// stored as packed triangular rows. All path integrals below pair these
/// exact cell masses with left-node integrand values, which keeps the
/// discrete estimator affine in the observations: replaying a trajectory
/// with its effect shifted by c shifts the estimate by exactly c.
class MolchanStencil {
public:
    MolchanStencil(const core::HurstModel& model, const core::TimeGrid& grid,
                   const sde::DriftSpec& drift);

    const core::HurstModel& model() const { return model_; }
    const core::TimeGrid& grid() const { return grid_; }
    const std::vector<double>& w() const { return w_; }
    const std::vector<double>& dw() const { return dw_; }
    const std::vector<double>& j2() const { return j2_; }

    /// Cell masses for node k (row of length k).
    const double* row(std::size_t k) const { return &mass_[(k - 1) * k / 2]; }

    const std::vector<double>& inv_sigma() const { return inv_sigma_; }

private:
    core::HurstModel model_;
    core::TimeGrid grid_;
    std::vector<double> w_, dw_, j2_, mass_, inv_sigma_;
};

/// Transformed view of one observed path: the semimartingale Z at the
/// nodes, the drift functionals J1 and J2 per cell, and the weights w.
struct MolchanView {
    core::TimeGrid grid;
    std::vector<double> z;  ///< nodes, z[0] = 0
    std::vector<double> j1; ///< cells
    std::vector<double> j2; ///< cells
    std::vector<double> w;  ///< nodes
};

/// Observation transform: Z_t = int_0^t k_H(t,s)/sigma(s) dX_s as a
/// left-point Riemann-Stieltjes sum with exact kernel cell masses, and
/// J1 = d/dw of the kernel cumulative of a(X)/sigma.
MolchanView molchan_transform(const MolchanStencil& stencil,
                              const std::vector<double>& path_values,
                              const sde::DriftSpec& drift);

/// Convenience overload building a one-off stencil.
MolchanView molchan_transform(const core::HurstModel& model,
                              const core::TimeGrid& grid,
                              const std::vector<double>& path_values,
                              const sde::DriftSpec& drift);

struct EffectEstimate {
    std::size_t subject = 0;
    double phi_hat = 0.0;
    double info = 0.0; ///< integral of J2^2 dw
};

/// Maximum-likelihood estimate of the effect from one transformed path:
///   phi_hat = (int J2 dZ - int J1 J2 dw) / int J2^2 dw.
EffectEstimate estimate_effect(const MolchanView& view);

/// All subjects of a bundle through one shared stencil.
std::vector<EffectEstimate> estimate_bundle(const sde::TrajectoryBundle& bundle);

/// Closed-form check value for the unit-coefficient mean-reverting case:
/// phi + M_T / w_T with the martingale M_T taken as a midpoint Riemann
/// sum over the driving noise. Simulation-mode only (needs the true
/// effect and the driving fBm); used to validate estimate_effect.
double vasicek_oracle(const core::HurstModel& model, double phi_true,
                      const fbm::FbmPath& noise);

/// CSV dump columns: subject,phi_true,phi_hat,info (phi_true blank when
/// unknown).
void write_estimates_csv(const std::vector<EffectEstimate>& estimates,
                         const std::vector<double>* true_effects,
                         const std::string& filename);

} // namespace frsde::mle
