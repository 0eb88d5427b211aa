#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "frsde/effect_density.hpp"
#include "frsde/fbm.hpp"
#include "frsde/grid.hpp"
#include "frsde/hurst.hpp"

namespace frsde::sde {

/// Drift/diffusion specification for dX = (a(X) + phi b(t)) dt + sigma(t) dW^H.
struct DriftSpec {
    std::string name;
    std::function<double(double)> a;     ///< state-dependent drift part
    std::function<double(double)> b;     ///< effect multiplier (time)
    std::function<double(double)> sigma; ///< diffusion coefficient (time), > 0
    double b_over_sigma_lower = 0.0;     ///< positive lower bound on b/sigma when known
    std::vector<double> params;          ///< serialized parameters
};

/// dX = (-beta X + phi) dt + sigma_scale dW^H. sigma_scale defaults to 1;
/// tiny values give the deterministic-drift limit used in tests.
DriftSpec vasicek_drift(double beta, double sigma_scale = 1.0);

/// Rebuild a suite drift from its serialized (name, params) pair.
DriftSpec drift_from_name(const std::string& name, const std::vector<double>& params);

/// n i.i.d. trajectories on a shared grid, plus the hidden effects when
/// produced by simulation.
struct TrajectoryBundle {
    core::HurstModel model;
    core::TimeGrid grid;
    DriftSpec drift;
    double x0 = 0.0;
    std::uint64_t master_seed = 0;
    std::vector<std::vector<double>> paths;   ///< n_subjects x (N+1)
    std::optional<std::vector<double>> true_effects;

    std::size_t n_subjects() const { return paths.size(); }
};

/// Euler simulation of one trajectory from a given fBm path.
std::vector<double> euler_path(const core::TimeGrid& grid, const DriftSpec& drift,
                               double effect, double x0,
                               const std::vector<double>& fbm_values,
                               std::size_t subject_index = 0);

/// Draws effects and simulates n_subjects trajectories. Trajectory j is a
/// deterministic function of (master_seed, j).
TrajectoryBundle simulate_bundle(const core::HurstModel& model,
                                 const core::TimeGrid& grid,
                                 const DriftSpec& drift,
                                 const EffectDensity& density,
                                 std::size_t n_subjects,
                                 std::uint64_t master_seed, double x0 = 0.0);

/// Long-format CSV (subject,k,t,X) plus a JSON sidecar carrying the model,
/// drift, seed and true effects. Round-trips bit-exactly.
void write_bundle(const TrajectoryBundle& bundle, const std::string& csv_path,
                  const std::string& json_path);
TrajectoryBundle read_bundle(const std::string& csv_path,
                             const std::string& json_path);

} // namespace frsde::sde
