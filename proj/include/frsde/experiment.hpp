#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frsde/effect_density.hpp"
#include "frsde/theory.hpp"

namespace frsde::bench {

enum class MPolicy { lscv, fixed, theoretical_opt };
enum class KdePolicy { silverman_paper, silverman_classical, fixed };

struct ExperimentConfig {
    /// beta_1_2 | beta_3_5 | beta_mix | truncnorm_mix, or "user" together
    /// with user_density.
    std::string density = "beta_1_2";
    std::optional<sde::EffectDensity> user_density;
    double hurst = 0.7;
    double horizon = 100.0;
    std::size_t grid_steps = 1000;
    std::size_t n_subjects = 100;
    std::size_t replicates = 100;
    MPolicy m_policy = MPolicy::lscv;
    int fixed_m = 0;
    KdePolicy kde_policy = KdePolicy::silverman_paper;
    double fixed_h = 0.0;
    std::uint64_t seed = 20240901;
    std::size_t eval_grid = 101;
    bool known_effects = false; ///< feed true effects straight to the estimators
    double vasicek_beta = 1.0;
    double sigma_scale = 1.0;

    void validate() const;
};

struct MetricSummary {
    double mean = 0.0;
    double stderr_ = 0.0;
};

struct EstimatorMetrics {
    MetricSummary ise, mse, mae;
    /// Mean estimate and mean absolute error at x in {0, 0.01, 0.99, 1}.
    std::array<double, 4> boundary_value{};
    std::array<double, 4> boundary_abs_err{};
    /// Mean estimated curve on the evaluation grid.
    std::vector<double> mean_curve;
};

struct MetricsReport {
    ExperimentConfig config;
    std::vector<double> eval_points;      ///< includes {0, 0.01, 0.99, 1}
    std::vector<double> truth;            ///< true density on eval_points
    EstimatorMetrics bernstein, kde;
    std::vector<double> selected_m;       ///< per replicate
    std::vector<double> selected_h;       ///< per replicate
    std::size_t replicates_done = 0;
    std::size_t replicates_failed = 0;
};

/// The four effect densities of the study plus the test point mass.
const sde::EffectDensity& density_suite(const std::string& name);
std::vector<std::string> density_suite_names();

/// Full Monte Carlo pipeline: sample effects, simulate the mean-reverting
/// model, recover effects by maximum likelihood, fit both density
/// estimators, and reduce ISE/MSE/MAE and boundary diagnostics across
/// replicates (deterministic in config.seed; replicates run in parallel).
MetricsReport run_experiment(const ExperimentConfig& config);

/// The boundary evaluation points every eval grid must contain.
constexpr std::array<double, 4> kBoundaryPoints{0.0, 0.01, 0.99, 1.0};

/// Evaluation abscissae: eval_grid equispaced points on [0,1] merged with
/// the mandatory boundary points.
std::vector<double> make_eval_points(std::size_t eval_grid);

/// Trapezoid ISE of (estimate - truth) over the (possibly nonuniform) grid.
double integrated_squared_error(const std::vector<double>& grid,
                                const std::vector<double>& est,
                                const std::vector<double>& truth);

} // namespace frsde::bench
