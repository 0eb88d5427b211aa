#include "frsde/sde.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "frsde/parallel.hpp"

namespace frsde::sde {

DriftSpec vasicek_drift(double beta, double sigma_scale) {
    if (!(beta > 0.0)) throw std::invalid_argument("vasicek_drift: beta must be > 0");
    if (!(sigma_scale > 0.0))
        throw std::invalid_argument("vasicek_drift: sigma_scale must be > 0");
    DriftSpec d;
    d.name = "vasicek";
    d.a = [beta](double x) { return -beta * x; };
    d.b = [](double) { return 1.0; };
    d.sigma = [sigma_scale](double) { return sigma_scale; };
    d.b_over_sigma_lower = 1.0 / sigma_scale;
    d.params = {beta, sigma_scale};
    return d;
}

DriftSpec drift_from_name(const std::string& name, const std::vector<double>& params) {
    if (name == "vasicek") {
        if (params.size() != 2)
            throw std::invalid_argument("drift_from_name: vasicek expects 2 parameters");
        return vasicek_drift(params[0], params[1]);
    }
    throw std::invalid_argument("drift_from_name: unknown drift '" + name + "'");
}

std::vector<double> euler_path(const core::TimeGrid& grid, const DriftSpec& drift,
                               double effect, double x0,
                               const std::vector<double>& fbm_values,
                               std::size_t subject_index) {
    const std::size_t n = grid.steps();
    if (fbm_values.size() != n + 1)
        throw std::invalid_argument("euler_path: fBm path does not match grid");
    const double dt = grid.dt();
    std::vector<double> x(n + 1);
    x[0] = x0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = grid.node(k);
        x[k + 1] = x[k] + (drift.a(x[k]) + effect * drift.b(t)) * dt +
                   drift.sigma(t) * (fbm_values[k + 1] - fbm_values[k]);
        if (!std::isfinite(x[k + 1]))
            throw std::runtime_error("euler_path: non-finite state for subject " +
                                     std::to_string(subject_index) + " at step " +
                                     std::to_string(k + 1));
    }
    return x;
}

TrajectoryBundle simulate_bundle(const core::HurstModel& model,
                                 const core::TimeGrid& grid,
                                 const DriftSpec& drift,
                                 const EffectDensity& density,
                                 std::size_t n_subjects,
                                 std::uint64_t master_seed, double x0) {
    if (n_subjects < 1)
        throw std::invalid_argument("simulate_bundle: n_subjects must be >= 1");
    for (std::size_t k = 0; k <= grid.steps(); ++k)
        if (!(drift.sigma(grid.node(k)) > 0.0))
            throw std::invalid_argument("simulate_bundle: sigma must be positive on the grid");

    const fbm::CholeskyFbm engine(model, grid);
    TrajectoryBundle bundle{model, grid, drift, x0, master_seed, {}, {}};
    bundle.paths.resize(n_subjects);
    std::vector<double> effects(n_subjects);
    // Subject j depends only on (master_seed, j); assembly is by index, so
    // the result is identical however the loop is scheduled.
    core::parallel_for(n_subjects, [&](std::size_t j) {
        core::RngStream rng(master_seed, j);
        effects[j] = density.sample(rng);
        const auto noise = engine.sample(rng);
        bundle.paths[j] = euler_path(grid, drift, effects[j], x0, noise.values, j);
    });
    bundle.true_effects = std::move(effects);
    return bundle;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void write_bundle(const TrajectoryBundle& bundle, const std::string& csv_path,
                  const std::string& json_path) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("write_bundle: cannot open " + csv_path);
    csv << "subject,k,t,X\n";
    for (std::size_t j = 0; j < bundle.paths.size(); ++j)
        for (std::size_t k = 0; k < bundle.paths[j].size(); ++k)
            csv << j << ',' << k << ',' << fmt17(bundle.grid.node(k)) << ','
                << fmt17(bundle.paths[j][k]) << '\n';

    nlohmann::json meta;
    meta["hurst"] = bundle.model.h();
    meta["horizon"] = bundle.grid.horizon();
    meta["grid_steps"] = bundle.grid.steps();
    meta["drift"] = bundle.drift.name;
    meta["drift_params"] = bundle.drift.params;
    meta["x0"] = bundle.x0;
    meta["seed"] = bundle.master_seed;
    meta["n_subjects"] = bundle.paths.size();
    if (bundle.true_effects) meta["true_effects"] = *bundle.true_effects;
    std::ofstream js(json_path);
    if (!js) throw std::runtime_error("write_bundle: cannot open " + json_path);
    js << meta.dump(2) << '\n';
}

TrajectoryBundle read_bundle(const std::string& csv_path,
                             const std::string& json_path) {
    std::ifstream js(json_path);
    if (!js) throw std::runtime_error("read_bundle: cannot open " + json_path);
    nlohmann::json meta = nlohmann::json::parse(js);

    const core::HurstModel model(meta.at("hurst").get<double>());
    const core::TimeGrid grid(meta.at("horizon").get<double>(),
                              meta.at("grid_steps").get<std::size_t>());
    const auto drift = drift_from_name(meta.at("drift").get<std::string>(),
                                       meta.at("drift_params").get<std::vector<double>>());
    TrajectoryBundle bundle{model, grid, drift,
                            meta.at("x0").get<double>(),
                            meta.at("seed").get<std::uint64_t>(),
                            {},
                            {}};
    const auto n_subjects = meta.at("n_subjects").get<std::size_t>();
    bundle.paths.assign(n_subjects, std::vector<double>(grid.node_count(), 0.0));
    if (meta.contains("true_effects"))
        bundle.true_effects = meta["true_effects"].get<std::vector<double>>();

    std::ifstream csv(csv_path);
    if (!csv) throw std::runtime_error("read_bundle: cannot open " + csv_path);
    std::string line;
    std::getline(csv, line); // header
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        std::getline(ss, field, ',');
        const std::size_t j = std::stoul(field);
        std::getline(ss, field, ',');
        const std::size_t k = std::stoul(field);
        std::getline(ss, field, ','); // t, recomputed from the grid
        std::getline(ss, field, ',');
        if (j >= n_subjects || k >= grid.node_count())
            throw std::runtime_error("read_bundle: index out of range in " + csv_path);
        bundle.paths[j][k] = std::strtod(field.c_str(), nullptr);
    }
    return bundle;
}

} // namespace frsde::sde
