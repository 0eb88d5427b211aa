#include "frsde/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "frsde/bernstein.hpp"
#include "frsde/fbm.hpp"
#include "frsde/kde.hpp"
#include "frsde/molchan.hpp"
#include "frsde/parallel.hpp"
#include "frsde/sde.hpp"

namespace frsde::bench {

void ExperimentConfig::validate() const {
    if (density == "user") {
        if (!user_density || !user_density->sample)
            throw std::invalid_argument("config: density 'user' needs a user_density sampler");
    } else {
        density_suite(density); // throws on unknown names
    }
    if (!(hurst > 0.5 && hurst < 1.0))
        throw std::invalid_argument("config: hurst must lie in (1/2, 1)");
    if (!(horizon > 0.0)) throw std::invalid_argument("config: horizon must be > 0");
    if (grid_steps < 8) throw std::invalid_argument("config: grid_steps must be >= 8");
    if (n_subjects < 3) throw std::invalid_argument("config: n_subjects must be >= 3");
    if (replicates < 1) throw std::invalid_argument("config: replicates must be >= 1");
    if (m_policy == MPolicy::fixed && fixed_m < 1)
        throw std::invalid_argument("config: fixed m policy needs fixed_m >= 1");
    if (kde_policy == KdePolicy::fixed && !(fixed_h > 0.0))
        throw std::invalid_argument("config: fixed h policy needs fixed_h > 0");
    if (eval_grid < 2) throw std::invalid_argument("config: eval_grid must be >= 2");
    if (!(vasicek_beta > 0.0)) throw std::invalid_argument("config: beta must be > 0");
    if (!(sigma_scale > 0.0)) throw std::invalid_argument("config: sigma_scale must be > 0");
}

const sde::EffectDensity& density_suite(const std::string& name) {
    static const std::map<std::string, sde::EffectDensity> suite = [] {
        std::map<std::string, sde::EffectDensity> s;
        s["beta_1_2"] = sde::beta_density(1, 2);
        s["beta_3_5"] = sde::beta_density(3, 5);
        s["beta_mix"] = sde::beta_mix_density();
        s["truncnorm_mix"] = sde::truncnorm_mix_density();
        // Degenerate fixture (not listed); its Lebesgue density is 0 a.e.
        auto pm = sde::point_mass_density(0.5);
        pm.pdf = [](double) { return 0.0; };
        pm.dpdf = [](double) { return 0.0; };
        pm.d2pdf = [](double) { return 0.0; };
        s["point_mass"] = pm;
        return s;
    }();
    const auto it = suite.find(name);
    if (it == suite.end())
        throw std::invalid_argument("density_suite: unknown density '" + name + "'");
    return it->second;
}

std::vector<std::string> density_suite_names() {
    return {"beta_1_2", "beta_3_5", "beta_mix", "truncnorm_mix"};
}

std::vector<double> make_eval_points(std::size_t eval_grid) {
    std::vector<double> pts;
    pts.reserve(eval_grid + kBoundaryPoints.size());
    for (std::size_t i = 0; i < eval_grid; ++i)
        pts.push_back(static_cast<double>(i) / static_cast<double>(eval_grid - 1));
    pts.insert(pts.end(), kBoundaryPoints.begin(), kBoundaryPoints.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

double integrated_squared_error(const std::vector<double>& grid,
                                const std::vector<double>& est,
                                const std::vector<double>& truth) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double dl = est[i] - truth[i];
        const double dr = est[i + 1] - truth[i + 1];
        acc += 0.5 * (dl * dl + dr * dr) * (grid[i + 1] - grid[i]);
    }
    return acc;
}

namespace {

struct ReplicateRecord {
    bool ok = false;
    std::string error;
    double m = 0.0, h = 0.0;
    std::vector<double> f_bern, f_kde;
};

MetricSummary summarize(const std::vector<double>& values) {
    MetricSummary s;
    const double n = static_cast<double>(values.size());
    for (const double v : values) s.mean += v;
    s.mean /= n;
    if (values.size() > 1) {
        double ss = 0.0;
        for (const double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stderr_ = std::sqrt(ss / (n - 1.0) / n);
    }
    return s;
}

} // namespace

MetricsReport run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto& density =
        config.density == "user" ? *config.user_density : density_suite(config.density);
    if (!density.pdf)
        throw std::invalid_argument("run_experiment: density lacks an evaluable pdf");
    const core::HurstModel model(config.hurst);
    const core::TimeGrid grid(config.horizon, config.grid_steps);
    const auto drift = sde::vasicek_drift(config.vasicek_beta, config.sigma_scale);

    // Shared, read-only simulation machinery.
    std::optional<fbm::CholeskyFbm> engine;
    std::optional<mle::MolchanStencil> stencil;
    if (!config.known_effects) {
        engine.emplace(model, grid);
        stencil.emplace(model, grid, drift);
    }

    const auto eval_points = make_eval_points(config.eval_grid);
    std::vector<double> truth(eval_points.size());
    for (std::size_t i = 0; i < eval_points.size(); ++i)
        truth[i] = density.pdf(eval_points[i]);

    int fixed_theoretical_m = 0;
    if (config.m_policy == MPolicy::theoretical_opt) {
        const auto dm = theory::DensityModel::from_effect_density(density);
        fixed_theoretical_m = std::max(
            1, static_cast<int>(std::lround(theory::optimal_m(dm, config.n_subjects).m_opt)));
    }

    std::vector<ReplicateRecord> records(config.replicates);
    core::parallel_for(config.replicates, [&](std::size_t r) {
        auto& rec = records[r];
        try {
            const std::uint64_t rep_seed =
                core::RngStream(config.seed, 0x9E3779B9ULL + r).next_u64();
            std::vector<double> samples(config.n_subjects);
            if (config.known_effects) {
                // Same per-subject streams as the simulation branch, so the
                // ablation pairs each replicate with identical true effects.
                for (std::size_t j = 0; j < config.n_subjects; ++j) {
                    core::RngStream rng(rep_seed, j);
                    samples[j] = density.sample(rng);
                    if (!(samples[j] >= 0.0 && samples[j] <= 1.0))
                        throw std::runtime_error("effect draw outside [0, 1]");
                }
            } else {
                for (std::size_t j = 0; j < config.n_subjects; ++j) {
                    core::RngStream rng(rep_seed, j);
                    const double phi = density.sample(rng);
                    const auto noise = engine->sample(rng);
                    const auto path =
                        sde::euler_path(grid, drift, phi, 0.0, noise.values, j);
                    samples[j] =
                        mle::estimate_effect(mle::molchan_transform(*stencil, path, drift))
                            .phi_hat;
                }
            }

            int m = 0;
            switch (config.m_policy) {
                case MPolicy::lscv:
                    m = density::lscv_select_m(samples,
                                               density::default_m_grid(samples.size()));
                    break;
                case MPolicy::fixed:
                    m = config.fixed_m;
                    break;
                case MPolicy::theoretical_opt:
                    m = fixed_theoretical_m;
                    break;
            }
            const auto bern = density::fit_bernstein(samples, m);

            double h = 0.0;
            switch (config.kde_policy) {
                case KdePolicy::silverman_paper:
                    h = density::silverman_bandwidth(samples,
                                                     density::SilvermanVariant::scaled_iqr);
                    break;
                case KdePolicy::silverman_classical:
                    h = density::silverman_bandwidth(samples,
                                                     density::SilvermanVariant::classical);
                    break;
                case KdePolicy::fixed:
                    h = config.fixed_h;
                    break;
            }
            const auto kde = density::fit_kde(samples, h);

            rec.m = m;
            rec.h = h;
            rec.f_bern.resize(eval_points.size());
            rec.f_kde.resize(eval_points.size());
            for (std::size_t i = 0; i < eval_points.size(); ++i) {
                rec.f_bern[i] = bern(eval_points[i]);
                rec.f_kde[i] = kde(eval_points[i]);
            }
            rec.ok = true;
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
    });

    MetricsReport report;
    report.config = config;
    report.eval_points = eval_points;
    report.truth = truth;

    std::vector<const ReplicateRecord*> good;
    for (const auto& rec : records)
        if (rec.ok) good.push_back(&rec);
    report.replicates_done = good.size();
    report.replicates_failed = config.replicates - good.size();
    if (report.replicates_failed * 20 > config.replicates) {
        std::string detail = "run_experiment: more than 5% of replicates failed";
        for (const auto& rec : records)
            if (!rec.ok) {
                detail += "; first failure: " + rec.error;
                break;
            }
        throw std::runtime_error(detail);
    }
    if (good.empty()) throw std::runtime_error("run_experiment: no replicate succeeded");

    // Boundary point positions inside the eval grid.
    std::array<std::size_t, 4> bidx{};
    for (std::size_t b = 0; b < kBoundaryPoints.size(); ++b)
        bidx[b] = std::lower_bound(eval_points.begin(), eval_points.end(),
                                   kBoundaryPoints[b]) -
                  eval_points.begin();

    auto reduce = [&](auto curve_of) -> EstimatorMetrics {
        EstimatorMetrics out;
        const std::size_t npts = eval_points.size();
        std::vector<double> ise, mse, mae;
        out.mean_curve.assign(npts, 0.0);
        std::array<double, 4> bval{}, berr{};
        for (const auto* rec : good) {
            const auto& curve = curve_of(*rec);
            double se_sum = 0.0, ae_sum = 0.0;
            for (std::size_t i = 0; i < npts; ++i) {
                const double d = curve[i] - truth[i];
                se_sum += d * d;
                ae_sum += std::fabs(d);
                out.mean_curve[i] += curve[i];
            }
            ise.push_back(integrated_squared_error(eval_points, curve, truth));
            mse.push_back(se_sum / static_cast<double>(npts));
            mae.push_back(ae_sum / static_cast<double>(npts));
            for (std::size_t b = 0; b < 4; ++b) {
                bval[b] += curve[bidx[b]];
                berr[b] += std::fabs(curve[bidx[b]] - truth[bidx[b]]);
            }
        }
        const double ng = static_cast<double>(good.size());
        for (auto& v : out.mean_curve) v /= ng;
        for (std::size_t b = 0; b < 4; ++b) {
            out.boundary_value[b] = bval[b] / ng;
            out.boundary_abs_err[b] = berr[b] / ng;
        }
        out.ise = summarize(ise);
        out.mse = summarize(mse);
        out.mae = summarize(mae);
        return out;
    };

    report.bernstein = reduce([](const ReplicateRecord& r) -> const std::vector<double>& {
        return r.f_bern;
    });
    report.kde = reduce([](const ReplicateRecord& r) -> const std::vector<double>& {
        return r.f_kde;
    });
    for (const auto* rec : good) {
        report.selected_m.push_back(rec->m);
        report.selected_h.push_back(rec->h);
    }
    return report;
}

} // namespace frsde::bench
