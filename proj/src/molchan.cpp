#include "frsde/molchan.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "frsde/parallel.hpp"
#include "frsde/quadrature.hpp"

namespace frsde::mle {

MolchanStencil::MolchanStencil(const core::HurstModel& model,
                               const core::TimeGrid& grid,
                               const sde::DriftSpec& drift)
    : model_(model), grid_(grid) {
    const std::size_t n = grid.steps();
    if (n < 8)
        throw std::invalid_argument("MolchanStencil: grid too coarse (need >= 8 cells)");

    w_.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) w_[k] = core::weight_wH(model, grid.node(k));
    dw_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        dw_[k] = w_[k + 1] - w_[k];
        if (!(dw_[k] > 0.0))
            throw std::invalid_argument("MolchanStencil: weights must be strictly increasing");
    }

    mass_.resize(n * (n + 1) / 2);
    for (std::size_t k = 1; k <= n; ++k) {
        const auto row_masses = core::kernel_cell_masses(model, grid, k);
        std::copy(row_masses.begin(), row_masses.end(), &mass_[(k - 1) * k / 2]);
    }

    inv_sigma_.resize(n);
    std::vector<double> b_over_sigma(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = grid.node(i);
        const double sig = drift.sigma(t);
        if (!(sig > 0.0))
            throw std::invalid_argument("MolchanStencil: sigma must be positive");
        inv_sigma_[i] = 1.0 / sig;
        b_over_sigma[i] = drift.b(t) * inv_sigma_[i];
    }

    // J2 = d/dw of the kernel cumulative of b/sigma.
    j2_.resize(n);
    double prev = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double* masses = row(k);
        double c2 = 0.0;
        for (std::size_t i = 0; i < k; ++i) c2 += masses[i] * b_over_sigma[i];
        j2_[k - 1] = (c2 - prev) / dw_[k - 1];
        prev = c2;
    }
}

MolchanView molchan_transform(const MolchanStencil& stencil,
                              const std::vector<double>& path_values,
                              const sde::DriftSpec& drift) {
    const auto& grid = stencil.grid();
    const std::size_t n = grid.steps();
    if (path_values.size() != n + 1)
        throw std::invalid_argument("molchan_transform: path does not match grid");

    const double inv_dt = 1.0 / grid.dt();
    const auto& inv_sigma = stencil.inv_sigma();
    std::vector<double> dx_density(n), a_over_sigma(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(path_values[i + 1]))
            throw std::runtime_error("molchan_transform: non-finite path value at node " +
                                     std::to_string(i + 1));
        dx_density[i] = (path_values[i + 1] - path_values[i]) * inv_dt * inv_sigma[i];
        a_over_sigma[i] = drift.a(path_values[i]) * inv_sigma[i];
    }

    MolchanView view{grid,
                     std::vector<double>(n + 1, 0.0),
                     std::vector<double>(n),
                     stencil.j2(),
                     stencil.w()};
    double c1_prev = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double* masses = stencil.row(k);
        double z = 0.0, c1 = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            z += masses[i] * dx_density[i];
            c1 += masses[i] * a_over_sigma[i];
        }
        view.z[k] = z;
        view.j1[k - 1] = (c1 - c1_prev) / stencil.dw()[k - 1];
        c1_prev = c1;
    }
    return view;
}

MolchanView molchan_transform(const core::HurstModel& model,
                              const core::TimeGrid& grid,
                              const std::vector<double>& path_values,
                              const sde::DriftSpec& drift) {
    return molchan_transform(MolchanStencil(model, grid, drift), path_values, drift);
}

EffectEstimate estimate_effect(const MolchanView& view) {
    const std::size_t n = view.grid.steps();
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double dwk = view.w[k + 1] - view.w[k];
        num += view.j2[k] * ((view.z[k + 1] - view.z[k]) - view.j1[k] * dwk);
        den += view.j2[k] * view.j2[k] * dwk;
    }
    if (!(den > 0.0))
        throw UnidentifiableEffectError(
            "estimate_effect: integral of J2^2 dw is not positive");
    if (!std::isfinite(num))
        throw std::runtime_error("estimate_effect: non-finite likelihood integrals");
    return EffectEstimate{0, num / den, den};
}

std::vector<EffectEstimate> estimate_bundle(const sde::TrajectoryBundle& bundle) {
    const MolchanStencil stencil(bundle.model, bundle.grid, bundle.drift);
    std::vector<EffectEstimate> out(bundle.n_subjects());
    core::parallel_for(bundle.n_subjects(), [&](std::size_t j) {
        out[j] = estimate_effect(molchan_transform(stencil, bundle.paths[j], bundle.drift));
        out[j].subject = j;
    });
    return out;
}

double vasicek_oracle(const core::HurstModel& model, double phi_true,
                      const fbm::FbmPath& noise) {
    const auto& grid = noise.grid;
    const double horizon = grid.horizon();
    double mt = 0.0;
    for (std::size_t i = 0; i < grid.steps(); ++i) {
        const double mid = 0.5 * (grid.node(i) + grid.node(i + 1));
        mt += core::kernel_kH(model, horizon, mid) * (noise.values[i + 1] - noise.values[i]);
    }
    return phi_true + mt / core::weight_wH(model, horizon);
}

void write_estimates_csv(const std::vector<EffectEstimate>& estimates,
                         const std::vector<double>* true_effects,
                         const std::string& filename) {
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("write_estimates_csv: cannot open " + filename);
    out << "subject,phi_true,phi_hat,info\n";
    char buf[128];
    for (const auto& e : estimates) {
        if (true_effects) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g", e.subject,
                          (*true_effects)[e.subject], e.phi_hat, e.info);
        } else {
            std::snprintf(buf, sizeof buf, "%zu,,%.17g,%.17g", e.subject, e.phi_hat,
                          e.info);
        }
        out << buf << '\n';
    }
}

} // namespace frsde::mle
