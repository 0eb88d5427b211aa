#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "frsde/effect_density.hpp"
#include "frsde/sde.hpp"

using namespace frsde;

namespace {

double sample_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x;
    return s / static_cast<double>(v.size());
}

} // namespace

TEST_CASE("point-mass effects are constant") {
    core::RngStream rng(1, 0);
    const auto draws = sde::sample_effects(sde::point_mass_density(0.5), 100, rng);
    for (const double d : draws) CHECK(d == 0.5);
}

TEST_CASE("effect sampler means match the distributions") {
    core::RngStream rng(2, 0);
    SUBCASE("Beta(1,2) has mean 1/3") {
        const auto d = sde::sample_effects(sde::beta_density(1, 2), 100000, rng);
        CHECK(sample_mean(d) == doctest::Approx(1.0 / 3.0).epsilon(0.015));
        for (const double x : d) CHECK((x >= 0.0 && x <= 1.0));
    }
    SUBCASE("symmetric Beta mixture has mean 1/2") {
        const auto d = sde::sample_effects(sde::beta_mix_density(), 100000, rng);
        CHECK(std::fabs(sample_mean(d) - 0.5) < 0.005);
    }
    SUBCASE("Beta(3,5) has mean 3/8") {
        const auto d = sde::sample_effects(sde::beta_density(3, 5), 100000, rng);
        CHECK(std::fabs(sample_mean(d) - 0.375) < 0.005);
    }
    SUBCASE("truncated normal mixture stays in [0,1]") {
        const auto d = sde::sample_effects(sde::truncnorm_mix_density(), 20000, rng);
        for (const double x : d) CHECK((x >= 0.0 && x <= 1.0));
        // Component means 0.5 and 0.9 with weights 0.6/0.4.
        CHECK(std::fabs(sample_mean(d) - 0.66) < 0.01);
    }
}

TEST_CASE("suite density functions integrate to one") {
    const std::vector<sde::EffectDensity> suite{
        sde::beta_density(1, 2), sde::beta_density(3, 5), sde::beta_mix_density(),
        sde::truncnorm_mix_density()};
    // Trapezoid on a fine grid is plenty at this tolerance.
    for (const auto& density : suite) {
        constexpr int n = 20000;
        double acc = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double x = static_cast<double>(i) / n;
            acc += density.pdf(x) * ((i == 0 || i == n) ? 0.5 : 1.0);
        }
        CHECK(acc / n == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("beta_3_5 density shape") {
    const auto d = sde::beta_density(3, 5);
    CHECK(d.pdf(0.0) == 0.0);
    CHECK(d.pdf(1.0) == 0.0);
    CHECK(d.pdf(0.5) == doctest::Approx(105.0 * 0.25 * 0.0625).epsilon(1e-12));
    CHECK(d.dpdf(0.5) == doctest::Approx(210.0 * 0.5 * 0.125 * (1 - 1.5)).epsilon(1e-12));
}

TEST_CASE("degenerate drift collapses Euler to the driving noise") {
    const core::HurstModel model(0.7);
    const core::TimeGrid grid(10.0, 64);
    sde::DriftSpec drift;
    drift.name = "zero";
    drift.a = [](double) { return 0.0; };
    drift.b = [](double) { return 0.0; };
    drift.sigma = [](double) { return 1.0; };
    core::RngStream rng(5, 0);
    const auto noise = fbm::simulate_fbm(model, grid, rng);
    const auto x = sde::euler_path(grid, drift, 0.77, 0.0, noise.values);
    for (std::size_t k = 0; k < x.size(); ++k)
        CHECK(x[k] == doctest::Approx(noise.values[k]).epsilon(1e-13));
}

TEST_CASE("vanishing diffusion gives the deterministic ramp") {
    const core::TimeGrid grid(10.0, 64);
    sde::DriftSpec drift;
    drift.name = "ramp";
    drift.a = [](double) { return 0.0; };
    drift.b = [](double) { return 1.0; };
    drift.sigma = [](double) { return 1e-30; };
    const core::HurstModel model(0.7);
    core::RngStream rng(6, 0);
    const auto noise = fbm::simulate_fbm(model, grid, rng);
    const auto x = sde::euler_path(grid, drift, 0.42, 0.0, noise.values);
    for (std::size_t k = 0; k < x.size(); ++k)
        CHECK(x[k] == doctest::Approx(0.42 * grid.node(k)).epsilon(1e-12));
}

TEST_CASE("mean-reverting level approaches effect / beta") {
    const core::HurstModel model(0.7);
    const core::TimeGrid grid(50.0, 256);
    const auto drift = sde::vasicek_drift(1.0);
    const auto density = sde::point_mass_density(0.8);
    const auto bundle = sde::simulate_bundle(model, grid, drift, density, 300, 99);
    std::vector<double> finals(bundle.n_subjects());
    for (std::size_t j = 0; j < finals.size(); ++j) finals[j] = bundle.paths[j].back();
    CHECK(std::fabs(sample_mean(finals) - 0.8) < 0.2);
}

TEST_CASE("strong-order refinement with coupled increments") {
    const core::HurstModel model(0.7);
    const std::size_t fine_n = 512;
    const core::TimeGrid fine(10.0, fine_n);
    const fbm::CholeskyFbm engine(model, fine);
    const auto drift = sde::vasicek_drift(1.0);

    auto coarsen = [&](const std::vector<double>& w, std::size_t factor) {
        std::vector<double> out;
        for (std::size_t k = 0; k < w.size(); k += factor) out.push_back(w[k]);
        return out;
    };

    double d_coarse = 0.0, d_fine = 0.0;
    constexpr int reps = 40;
    for (int r = 0; r < reps; ++r) {
        core::RngStream rng(1234, r);
        const auto w = engine.sample(rng);
        const auto x4 = sde::euler_path(fine, drift, 0.5, 0.0, w.values);
        const auto x2 = sde::euler_path(core::TimeGrid(10.0, fine_n / 2), drift, 0.5, 0.0,
                                        coarsen(w.values, 2));
        const auto x1 = sde::euler_path(core::TimeGrid(10.0, fine_n / 4), drift, 0.5, 0.0,
                                        coarsen(w.values, 4));
        d_coarse += std::fabs(x1.back() - x2.back());
        d_fine += std::fabs(x2.back() - x4.back());
    }
    CHECK(d_fine < d_coarse); // halving the step shrinks the strong error
}

TEST_CASE("bundle determinism and stream independence") {
    const core::HurstModel model(0.7);
    const core::TimeGrid grid(5.0, 32);
    const auto drift = sde::vasicek_drift(1.0);
    const auto density = sde::beta_density(1, 2);
    const auto b1 = sde::simulate_bundle(model, grid, drift, density, 4, 2024);
    const auto b2 = sde::simulate_bundle(model, grid, drift, density, 4, 2024);
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t k = 0; k <= 32; ++k)
            CHECK(b1.paths[j][k] == b2.paths[j][k]);
    // A larger bundle reproduces the same leading trajectories.
    const auto b3 = sde::simulate_bundle(model, grid, drift, density, 8, 2024);
    for (std::size_t j = 0; j < 4; ++j)
        CHECK(b3.paths[j][32] == b1.paths[j][32]);
}

TEST_CASE("bundle CSV + sidecar round-trips bit-exactly") {
    const core::HurstModel model(0.65);
    const core::TimeGrid grid(3.0, 16);
    const auto bundle = sde::simulate_bundle(model, grid, sde::vasicek_drift(0.5),
                                             sde::beta_density(3, 5), 5, 777);
    const auto dir = std::filesystem::temp_directory_path();
    const auto csv = (dir / "frsde_bundle_test.csv").string();
    const auto js = (dir / "frsde_bundle_test.json").string();
    sde::write_bundle(bundle, csv, js);
    const auto back = sde::read_bundle(csv, js);
    CHECK(back.model.h() == bundle.model.h());
    CHECK(back.grid.steps() == bundle.grid.steps());
    CHECK(back.master_seed == bundle.master_seed);
    REQUIRE(back.true_effects.has_value());
    for (std::size_t j = 0; j < 5; ++j) {
        CHECK((*back.true_effects)[j] == (*bundle.true_effects)[j]);
        for (std::size_t k = 0; k <= 16; ++k)
            CHECK(back.paths[j][k] == bundle.paths[j][k]);
    }
    std::filesystem::remove(csv);
    std::filesystem::remove(js);
}

TEST_CASE("sigma must stay positive") {
    const core::HurstModel model(0.7);
    const core::TimeGrid grid(1.0, 16);
    sde::DriftSpec bad = sde::vasicek_drift(1.0);
    bad.sigma = [](double t) { return 0.5 - t; };
    CHECK_THROWS_AS(
        sde::simulate_bundle(model, grid, bad, sde::beta_density(1, 2), 2, 1),
        std::invalid_argument);
}
