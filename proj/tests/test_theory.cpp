#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "frsde/experiment.hpp"
#include "frsde/rng.hpp"
#include "frsde/theory.hpp"

using namespace frsde;

namespace {

theory::DensityModel uniform_model() {
    return theory::DensityModel(
        "uniform", [](double) { return 1.0; }, [](double) { return 0.0; },
        [](double) { return 0.0; });
}

theory::DensityModel beta35_model() {
    return theory::DensityModel::from_effect_density(bench::density_suite("beta_3_5"));
}

} // namespace

TEST_CASE("density model validation") {
    CHECK_THROWS_AS(theory::DensityModel("bad", [](double) { return 2.0; },
                                         [](double) { return 0.0; },
                                         [](double) { return 0.0; }),
                    std::invalid_argument);
    const auto m = beta35_model();
    CHECK(m.sup_df() > 0.0);
    CHECK(m.sup_d2f() > 0.0);
}

TEST_CASE("smoothing bias values") {
    const auto uni = uniform_model();
    CHECK(theory::asymptotic_bias(uni, 7, 0.2) == 0.0);
    const auto b35 = beta35_model();
    CHECK(theory::asymptotic_bias(b35, 11, 0.5) == 0.0);

    const auto b12 =
        theory::DensityModel::from_effect_density(bench::density_suite("beta_1_2"));
    CHECK(theory::asymptotic_bias(b12, 10, 0.0) == doctest::Approx(-0.1).epsilon(1e-12));
}

TEST_CASE("smoothing bias is odd about 1/2 when f' is even about 1/2") {
    // beta_1_2 has constant derivative, the simplest even-f' case.
    const auto b12 =
        theory::DensityModel::from_effect_density(bench::density_suite("beta_1_2"));
    core::RngStream rng(3, 0);
    for (int i = 0; i < 100; ++i) {
        const double x = rng.next_uniform();
        CHECK(theory::asymptotic_bias(b12, 9, x) ==
              doctest::Approx(-theory::asymptotic_bias(b12, 9, 1.0 - x)).epsilon(1e-9));
    }
    // Symmetric densities have odd f', so their bias is even instead.
    const auto mix =
        theory::DensityModel::from_effect_density(bench::density_suite("beta_mix"));
    for (int i = 0; i < 100; ++i) {
        const double x = rng.next_uniform();
        CHECK(theory::asymptotic_bias(mix, 9, x) ==
              doctest::Approx(theory::asymptotic_bias(mix, 9, 1.0 - x)).epsilon(1e-9));
    }
}

TEST_CASE("variance values") {
    const auto uni = uniform_model();
    CHECK(theory::asymptotic_variance(uni, 100, 100, 0.5) ==
          doctest::Approx(0.05641895835477563).epsilon(1e-10));
    const auto b35 = beta35_model();
    CHECK(theory::asymptotic_variance(b35, 20, 50, 0.0) == 0.0); // f(0) = 0
    CHECK(theory::asymptotic_variance(uni, 16, 100, 0.25) <
          theory::asymptotic_variance(uni, 64, 100, 0.25));
}

TEST_CASE("mise constants") {
    const auto uni_c = theory::mise_constants(uniform_model());
    CHECK(uni_c.c_var == doctest::Approx(0.8862269254527579).epsilon(1e-8));
    CHECK(uni_c.c_bias == 0.0);

    // Frozen 30-digit references for the peaked Beta model.
    const auto b35_c = theory::mise_constants(beta35_model());
    CHECK(b35_c.c_var == doctest::Approx(0.636110146687).epsilon(1e-6));
    CHECK(b35_c.c_bias == doctest::Approx(2.81468531469).epsilon(1e-6));
}

TEST_CASE("mise decreases along the canonical order growth") {
    const auto m = beta35_model();
    const double v1 = theory::asymptotic_mise(m, std::pow(100.0, 0.4), 100);
    const double v2 = theory::asymptotic_mise(m, std::pow(3200.0, 0.4), 3200);
    CHECK(v2 < v1);
    CHECK(v2 < 0.05);
}

TEST_CASE("optimal order matches a grid search") {
    const auto model = beta35_model();
    for (const std::size_t n : {50u, 250u, 800u}) {
        const auto opt = theory::optimal_m(model, n);
        double best_m = 1.0, best = 1e300;
        for (double m = 1.0; m <= 400.0; m += 0.25) {
            const double v = theory::asymptotic_mise(model, m, n);
            if (v < best) {
                best = v;
                best_m = m;
            }
        }
        CHECK(std::fabs(best_m - opt.m_opt) <= 0.25 + 1e-9);
        CHECK(theory::asymptotic_mise(model, opt.m_opt, n) ==
              doctest::Approx(opt.attained_mise).epsilon(1e-10));
        // The stationary point beats its neighbours.
        CHECK(opt.attained_mise <= theory::asymptotic_mise(model, opt.m_opt * 1.1, n));
        CHECK(opt.attained_mise <= theory::asymptotic_mise(model, opt.m_opt * 0.9, n));
    }
}

TEST_CASE("optimal order power laws") {
    const auto model = beta35_model();
    const auto a = theory::optimal_m(model, 100);
    const auto b = theory::optimal_m(model, 3200);
    CHECK(b.m_opt / a.m_opt == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(b.attained_mise / a.attained_mise == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("flat densities reject the optimal-order formula") {
    CHECK_THROWS_AS(theory::optimal_m(uniform_model(), 100), std::invalid_argument);
}

TEST_CASE("alternate bias-constant variant is exposed") {
    const auto model = beta35_model();
    const auto deriv = theory::mise_constants(model, theory::BiasConstant::derivative_squared);
    const auto dens = theory::mise_constants(model, theory::BiasConstant::density_squared);
    CHECK(deriv.c_var == dens.c_var);
    CHECK(deriv.c_bias != dens.c_bias);
}

TEST_CASE("uniform error bound") {
    const auto model = beta35_model();
    const core::HurstModel hurst(0.7);
    SUBCASE("horizon limit removes the estimation term") {
        const double far = theory::uniform_error_bound(model, 5, 250, 1e30, hurst, 1.0);
        const double tail = std::pow(5.0, 1.5) / std::sqrt(250.0) +
                            (model.sup_df() / 2.0 + model.sup_d2f() / 8.0) / 5.0;
        CHECK(far == doctest::Approx(tail).epsilon(1e-6));
    }
    SUBCASE("grows in m beyond the interior minimum") {
        const double b5 = theory::uniform_error_bound(model, 5, 250, 100.0, hurst, 1.0);
        const double b20 = theory::uniform_error_bound(model, 20, 250, 100.0, hurst, 1.0);
        CHECK(b20 > b5);
    }
    SUBCASE("requires a positive signal floor") {
        CHECK_THROWS_AS(theory::uniform_error_bound(model, 5, 250, 100.0, hurst, 0.0),
                        std::invalid_argument);
    }
}

TEST_CASE("edge variance profile") {
    CHECK(theory::edge_variance_profile(0.5) ==
          doctest::Approx(0.5641895835477563).epsilon(1e-12));
    CHECK_THROWS_AS(theory::edge_variance_profile(0.0), std::domain_error);
}
