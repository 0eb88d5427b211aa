#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "frsde/fbm.hpp"
#include "frsde/parallel.hpp"

using namespace frsde;

namespace {

// Empirical mean/variance of node values over many sampled paths.
struct NodeStats {
    std::vector<double> mean, var;
};

template <typename Engine>
NodeStats node_stats(const Engine& engine, std::size_t reps, std::uint64_t seed) {
    const std::size_t nodes = engine.grid().node_count();
    std::vector<double> sum(nodes, 0.0), sumsq(nodes, 0.0);
    for (std::size_t r = 0; r < reps; ++r) {
        core::RngStream rng(seed, r);
        const auto path = engine.sample(rng);
        for (std::size_t k = 0; k < nodes; ++k) {
            sum[k] += path.values[k];
            sumsq[k] += path.values[k] * path.values[k];
        }
    }
    NodeStats st;
    st.mean.resize(nodes);
    st.var.resize(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        st.mean[k] = sum[k] / static_cast<double>(reps);
        st.var[k] = sumsq[k] / static_cast<double>(reps) - st.mean[k] * st.mean[k];
    }
    return st;
}

} // namespace

TEST_CASE("paths start at zero and have the right length") {
    const core::HurstModel model(0.7);
    const core::TimeGrid grid(2.0, 16);
    core::RngStream rng(1, 0);
    const auto path = fbm::simulate_fbm(model, grid, rng);
    CHECK(path.values.size() == 17);
    CHECK(path.values[0] == 0.0);
}

TEST_CASE("empirical node means vanish") {
    const core::HurstModel model(0.7);
    const core::TimeGrid grid(1.0, 8); // node sd <= 1, so 4/sqrt(R) is 4 sigma
    const fbm::CholeskyFbm engine(model, grid);
    constexpr std::size_t reps = 10000;
    const auto st = node_stats(engine, reps, 42);
    const double tol = 4.0 / std::sqrt(static_cast<double>(reps));
    for (std::size_t k = 1; k <= 8; ++k) CHECK(std::fabs(st.mean[k]) < tol);
}

TEST_CASE("paths carry their stream tag") {
    const core::HurstModel model(0.7);
    const core::TimeGrid grid(1.0, 4);
    const fbm::CholeskyFbm engine(model, grid);
    core::RngStream a(5, 1), b(5, 1), c(5, 2);
    CHECK(engine.sample(a).seed_tag == engine.sample(b).seed_tag);
    CHECK(engine.sample(a).seed_tag != engine.sample(c).seed_tag);
}

TEST_CASE("empirical node variances follow t^{2H}") {
    const core::HurstModel model(0.7);
    const core::TimeGrid grid(2.0, 8);
    const fbm::CholeskyFbm engine(model, grid);
    const auto st = node_stats(engine, 10000, 7);
    for (const std::size_t k : {std::size_t{2}, std::size_t{4}, std::size_t{8}}) {
        const double expected = std::pow(grid.node(k), 2.0 * model.h());
        CHECK(st.var[k] / expected == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("empirical covariance matches the closed form (H = 0.7)") {
    const core::HurstModel model(0.7);
    const core::TimeGrid grid(1.0, 2); // nodes 0, 0.5, 1
    const fbm::CholeskyFbm engine(model, grid);
    constexpr std::size_t reps = 20000;
    std::vector<double> x(reps), y(reps);
    core::parallel_for(reps, [&](std::size_t r) {
        core::RngStream rng(99, r);
        const auto p = engine.sample(rng);
        x[r] = p.values[1];
        y[r] = p.values[2];
    });
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < reps; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= reps;
    my /= reps;
    double cov = 0, varprod = 0;
    std::vector<double> prods(reps);
    for (std::size_t i = 0; i < reps; ++i) {
        prods[i] = (x[i] - mx) * (y[i] - my);
        cov += prods[i];
    }
    cov /= static_cast<double>(reps - 1);
    for (std::size_t i = 0; i < reps; ++i) varprod += (prods[i] - cov) * (prods[i] - cov);
    const double se = std::sqrt(varprod / static_cast<double>(reps - 1) /
                                static_cast<double>(reps));
    CHECK(std::fabs(cov - 0.5) <= 3.0 * se); // 0.5 (1 + 0.5^{2H} - 0.5^{2H}) = 1/2
}

TEST_CASE("degenerate H = 1/2 gives Brownian covariance min(s, t)") {
    const auto model = core::HurstModel::degenerate_brownian();
    const core::TimeGrid grid(1.0, 4);
    const fbm::CholeskyFbm engine(model, grid);
    constexpr std::size_t reps = 20000;
    double c12 = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
        core::RngStream rng(4242, r);
        const auto p = engine.sample(rng);
        c12 += p.values[1] * p.values[3]; // Cov(W_{.25}, W_{.75}) = 0.25
    }
    c12 /= reps;
    CHECK(c12 == doctest::Approx(0.25).epsilon(0.06));
}

TEST_CASE("self-similarity: scaling the grid by c scales node sd by c^H") {
    const core::HurstModel model(0.8);
    const core::TimeGrid grid1(1.0, 4), grid2(16.0, 4);
    const fbm::CholeskyFbm e1(model, grid1), e2(model, grid2);
    const auto s1 = node_stats(e1, 8000, 5);
    const auto s2 = node_stats(e2, 8000, 6);
    const double factor = std::pow(16.0, 2.0 * model.h());
    for (std::size_t k = 1; k <= 4; ++k)
        CHECK(s2.var[k] / (factor * s1.var[k]) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("determinism: identical seeds give bit-identical paths") {
    const core::HurstModel model(0.6);
    const core::TimeGrid grid(5.0, 32);
    const fbm::CholeskyFbm engine(model, grid);
    core::RngStream a(123, 9), b(123, 9);
    const auto pa = engine.sample(a), pb = engine.sample(b);
    for (std::size_t k = 0; k < pa.values.size(); ++k)
        CHECK(pa.values[k] == pb.values[k]);

    core::RngStream c(123, 10);
    const auto pc = engine.sample(c);
    bool any_diff = false;
    for (std::size_t k = 1; k < pc.values.size(); ++k)
        any_diff = any_diff || pc.values[k] != pa.values[k];
    CHECK(any_diff);
}

TEST_CASE("grid-size cap produces a configuration error") {
    const core::HurstModel model(0.7);
    CHECK_THROWS_AS(fbm::CholeskyFbm(model, core::TimeGrid(1.0, 5000)),
                    std::invalid_argument);
}

TEST_CASE("circulant fast path matches the exact covariance") {
    const core::HurstModel model(0.7);
    const core::TimeGrid grid(1.0, 256);
    const fbm::DaviesHarteFbm engine(model, grid);
    constexpr std::size_t reps = 6000;
    std::vector<double> w_half(reps), w_one(reps);
    core::parallel_for(reps, [&](std::size_t r) {
        core::RngStream rng(31337, r);
        const auto p = engine.sample(rng);
        w_half[r] = p.values[128];
        w_one[r] = p.values[256];
    });
    double m1 = 0, m2 = 0;
    for (std::size_t i = 0; i < reps; ++i) {
        m1 += w_half[i];
        m2 += w_one[i];
    }
    m1 /= reps;
    m2 /= reps;
    double var1 = 0, cov = 0;
    for (std::size_t i = 0; i < reps; ++i) {
        var1 += (w_one[i] - m2) * (w_one[i] - m2);
        cov += (w_half[i] - m1) * (w_one[i] - m2);
    }
    var1 /= static_cast<double>(reps - 1);
    cov /= static_cast<double>(reps - 1);
    CHECK(var1 == doctest::Approx(1.0).epsilon(0.06));
    CHECK(cov == doctest::Approx(0.5).epsilon(0.08));

    CHECK_THROWS_AS(fbm::DaviesHarteFbm(model, core::TimeGrid(1.0, 100)),
                    std::invalid_argument);
}

TEST_CASE("path CSV dump") {
    const core::HurstModel model(0.7);
    const core::TimeGrid grid(1.0, 4);
    core::RngStream rng(77, 0);
    const auto path = fbm::simulate_fbm(model, grid, rng);
    const auto file = std::filesystem::temp_directory_path() / "frsde_fbm_test.csv";
    fbm::write_path_csv(path, file.string());
    std::ifstream in(file);
    std::string header;
    std::getline(in, header);
    CHECK(header == "k,t,value");
    int rows = 0;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) ++rows;
    CHECK(rows == 5);
    std::filesystem::remove(file);
}
