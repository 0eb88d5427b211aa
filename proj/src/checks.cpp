#include "frsde/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>

#include "frsde/bernstein.hpp"
#include "frsde/experiment.hpp"
#include "frsde/fbm.hpp"
#include "frsde/kde.hpp"
#include "frsde/molchan.hpp"
#include "frsde/parallel.hpp"
#include "frsde/quadrature.hpp"
#include "frsde/sde.hpp"
#include "frsde/special.hpp"
#include "frsde/theory.hpp"

namespace frsde::checks {

namespace {

constexpr std::uint64_t kSuiteSeed = 0x5EEDF00D2024ULL;

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

// Kolmogorov-Smirnov statistic of a sample against the standard normal.
double ks_statistic_normal(std::vector<double> sample) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double cdf = core::normal_cdf(sample[i]);
        d = std::max(d, std::fabs(cdf - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - cdf));
    }
    return d;
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

// Simulates `replicates` single-subject mean-reverting trajectories and
// returns phi_hat - phi per replicate (H = 0.7, T = 100, N = 1000).
std::vector<double> vasicek_errors(std::size_t replicates, std::uint64_t seed) {
    const core::HurstModel model(0.7);
    const core::TimeGrid grid(100.0, 1000);
    const auto drift = sde::vasicek_drift(1.0);
    const auto& density = bench::density_suite("beta_1_2");
    const fbm::CholeskyFbm engine(model, grid);
    const mle::MolchanStencil stencil(model, grid, drift);
    std::vector<double> errs(replicates);
    core::parallel_for(replicates, [&](std::size_t r) {
        core::RngStream rng(seed, r);
        const double phi = density.sample(rng);
        const auto noise = engine.sample(rng);
        const auto path = sde::euler_path(grid, drift, phi, 0.0, noise.values, r);
        const auto est = mle::estimate_effect(mle::molchan_transform(stencil, path, drift));
        errs[r] = est.phi_hat - phi;
    });
    return errs;
}

// Shared across checks 3 and 4 (same replicate budget and seed).
const std::vector<double>& shared_vasicek_errors() {
    static const std::vector<double> errs = vasicek_errors(2000, kSuiteSeed + 3);
    return errs;
}

// Naive double-loop evaluation of the smoothed-histogram estimator,
// kept deliberately independent of the production evaluator.
double naive_bernstein_eval(const std::vector<double>& samples, int m, double x) {
    const double n = static_cast<double>(samples.size());
    auto ecdf = [&](double y) {
        std::size_t c = 0;
        for (const double s : samples)
            if (s <= y) ++c;
        return static_cast<double>(c) / n;
    };
    double acc = 0.0;
    for (int k = 0; k < m; ++k) {
        const double fk = ecdf(static_cast<double>(k) / m);
        const double fk1 = ecdf(static_cast<double>(k + 1) / m);
        double basis;
        if (x == 0.0)
            basis = (k == 0) ? 1.0 : 0.0;
        else if (x == 1.0)
            basis = (k == m - 1) ? 1.0 : 0.0;
        else
            basis = core::binomial(m - 1, k) * std::pow(x, k) * std::pow(1.0 - x, m - 1 - k);
        acc += (fk1 - fk) * basis;
    }
    return m * acc;
}

CheckResult check_kernel_weight_identity() {
    CheckResult res{1, "kernel-weight identity", false, "", 0};
    double worst = 0.0;
    for (const double h : {0.55, 0.6, 0.7, 0.8, 0.9}) {
        const core::HurstModel model(h);
        for (const double t : {0.5, 1.0, 10.0, 100.0}) {
            const double integral =
                core::kernel_integral(model, t, [](double) { return 1.0; });
            const double rel = std::fabs(integral / core::weight_wH(model, t) - 1.0);
            worst = std::max(worst, rel);
        }
    }
    res.pass = worst <= 1e-4;
    res.detail = fmt("max |integral/w - 1| = %.3g (tol 1e-4)", worst);
    return res;
}

CheckResult check_vasicek_j2() {
    CheckResult res{2, "unit-coefficient J2 cells", false, "", 0};
    const core::HurstModel model(0.7);
    const core::TimeGrid grid(100.0, 1000);
    const mle::MolchanStencil stencil(model, grid, sde::vasicek_drift(1.0));
    double worst = 0.0;
    for (const double v : stencil.j2()) worst = std::max(worst, std::fabs(v - 1.0));
    res.pass = worst <= 1e-3;
    res.detail = fmt("max |J2 - 1| = %.3g over %zu cells (tol 1e-3)", worst,
                     stencil.j2().size());
    return res;
}

CheckResult check_quadratic_risk() {
    CheckResult res{3, "MLE quadratic risk", false, "", 0};
    const auto& errs = shared_vasicek_errors();
    double risk = 0.0;
    for (const double e : errs) risk += e * e;
    risk /= static_cast<double>(errs.size());
    const core::HurstModel model(0.7);
    const double target = model.lambda() / std::pow(100.0, 2.0 - 2.0 * model.h());
    const double rel = std::fabs(risk / target - 1.0);
    res.pass = rel <= 0.10;
    res.detail = fmt("risk %.5f vs %.5f (rel dev %.3f, tol 0.10, R=2000)", risk, target, rel);
    return res;
}

CheckResult check_mle_normality() {
    CheckResult res{4, "MLE normality (KS)", false, "", 0};
    const auto& errs = shared_vasicek_errors();
    const core::HurstModel model(0.7);
    const double scale = std::pow(100.0, 1.0 - model.h()) / std::sqrt(model.lambda());
    std::vector<double> standardized(errs.size());
    for (std::size_t i = 0; i < errs.size(); ++i) standardized[i] = errs[i] * scale;
    const double d = ks_statistic_normal(standardized);
    const double crit = 1.6276 / std::sqrt(static_cast<double>(errs.size()));
    res.pass = d <= crit;
    res.detail = fmt("KS D = %.5f vs critical %.5f (level 0.01)", d, crit);
    return res;
}

CheckResult check_bernstein_oracle() {
    CheckResult res{5, "smoothed-histogram oracle equivalence", false, "", 0};
    core::RngStream rng(kSuiteSeed, 5);
    double worst = 0.0;
    for (int c = 0; c < 200; ++c) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 300);
        const int m = 1 + static_cast<int>(rng.next_u64() % 100);
        std::vector<double> samples(n);
        for (auto& s : samples) {
            s = rng.next_uniform();
            if (rng.next_uniform() < 0.08) s = -0.5 + 2.0 * rng.next_uniform();
        }
        const auto fit = density::fit_bernstein(samples, m);
        for (int i = 0; i <= 100; ++i) {
            const double x = i / 100.0;
            worst = std::max(worst,
                             std::fabs(fit(x) - naive_bernstein_eval(samples, m, x)));
        }
    }
    res.pass = worst <= 1e-12;
    res.detail = fmt("max |production - naive| = %.3g over 200 cases (tol 1e-12)", worst);
    return res;
}

CheckResult check_basis_identities() {
    CheckResult res{6, "basis partition of unity and boundary formulas", false, "", 0};
    core::RngStream rng(kSuiteSeed, 6);
    double worst_sum = 0.0;
    for (const int m : {2, 10, 50, 150, 400}) {
        std::vector<double> xs{0.0, 0.3, 0.7, 1.0};
        for (int i = 0; i < 40; ++i) xs.push_back(rng.next_uniform());
        for (const double x : xs) {
            const auto row = density::bernstein_basis_row(m - 1, x);
            double s = 0.0;
            for (const double v : row) s += v;
            worst_sum = std::max(worst_sum, std::fabs(s - 1.0));
        }
    }
    bool boundary_exact = true;
    for (int c = 0; c < 60; ++c) {
        const int n = 3 + static_cast<int>(rng.next_u64() % 200);
        const int m = 1 + static_cast<int>(rng.next_u64() % 60);
        std::vector<double> samples(n);
        for (auto& s : samples) s = -0.2 + 1.4 * rng.next_uniform();
        const auto fit = density::fit_bernstein(samples, m);
        const density::EmpiricalCdf cdf(samples);
        const double left = m * (cdf(1.0 / m) - cdf(0.0));
        const double right = m * (cdf(1.0) - cdf(static_cast<double>(m - 1) / m));
        if (fit(0.0) != left || fit(1.0) != right) boundary_exact = false;
    }
    res.pass = worst_sum <= 1e-12 && boundary_exact;
    res.detail = fmt("max |sum p_k - 1| = %.3g (tol 1e-12); boundary formulas %s",
                     worst_sum, boundary_exact ? "exact" : "NOT exact");
    return res;
}

CheckResult check_mise_rate() {
    CheckResult res{7, "MISE rate in n at the optimal order", false, "", 0};
    const auto& density = bench::density_suite("beta_3_5");
    const auto model = theory::DensityModel::from_effect_density(density);
    const auto eval = bench::make_eval_points(101);
    std::vector<double> truth(eval.size());
    for (std::size_t i = 0; i < eval.size(); ++i) truth[i] = density.pdf(eval[i]);

    const std::vector<std::size_t> sizes{50, 100, 200, 400, 800};
    constexpr std::size_t reps = 200;
    std::vector<double> log_n, log_mise;
    for (const std::size_t n : sizes) {
        const int m = std::max(
            1, static_cast<int>(std::lround(theory::optimal_m(model, n).m_opt)));
        std::vector<double> ise(reps);
        core::parallel_for(reps, [&](std::size_t r) {
            core::RngStream rng(kSuiteSeed + 7, n * 1000 + r);
            const auto samples = sde::sample_effects(density, n, rng);
            const auto fit = density::fit_bernstein(samples, m);
            std::vector<double> est(eval.size());
            for (std::size_t i = 0; i < eval.size(); ++i) est[i] = fit(eval[i]);
            ise[r] = bench::integrated_squared_error(eval, est, truth);
        });
        double mean = 0.0;
        for (const double v : ise) mean += v;
        mean /= static_cast<double>(reps);
        log_n.push_back(std::log(static_cast<double>(n)));
        log_mise.push_back(std::log(mean));
    }
    const double slope = ols_slope(log_n, log_mise);
    res.pass = slope >= -1.0 && slope <= -0.6;
    res.detail = fmt("log-log slope = %.3f (window [-1.0, -0.6], R=200/size)", slope);
    return res;
}

CheckResult check_interior_variance() {
    CheckResult res{8, "interior variance constant", false, "", 0};
    const auto& density = bench::density_suite("beta_3_5");
    const auto model = theory::DensityModel::from_effect_density(density);
    constexpr std::size_t n = 800, reps = 1000;
    const int m =
        std::max(1, static_cast<int>(std::lround(theory::optimal_m(model, n).m_opt)));
    std::vector<double> values(reps);
    core::parallel_for(reps, [&](std::size_t r) {
        core::RngStream rng(kSuiteSeed + 8, r);
        const auto samples = sde::sample_effects(density, n, rng);
        values[r] = density::fit_bernstein(samples, m)(0.5);
    });
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= static_cast<double>(reps);
    double var = 0.0;
    for (const double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(reps - 1);
    const double stat = static_cast<double>(n) / std::sqrt(static_cast<double>(m)) * var;
    const double target = model.f(0.5) * theory::edge_variance_profile(0.5);
    const double rel = std::fabs(stat / target - 1.0);
    res.pass = rel <= 0.25;
    res.detail = fmt("n m^{-1/2} Var = %.4f vs f(1/2)psi(1/2) = %.4f "
                     "(rel dev %.3f, tol 0.25, m=%d)",
                     stat, target, rel, m);
    return res;
}

CheckResult check_uniform_bound() {
    CheckResult res{9, "uniform error bound", false, "", 0};
    const core::HurstModel hurst(0.7);
    const core::TimeGrid grid(100.0, 1000);
    const auto drift = sde::vasicek_drift(1.0);
    const auto& density = bench::density_suite("beta_3_5");
    const auto model = theory::DensityModel::from_effect_density(density);
    const fbm::CholeskyFbm engine(hurst, grid);
    const mle::MolchanStencil stencil(hurst, grid, drift);

    constexpr std::size_t n = 250, reps = 200;
    const std::vector<int> orders{3, 5, 8};
    constexpr int grid_points = 1001;

    std::vector<std::array<double, 3>> sup_err(reps);
    core::parallel_for(reps, [&](std::size_t r) {
        std::vector<double> samples(n);
        const std::uint64_t rep_seed = core::RngStream(kSuiteSeed + 9, r).next_u64();
        for (std::size_t j = 0; j < n; ++j) {
            core::RngStream rng(rep_seed, j);
            const double phi = density.sample(rng);
            const auto noise = engine.sample(rng);
            const auto path = sde::euler_path(grid, drift, phi, 0.0, noise.values, j);
            samples[j] =
                mle::estimate_effect(mle::molchan_transform(stencil, path, drift)).phi_hat;
        }
        for (std::size_t mi = 0; mi < orders.size(); ++mi) {
            const auto fit = density::fit_bernstein(samples, orders[mi]);
            double sup = 0.0;
            for (int i = 0; i < grid_points; ++i) {
                const double x = static_cast<double>(i) / (grid_points - 1);
                sup = std::max(sup, std::fabs(fit(x) - density.pdf(x)));
            }
            sup_err[r][mi] = sup;
        }
    });

    std::string detail;
    bool pass = true;
    for (std::size_t mi = 0; mi < orders.size(); ++mi) {
        double mean = 0.0;
        for (std::size_t r = 0; r < reps; ++r) mean += sup_err[r][mi];
        mean /= static_cast<double>(reps);
        const double bound =
            theory::uniform_error_bound(model, orders[mi], n, 100.0, hurst, 1.0);
        pass = pass && mean <= bound;
        detail += fmt("m=%d: E sup|err| %.3f <= bound %.3f; ", orders[mi], mean, bound);
    }
    res.pass = pass;
    res.detail = detail + "(one-sided, R=200, n=250)";
    return res;
}

bench::MetricsReport table_run(const std::string& density, std::size_t n) {
    bench::ExperimentConfig cfg;
    cfg.density = density;
    cfg.n_subjects = n;
    cfg.replicates = 100;
    cfg.seed = kSuiteSeed + 10;
    return bench::run_experiment(cfg);
}

CheckResult check_table1_trend() {
    CheckResult res{10, "error-table trends", false, "", 0};
    bool pass = true;
    std::string detail;
    for (const auto& name : bench::density_suite_names()) {
        const auto lo = table_run(name, 50);
        const auto hi = table_run(name, 500);
        const bool decreasing = hi.bernstein.ise.mean < lo.bernstein.ise.mean;
        pass = pass && decreasing;
        detail += fmt("%s: ISE %.4f->%.4f%s; ", name.c_str(), lo.bernstein.ise.mean,
                      hi.bernstein.ise.mean, decreasing ? "" : " NOT decreasing");
        if (name == "beta_1_2") {
            const auto mid = table_run(name, 200);
            for (const auto* rep : {&lo, &mid, &hi}) {
                const bool better = rep->bernstein.ise.mean < rep->kde.ise.mean;
                pass = pass && better;
                detail += fmt("n=%zu B %.4f %s K %.4f; ", rep->config.n_subjects,
                              rep->bernstein.ise.mean, better ? "<" : ">=",
                              rep->kde.ise.mean);
            }
        }
    }
    res.pass = pass;
    res.detail = detail + "(R=100 each)";
    return res;
}

CheckResult check_table2_boundary() {
    CheckResult res{11, "boundary-table trend", false, "", 0};
    const auto rep = table_run("beta_1_2", 250);
    const double b0 = rep.bernstein.boundary_abs_err[0];
    const double k0 = rep.kde.boundary_abs_err[0];
    const double b1 = rep.bernstein.boundary_abs_err[3];
    const double k1 = rep.kde.boundary_abs_err[3];
    const bool at0 = b0 < k0;
    const bool at1 = b1 < k1;
    res.pass = at0 && at1;
    res.detail = fmt("x=0: mean|B-2| %.4f %s mean|K-2| %.4f; "
                     "x=1: mean|B| %.4f %s mean|K| %.4f (n=250, R=100)",
                     b0, at0 ? "<" : ">=", k0, b1, at1 ? "<" : ">=", k1);
    return res;
}

CheckResult check_fbm_covariance() {
    CheckResult res{12, "fBm covariance", false, "", 0};
    bool pass = true;
    std::string detail;
    for (const double h : {0.6, 0.8}) {
        const core::HurstModel model(h);
        const core::TimeGrid grid(1.0, 2);
        const fbm::CholeskyFbm engine(model, grid);
        constexpr std::size_t reps = 20000;
        std::vector<double> xs(reps), ys(reps);
        core::parallel_for(reps, [&](std::size_t r) {
            core::RngStream rng(kSuiteSeed + 12, r + (h > 0.7 ? reps : 0));
            const auto path = engine.sample(rng);
            xs[r] = path.values[1];
            ys[r] = path.values[2];
        });
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < reps; ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= reps;
        my /= reps;
        std::vector<double> prod(reps);
        double cov = 0.0;
        for (std::size_t i = 0; i < reps; ++i) {
            prod[i] = (xs[i] - mx) * (ys[i] - my);
            cov += prod[i];
        }
        cov /= static_cast<double>(reps - 1);
        double sv = 0.0;
        for (std::size_t i = 0; i < reps; ++i) sv += (prod[i] - cov) * (prod[i] - cov);
        const double se = std::sqrt(sv / static_cast<double>(reps - 1) /
                                    static_cast<double>(reps));
        const double target = 0.5; // 0.5 (1 + 0.5^{2H} - 0.5^{2H})
        const bool ok = std::fabs(cov - target) <= 3.0 * se;
        pass = pass && ok;
        detail += fmt("H=%.1f: cov %.4f vs %.1f (3SE %.4f)%s; ", h, cov, target, 3 * se,
                      ok ? "" : " OUT");
    }
    res.pass = pass;
    res.detail = detail + "(R=20000)";
    return res;
}

} // namespace

CheckResult run_check(int id) {
    using Fn = CheckResult (*)();
    static constexpr Fn table[] = {
        check_kernel_weight_identity, check_vasicek_j2,      check_quadratic_risk,
        check_mle_normality,          check_bernstein_oracle, check_basis_identities,
        check_mise_rate,              check_interior_variance, check_uniform_bound,
        check_table1_trend,           check_table2_boundary, check_fbm_covariance,
    };
    if (id < 1 || id > 12) throw std::invalid_argument("run_check: id must be 1..12");
    const auto start = std::chrono::steady_clock::now();
    CheckResult res = table[id - 1]();
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

std::vector<CheckResult> run_all() {
    std::vector<CheckResult> out;
    for (int id = 1; id <= 12; ++id) {
        out.push_back(run_check(id));
        print_results({out.back()});
    }
    return out;
}

void print_results(const std::vector<CheckResult>& results) {
    for (const auto& r : results) {
        std::printf("[%s] %2d %s: %s [%.1f s]\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.detail.c_str(), r.seconds);
        std::fflush(stdout);
    }
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

} // namespace frsde::checks
