// Command-line front end: simulate trajectory bundles, estimate effects,
// fit densities, run full Monte Carlo experiments, render tables, and run
// the built-in property suite.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure,
// 3 property-suite failure.

#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frsde/bernstein.hpp"
#include "frsde/checks.hpp"
#include "frsde/experiment.hpp"
#include "frsde/kde.hpp"
#include "frsde/molchan.hpp"
#include "frsde/quadrature.hpp"
#include "frsde/report.hpp"
#include "frsde/sde.hpp"

namespace {

using frsde::bench::ExperimentConfig;
using frsde::bench::KdePolicy;
using frsde::bench::MPolicy;

// ---------------------------------------------------------------------
// Declarative config file: `key = value` lines, optional [section]
// headers (organizational only), # or ; comments. CLI flags mirror the
// keys and win on conflict.
std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("config", "cannot open config file " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("config", "expected key = value: " + line);
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

void apply_config_key(ExperimentConfig& cfg, const std::string& key,
                      const std::string& value) {
    auto as_u64 = [&] { return std::stoull(value); };
    auto as_f = [&] { return std::stod(value); };
    auto as_bool = [&] {
        if (value == "true" || value == "1" || value == "yes") return true;
        if (value == "false" || value == "0" || value == "no") return false;
        throw CLI::ValidationError("config", "boolean expected for " + key);
    };
    if (key == "density") cfg.density = value;
    else if (key == "hurst") cfg.hurst = as_f();
    else if (key == "horizon") cfg.horizon = as_f();
    else if (key == "grid_steps") cfg.grid_steps = as_u64();
    else if (key == "n_subjects") cfg.n_subjects = as_u64();
    else if (key == "replicates") cfg.replicates = as_u64();
    else if (key == "seed") cfg.seed = as_u64();
    else if (key == "eval_grid") cfg.eval_grid = as_u64();
    else if (key == "known_effects") cfg.known_effects = as_bool();
    else if (key == "beta") cfg.vasicek_beta = as_f();
    else if (key == "sigma_scale") cfg.sigma_scale = as_f();
    else if (key == "m_policy") {
        if (value == "lscv") cfg.m_policy = MPolicy::lscv;
        else if (value == "theoretical_opt") cfg.m_policy = MPolicy::theoretical_opt;
        else if (value.rfind("fixed:", 0) == 0) {
            cfg.m_policy = MPolicy::fixed;
            cfg.fixed_m = std::stoi(value.substr(6));
        } else
            throw CLI::ValidationError("config", "m_policy: lscv | theoretical_opt | fixed:<m>");
    } else if (key == "kde_policy") {
        if (value == "silverman_paper") cfg.kde_policy = KdePolicy::silverman_paper;
        else if (value == "silverman_classical")
            cfg.kde_policy = KdePolicy::silverman_classical;
        else if (value.rfind("fixed:", 0) == 0) {
            cfg.kde_policy = KdePolicy::fixed;
            cfg.fixed_h = std::stod(value.substr(6));
        } else
            throw CLI::ValidationError(
                "config", "kde_policy: silverman_paper | silverman_classical | fixed:<h>");
    } else
        throw CLI::ValidationError("config", "unknown key " + key);
}

// Shared experiment options; flag names mirror config keys.
struct ExperimentCli {
    std::string config_file;
    std::vector<std::pair<std::string, std::string>> overrides;

    void attach(CLI::App* app) {
        app->add_option("--config", config_file, "declarative key=value config file");
        auto track = [this](const std::string& key) {
            return [this, key](const std::string& v) { overrides.emplace_back(key, v); };
        };
        app->add_option_function<std::string>("--density", track("density"),
                                              "beta_1_2 | beta_3_5 | beta_mix | truncnorm_mix");
        app->add_option_function<std::string>("--hurst", track("hurst"), "Hurst index in (1/2,1)");
        app->add_option_function<std::string>("--horizon", track("horizon"), "time horizon T");
        app->add_option_function<std::string>("--grid-steps", track("grid_steps"), "grid steps N");
        app->add_option_function<std::string>("--n-subjects", track("n_subjects"), "trajectories per replicate");
        app->add_option_function<std::string>("--replicates", track("replicates"), "Monte Carlo replicates");
        app->add_option_function<std::string>("--seed", track("seed"), "master seed");
        app->add_option_function<std::string>("--eval-grid", track("eval_grid"), "evaluation grid size");
        app->add_option_function<std::string>("--known-effects", track("known_effects"),
                                              "bypass simulation, feed true effects");
        app->add_option_function<std::string>("--beta", track("beta"), "mean-reversion rate");
        app->add_option_function<std::string>("--sigma-scale", track("sigma_scale"), "diffusion scale");
        app->add_option_function<std::string>("--m-policy", track("m_policy"),
                                              "lscv | theoretical_opt | fixed:<m>");
        app->add_option_function<std::string>("--kde-policy", track("kde_policy"),
                                              "silverman_paper | silverman_classical | fixed:<h>");
    }

    ExperimentConfig resolve() const {
        ExperimentConfig cfg;
        if (!config_file.empty())
            for (const auto& [k, v] : parse_config_file(config_file))
                apply_config_key(cfg, k, v);
        for (const auto& [k, v] : overrides) apply_config_key(cfg, k, v);
        return cfg;
    }

    bool has(const std::string& key) const {
        for (const auto& [k, v] : overrides)
            if (k == key) return true;
        if (!config_file.empty())
            return parse_config_file(config_file).count(key) > 0;
        return false;
    }
};

std::vector<double> read_phi_hat_column(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line); // header: subject,phi_true,phi_hat,info
    std::vector<double> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        for (int i = 0; i < 3 && std::getline(ss, field, ','); ++i) {
        }
        out.push_back(std::strtod(field.c_str(), nullptr));
    }
    if (out.empty()) throw std::runtime_error("no estimates in " + path);
    return out;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"fractional SDE random-effects toolkit"};
    app.require_subcommand(1);

    // --- simulate ------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "simulate a trajectory bundle");
    ExperimentCli sim_cli;
    sim_cli.attach(sim);
    std::string sim_out = "bundle";
    sim->add_option("--out", sim_out, "output prefix (<out>.csv, <out>.json)");

    // --- estimate ------------------------------------------------------
    auto* est = app.add_subcommand("estimate", "estimate effects from a bundle");
    std::string est_in = "bundle", est_out = "estimates.csv";
    est->add_option("--in", est_in, "bundle prefix (<in>.csv, <in>.json)");
    est->add_option("--out", est_out, "estimates CSV path");

    // --- density -------------------------------------------------------
    auto* den = app.add_subcommand("density", "fit densities from an estimates CSV");
    ExperimentCli den_cli;
    den_cli.attach(den);
    std::string den_in = "estimates.csv", den_out = "density.csv", den_svg;
    den->add_option("--in", den_in, "estimates CSV (phi_hat column)");
    den->add_option("--out", den_out, "density evaluation CSV");
    den->add_option("--svg", den_svg, "optional SVG overlay path");

    // --- experiment ----------------------------------------------------
    auto* exp = app.add_subcommand("experiment", "full Monte Carlo pipeline");
    ExperimentCli exp_cli;
    exp_cli.attach(exp);
    std::string exp_dir = "results";
    std::vector<std::size_t> exp_sizes;
    exp->add_option("--out-dir", exp_dir, "output directory");
    exp->add_option("--sizes", exp_sizes, "sample sizes (overrides n_subjects)");

    // --- tables --------------------------------------------------------
    auto* tab = app.add_subcommand("tables", "render table analogues for the density suite");
    ExperimentCli tab_cli;
    tab_cli.attach(tab);
    std::string tab_dir = "results";
    std::vector<std::size_t> tab_sizes{50, 200, 500};
    tab->add_option("--out-dir", tab_dir, "output directory");
    tab->add_option("--sizes", tab_sizes, "sample sizes");

    // --- check ---------------------------------------------------------
    auto* chk = app.add_subcommand("check", "run the property/acceptance suite");
    int chk_id = 0;
    chk->add_option("--id", chk_id, "run a single check (1..12)");

    CLI11_PARSE(app, argc, argv);

    if (sim->parsed()) {
        const auto cfg = sim_cli.resolve();
        cfg.validate();
        const frsde::core::HurstModel model(cfg.hurst);
        const frsde::core::TimeGrid grid(cfg.horizon, cfg.grid_steps);
        const auto drift = frsde::sde::vasicek_drift(cfg.vasicek_beta, cfg.sigma_scale);
        const auto bundle = frsde::sde::simulate_bundle(
            model, grid, drift, frsde::bench::density_suite(cfg.density), cfg.n_subjects,
            cfg.seed);
        frsde::sde::write_bundle(bundle, sim_out + ".csv", sim_out + ".json");
        std::printf("wrote %s.csv and %s.json (%zu subjects, N=%zu)\n", sim_out.c_str(),
                    sim_out.c_str(), bundle.n_subjects(), grid.steps());
    } else if (est->parsed()) {
        const auto bundle = frsde::sde::read_bundle(est_in + ".csv", est_in + ".json");
        const auto estimates = frsde::mle::estimate_bundle(bundle);
        frsde::mle::write_estimates_csv(
            estimates, bundle.true_effects ? &*bundle.true_effects : nullptr, est_out);
        std::printf("wrote %s (%zu estimates)\n", est_out.c_str(), estimates.size());
    } else if (den->parsed()) {
        const auto cfg = den_cli.resolve();
        const auto samples = read_phi_hat_column(den_in);
        int m = cfg.fixed_m;
        if (cfg.m_policy == MPolicy::lscv)
            m = frsde::density::lscv_select_m(samples,
                                              frsde::density::default_m_grid(samples.size()));
        else if (cfg.m_policy == MPolicy::theoretical_opt)
            throw CLI::ValidationError("m_policy",
                                       "theoretical_opt needs a known density; use the "
                                       "experiment command");
        const auto bern = frsde::density::fit_bernstein(samples, m);
        const double h =
            cfg.kde_policy == KdePolicy::fixed
                ? cfg.fixed_h
                : frsde::density::silverman_bandwidth(
                      samples, cfg.kde_policy == KdePolicy::silverman_classical
                                   ? frsde::density::SilvermanVariant::classical
                                   : frsde::density::SilvermanVariant::scaled_iqr);
        const auto kde = frsde::density::fit_kde(samples, h);

        const bool have_truth = den_cli.has("density");
        const auto pts = frsde::bench::make_eval_points(cfg.eval_grid);
        std::ofstream out(den_out);
        if (!out) throw std::runtime_error("cannot open " + den_out);
        out << "x,f_true,f_bernstein,f_kde\n";
        char buf[160];
        for (const double x : pts) {
            std::snprintf(buf, sizeof buf, "%.6f,", x);
            out << buf;
            if (have_truth) {
                std::snprintf(buf, sizeof buf, "%.17g",
                              frsde::bench::density_suite(cfg.density).pdf(x));
                out << buf;
            }
            std::snprintf(buf, sizeof buf, ",%.17g,%.17g", bern(x), kde(x));
            out << buf << '\n';
        }
        std::printf("wrote %s (m=%d, h=%.5f)\n", den_out.c_str(), m, h);
    } else if (exp->parsed()) {
        const auto base = exp_cli.resolve();
        std::vector<frsde::bench::MetricsReport> reports;
        if (exp_sizes.empty()) exp_sizes.push_back(base.n_subjects);
        for (const auto n : exp_sizes) {
            auto cfg = base;
            cfg.n_subjects = n;
            reports.push_back(frsde::bench::run_experiment(cfg));
        }
        const auto files = frsde::bench::emit_report(
            reports, exp_dir,
            {frsde::bench::ReportFormat::csv, frsde::bench::ReportFormat::markdown,
             frsde::bench::ReportFormat::svg_plots});
        for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
    } else if (tab->parsed()) {
        const auto base = tab_cli.resolve();
        std::vector<frsde::bench::MetricsReport> reports;
        for (const auto& name : frsde::bench::density_suite_names())
            for (const auto n : tab_sizes) {
                auto cfg = base;
                cfg.density = name;
                cfg.n_subjects = n;
                reports.push_back(frsde::bench::run_experiment(cfg));
            }
        const auto files = frsde::bench::emit_report(
            reports, tab_dir,
            {frsde::bench::ReportFormat::csv, frsde::bench::ReportFormat::markdown});
        for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
    } else if (chk->parsed()) {
        std::vector<frsde::checks::CheckResult> results;
        if (chk_id != 0) {
            results.push_back(frsde::checks::run_check(chk_id));
            frsde::checks::print_results(results);
        } else {
            results = frsde::checks::run_all();
        }
        if (!frsde::checks::all_passed(results)) return 3;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const CLI::Error&) {
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 1;
    } catch (const frsde::core::QuadratureError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    }
}
