// Command-line front end: parses arguments into a RunConfig and hands it to mlm::run.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "mlm/error.hpp"
#include "mlm/run.hpp"

namespace {

struct Args {
    mlm::RunConfig config;
    std::string solver = "fista_backtrack";
    std::string criterion = "mse";
    std::string format = "csv";
    std::vector<std::string> dims;
    std::vector<std::string> algorithms;
    double lambda = 0.0;
    CLI::Option* lambda_opt = nullptr;
    std::string manifest;
};

void add_inputs(CLI::App* cmd, Args& a) {
    auto& c = a.config;
    cmd->add_option("--y", c.y_path, "Response matrix (n x m)")->required();
    cmd->add_option("--x", c.x_path, "Row covariates (n x p)")->required();
    cmd->add_option("--z", c.z_path, "Column covariates (m x q)")->required();
    cmd->add_flag("--header", c.header, "Input files start with a header line");
    cmd->add_flag("--row-labels", c.row_labels, "Input files start each row with a label");
    cmd->add_flag("!--no-intercept-x", c.intercept_x, "Do not add an intercept column to X");
    cmd->add_flag("!--no-intercept-z", c.intercept_z, "Do not add an intercept column to Z");
    cmd->add_flag("!--no-standardize", c.standardize, "Fit on the raw covariate scale");
}

void add_solver(CLI::App* cmd, Args& a) {
    auto& s = a.config.solver;
    cmd->add_option("--solver", a.solver,
                    "cd_cyclic | cd_random | ista | fista_fixed | fista_backtrack | admm")
        ->capture_default_str();
    cmd->add_option("--tol", s.tol, "Convergence tolerance")->capture_default_str();
    cmd->add_option("--max-iter", s.max_iter, "Iteration cap per lambda")->capture_default_str();
    cmd->add_option("--init-step", s.init_step)->capture_default_str();
    cmd->add_option("--gamma", s.gamma, "Backtracking shrink factor")->capture_default_str();
    cmd->add_option("--mu", s.mu, "ADMM residual balance threshold")->capture_default_str();
    cmd->add_option("--tau-incr", s.tau_incr)->capture_default_str();
    cmd->add_option("--tau-decr", s.tau_decr)->capture_default_str();
    cmd->add_flag("!--fixed-rho", s.adaptive_rho, "Disable ADMM penalty adaptation");
    cmd->add_flag("!--no-active-set", s.active_set, "Always sweep every coordinate in CD");
    cmd->add_option("--solver-seed", s.rng_seed, "Seed for randomized coordinate order");
}

void add_path(CLI::App* cmd, Args& a) {
    cmd->add_option("--n-lambda", a.config.n_lambda)->capture_default_str();
    cmd->add_option("--lambda-min-ratio", a.config.lambda_min_ratio)->capture_default_str();
}

void add_output(CLI::App* cmd, Args& a) {
    cmd->add_option("--out", a.config.out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--format", a.format, "csv | json")->capture_default_str();
}

mlm::sim::Dims parse_dims(const std::string& text) {
    std::vector<long> v;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            v.push_back(std::stol(cell));
        } catch (const std::exception&) {
            mlm::config_error("bad --dims entry '" + text + "'");
        }
    }
    if (v.size() != 4) mlm::config_error("--dims takes n,m,p,q");
    return {v[0], v[1], v[2], v[3]};
}

void finish(Args& a, const std::string& command) {
    auto& c = a.config;
    c.command = mlm::parse_command(command);
    c.solver.algorithm = mlm::parse_algorithm(a.solver);
    c.cv.criterion = mlm::parse_criterion(a.criterion);
    if (a.format == "csv") {
        c.format = mlm::OutputFormat::csv;
    } else if (a.format == "json") {
        c.format = mlm::OutputFormat::json;
    } else {
        mlm::config_error("--format must be csv or json");
    }
    if (a.lambda_opt && a.lambda_opt->count() > 0) c.lambda = a.lambda;
    for (const auto& d : a.dims) c.bench_dims.push_back(parse_dims(d));
    for (const auto& name : a.algorithms) c.bench_algorithms.push_back(mlm::parse_algorithm(name));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse matrix linear models"};
    app.require_subcommand(1);
    Args a;
    a.config.cv.workers = mlm::default_workers();

    auto* fit = app.add_subcommand("fit", "Fit at one penalty value");
    add_inputs(fit, a);
    add_solver(fit, a);
    add_output(fit, a);
    a.lambda_opt = fit->add_option("--lambda", a.lambda, "Penalty (default: fraction of lambda_max)");
    fit->add_option("--lambda-fraction", a.config.lambda_fraction)->capture_default_str();

    auto* path = app.add_subcommand("path", "Fit a decreasing penalty path with warm starts");
    add_inputs(path, a);
    add_solver(path, a);
    add_path(path, a);
    add_output(path, a);

    auto* cv = app.add_subcommand("cv", "Choose the penalty by k-fold cross-validation");
    add_inputs(cv, a);
    add_solver(cv, a);
    add_path(cv, a);
    add_output(cv, a);
    cv->add_option("--folds", a.config.cv.n_folds)->capture_default_str();
    cv->add_option("--criterion", a.criterion, "mse | test_error | aic | bic")->capture_default_str();
    cv->add_option("--fold-seed", a.config.cv.fold_seed)->capture_default_str();
    cv->add_option("--workers", a.config.cv.workers, "Folds run concurrently (default MLM_WORKERS or 1)");

    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic data set");
    add_solver(simulate, a);
    add_path(simulate, a);
    add_output(simulate, a);
    auto& s = a.config.sim;
    auto& e = a.config.enviro;
    simulate->add_option("--kind", a.config.sim_kind, "mlm | enviro")->capture_default_str();
    simulate->add_option("--n", s.n)->capture_default_str();
    simulate->add_option("--m", s.m)->capture_default_str();
    simulate->add_option("--p", s.p, "Columns of X including the intercept")->capture_default_str();
    simulate->add_option("--q", s.q, "Columns of Z including the intercept")->capture_default_str();
    simulate->add_option("--frac-main", s.frac_main_nonzero)->capture_default_str();
    simulate->add_option("--frac-inter", s.frac_inter_nonzero)->capture_default_str();
    simulate->add_option("--effect-sd", s.effect_sd)->capture_default_str();
    simulate->add_option("--noise-sd", s.noise_sd)->capture_default_str();
    simulate->add_option("--seed", s.seed)->capture_default_str();
    simulate->add_option("--n-chem", e.n_chem)->capture_default_str();
    simulate->add_option("--n-tissue", e.n_tissue)->capture_default_str();
    simulate->add_option("--n-subjects", e.n_subjects)->capture_default_str();
    simulate->add_option("--n-demog", e.n_demog)->capture_default_str();
    simulate->add_flag("--roc", a.config.sim_roc, "enviro: also write ROC curves for MLM and univariate screening");

    auto* bench = app.add_subcommand("bench", "Time full path fits over a grid of dimensions");
    add_solver(bench, a);
    add_output(bench, a);
    bench->add_option("--dims", a.dims, "n,m,p,q (repeatable)")->required();
    bench->add_option("--algorithms", a.algorithms, "Solvers to time (default fista_backtrack admm)");
    bench->add_option("--reps", a.config.bench_reps)->capture_default_str();
    bench->add_option("--n-lambda", a.config.bench_n_lambda)->capture_default_str();
    bench->add_option("--lambda-min-ratio", a.config.lambda_min_ratio)->capture_default_str();
    bench->add_option("--seed", a.config.bench_seed)->capture_default_str();

    auto* kkt = app.add_subcommand("kkt", "Check optimality of a coefficient file");
    add_inputs(kkt, a);
    add_output(kkt, a);
    kkt->add_option("--coef", a.config.coef_path, "Raw-scale coefficients with labels")->required();
    auto* kkt_lambda = kkt->add_option("--lambda", a.lambda)->required();
    kkt->add_option("--kkt-tol", a.config.kkt_tol)->capture_default_str();

    auto* replay = app.add_subcommand("replay", "Re-run the configuration stored in a manifest");
    replay->add_option("manifest", a.manifest)->required();
    replay->add_option("--out", a.config.out_dir)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : mlm::kExitConfig;
    }

    try {
        if (replay->parsed()) {
            std::ifstream in(a.manifest);
            if (!in) mlm::data_error("cannot read " + a.manifest);
            const auto manifest = nlohmann::json::parse(in);
            mlm::RunConfig config = mlm::config_from_json(manifest.at("config"));
            config.out_dir = a.config.out_dir;
            return mlm::run(config, std::cerr);
        }
        CLI::App* chosen = app.get_subcommands().front();
        if (chosen == kkt) a.lambda_opt = kkt_lambda;
        finish(a, chosen->get_name());
    } catch (const mlm::Error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return err.kind() == mlm::ErrorKind::data ? mlm::kExitData : mlm::kExitConfig;
    } catch (const nlohmann::json::exception& err) {
        std::cerr << "error: bad manifest: " << err.what() << '\n';
        return mlm::kExitConfig;
    }
    return mlm::run(a.config, std::cerr);
}
