#include "mlm/run.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "mlm/error.hpp"
#include "mlm/io.hpp"
#include "mlm/kernels.hpp"
#include "mlm/oracle.hpp"

namespace mlm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kVersion = "1.0.0";

constexpr std::array<std::pair<Command, std::string_view>, 6> kCommandNames{{
    {Command::fit, "fit"},
    {Command::path, "path"},
    {Command::cv, "cv"},
    {Command::simulate, "simulate"},
    {Command::bench, "bench"},
    {Command::kkt, "kkt"},
}};

// Tracks files written by one run so a failure can take them back.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        if (!fs::exists(dir_)) {
            if (!fs::create_directories(dir_, ec) || ec) data_error("cannot create " + dir_.string());
            created_dir_ = true;
        }
    }
    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;

    ~OutputSet() {
        if (committed_) return;
        std::error_code ec;
        for (const auto& name : names_) fs::remove(dir_ / name, ec);
        if (created_dir_) fs::remove(dir_, ec);  // only succeeds when empty
    }

    void text(const std::string& name, const std::string& content) {
        names_.push_back(name);
        std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
        if (!out) data_error("cannot write " + (dir_ / name).string());
        out << content;
        if (!out) data_error("failed writing " + (dir_ / name).string());
    }

    void matrix(const std::string& name, const Matrix& values,
                const std::vector<std::string>& cols = {}, const std::vector<std::string>& rows = {},
                std::string_view corner = "row") {
        text(name, io::matrix_to_csv(values, cols, rows, corner));
    }

    const std::vector<std::string>& names() const { return names_; }
    void commit() { committed_ = true; }

private:
    fs::path dir_;
    std::vector<std::string> names_;
    bool created_dir_ = false;
    bool committed_ = false;
};

std::vector<std::string> numbered(std::string_view stem, Eigen::Index count, int first = 1) {
    std::vector<std::string> out;
    for (Eigen::Index k = 0; k < count; ++k) out.push_back(std::string(stem) + std::to_string(k + first));
    return out;
}

struct LoadedProblem {
    MLMProblem prob;
    std::vector<std::string> x_labels;  // one per B row
    std::vector<std::string> z_labels;  // one per B column
};

std::vector<std::string> term_labels(const std::vector<std::string>& raw, Eigen::Index count,
                                     std::string_view stem, bool intercept) {
    std::vector<std::string> out;
    if (intercept) out.emplace_back("(intercept)");
    const auto base = raw.empty() ? numbered(stem, count) : raw;
    out.insert(out.end(), base.begin(), base.end());
    return out;
}

LoadedProblem load_problem(const RunConfig& config) {
    if (config.y_path.empty() || config.x_path.empty() || config.z_path.empty()) {
        config_error("--y, --x and --z are required for this command");
    }
    const io::LabeledMatrix Y = io::load_matrix(config.y_path, config.header, config.row_labels);
    const io::LabeledMatrix X = io::load_matrix(config.x_path, config.header, config.row_labels);
    const io::LabeledMatrix Z = io::load_matrix(config.z_path, config.header, config.row_labels);
    ProblemOptions options;
    options.intercept_x = config.intercept_x;
    options.intercept_z = config.intercept_z;
    options.standardize_x = options.standardize_z = config.standardize;
    MLMProblem prob(Y.values, X.values, Z.values, options);
    auto xl = term_labels(X.col_labels, X.values.cols(), "x", config.intercept_x);
    auto zl = term_labels(Z.col_labels, Z.values.cols(), "z", config.intercept_z);
    return {std::move(prob), std::move(xl), std::move(zl)};
}

constexpr std::string_view kCorner = "x_term\\z_term";

json fit_summary(const FitResult& f) {
    return {{"lambda", f.lambda},
            {"iterations", f.iterations},
            {"converged", f.converged},
            {"objective", f.final_objective},
            {"nnz", f.B.nnz()}};
}

json matrix_json(const Matrix& M) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_coefficients(OutputSet& out, json& results_file, const RunConfig& config,
                        const std::string& name, const LoadedProblem& lp, const Matrix& B) {
    if (config.format == OutputFormat::csv) {
        out.matrix(name + ".csv", B, lp.z_labels, lp.x_labels, kCorner);
    } else {
        results_file[name] = {{"rows", lp.x_labels}, {"cols", lp.z_labels}, {"values", matrix_json(B)}};
    }
}

void run_fit(const RunConfig& config, OutputSet& out, json& results, json& results_file,
             std::vector<std::string>& warnings) {
    const LoadedProblem lp = load_problem(config);
    const SolverWorkspace ws(lp.prob, needs_spectral(config.solver.algorithm));
    const double top = ws.lambda_max();
    const double lambda = config.lambda.value_or(config.lambda_fraction * top);
    const FitResult f = fit(lp.prob, lambda, config.solver, nullptr, &ws);
    if (!f.converged) warnings.push_back("solver did not converge within max_iter");
    write_coefficients(out, results_file, config, "coefficients", lp, f.B.values());
    results = fit_summary(f);
    results["lambda_max"] = top;
}

struct PathRun {
    LambdaPath path;
    PathFit fits;
};

PathRun fit_full_path(const RunConfig& config, const MLMProblem& prob) {
    PathRun pr;
    pr.path = default_lambda_path(prob, config.n_lambda, config.lambda_min_ratio);
    pr.fits = fit_path(prob, pr.path, config.solver);
    return pr;
}

void write_path(OutputSet& out, json& results, json& results_file, const RunConfig& config,
                const LoadedProblem& lp, const PathRun& pr, std::vector<std::string>& warnings) {
    Matrix summary(static_cast<Eigen::Index>(pr.fits.fits.size()), 6);
    json per_lambda = json::array();
    for (std::size_t k = 0; k < pr.fits.fits.size(); ++k) {
        const FitResult& f = pr.fits.fits[k];
        const auto r = static_cast<Eigen::Index>(k);
        summary.row(r) << static_cast<double>(k), f.lambda, static_cast<double>(f.B.nnz()),
            static_cast<double>(f.iterations), f.converged ? 1.0 : 0.0, f.final_objective;
        per_lambda.push_back(fit_summary(f));
        char name[32];
        std::snprintf(name, sizeof name, "lambda_%03zu", k);
        write_coefficients(out, results_file, config, std::string("coefficients_") + name, lp,
                           f.B.values());
        if (!f.converged) warnings.push_back("no convergence at lambda index " + std::to_string(k));
    }
    if (config.format == OutputFormat::csv) {
        out.matrix("path_summary.csv", summary,
                   {"index", "lambda", "nnz", "iterations", "converged", "objective"});
    } else {
        results_file["path_summary"] = per_lambda;
    }
    results["lambdas"] = pr.path.lambdas;
    results["nnz_per_lambda"] = pr.fits.nnz_per_lambda;
    results["converged"] = pr.fits.all_converged();
    results["total_iterations"] = pr.fits.total_iterations();
}

void run_path(const RunConfig& config, OutputSet& out, json& results, json& results_file,
              std::vector<std::string>& warnings) {
    const LoadedProblem lp = load_problem(config);
    const PathRun pr = fit_full_path(config, lp.prob);
    write_path(out, results, results_file, config, lp, pr, warnings);
}

void run_cv(const RunConfig& config, OutputSet& out, json& results, json& results_file,
            std::vector<std::string>& warnings) {
    const LoadedProblem lp = load_problem(config);
    const LambdaPath path = default_lambda_path(lp.prob, config.n_lambda, config.lambda_min_ratio);
    const CVResult cv = kfold_cv(lp.prob, path, config.solver, config.cv);
    const PathFit full = fit_path(lp.prob, path, config.solver);
    const FitResult& chosen = full.fits.at(cv.selected_index);
    if (!chosen.converged) warnings.push_back("no convergence at the selected lambda");

    const auto n_lambda = static_cast<Eigen::Index>(path.lambdas.size());
    Matrix summary(n_lambda, 3);
    for (Eigen::Index k = 0; k < n_lambda; ++k) {
        const auto u = static_cast<std::size_t>(k);
        summary.row(k) << static_cast<double>(k), path.lambdas[u], cv.mean_criterion[u];
    }
    if (config.format == OutputFormat::csv) {
        out.matrix("cv_criterion.csv", cv.criterion_matrix, numbered("lambda_", n_lambda, 0));
        out.matrix("cv_summary.csv", summary, {"index", "lambda", "mean_criterion"});
    } else {
        results_file["cv_criterion"] = matrix_json(cv.criterion_matrix);
        results_file["cv_mean_criterion"] = cv.mean_criterion;
    }
    write_coefficients(out, results_file, config, "coefficients", lp, chosen.B.values());
    results = fit_summary(chosen);
    results["selected_lambda"] = cv.selected_lambda;
    results["selected_index"] = cv.selected_index;
    results["criterion"] = to_string(config.cv.criterion);
    results["lambdas"] = path.lambdas;
    results["mean_criterion"] = cv.mean_criterion;
}

void write_simulated(OutputSet& out, const sim::Simulated& s) {
    const MLMProblem& prob = s.prob;
    const auto x_labels = numbered("x", prob.X_raw().cols());
    const auto z_labels = numbered("z", prob.Z_raw().cols());
    out.matrix("Y.csv", prob.Y(), numbered("y", prob.m()));
    out.matrix("X.csv", prob.X_raw(), x_labels);
    out.matrix("Z.csv", prob.Z_raw(), z_labels);
    out.matrix("B_true.csv", s.B_true.values(), term_labels(z_labels, 0, "z", true),
               term_labels(x_labels, 0, "x", true), kCorner);
}

void write_roc(OutputSet& out, const std::string& name, const sim::RocCurve& curve) {
    Matrix pts(static_cast<Eigen::Index>(curve.fpr.size()), 2);
    for (std::size_t k = 0; k < curve.fpr.size(); ++k) {
        pts.row(static_cast<Eigen::Index>(k)) << curve.fpr[k], curve.tpr[k];
    }
    out.matrix(name, pts, {"fpr", "tpr"});
}

void run_simulate(const RunConfig& config, OutputSet& out, json& results) {
    if (config.sim_kind == "mlm") {
        const sim::Simulated s = sim::simulate_mlm(config.sim);
        write_simulated(out, s);
        results["nnz_true"] = s.B_true.nnz();
        return;
    }
    if (config.sim_kind != "enviro") config_error("unknown simulation kind '" + config.sim_kind + "'");
    const sim::EnviroSimulated s = sim::simulate_enviro(config.enviro);
    write_simulated(out, s.data);
    results["nnz_true"] = s.data.B_true.nnz();
    if (!config.sim_roc) return;
    const LambdaPath path = default_lambda_path(s.data.prob, config.n_lambda, config.lambda_min_ratio);
    const PathFit fits = fit_path(s.data.prob, path, config.solver);
    const sim::RocCurve mlm_curve = sim::roc_from_path(fits, s.data.B_true, s.data.truth_region);
    write_roc(out, "roc_mlm.csv", mlm_curve);
    results["auc_mlm"] = mlm_curve.auc;
    const sim::UnivariateFit uni = sim::univariate_models(s);
    json aucs = json::array();
    for (Eigen::Index h = 1; h <= s.layout.n_tissue; ++h) {
        const sim::RocCurve c = sim::univariate_baseline(s, uni, static_cast<std::size_t>(h));
        write_roc(out, "roc_univariate_hits" + std::to_string(h) + ".csv", c);
        aucs.push_back(c.auc);
    }
    results["auc_univariate_by_hits"] = aucs;
}

void run_bench(const RunConfig& config, OutputSet& out, json& results) {
    if (config.bench_dims.empty()) config_error("bench needs at least one --dims entry");
    std::vector<Algorithm> algorithms = config.bench_algorithms;
    if (algorithms.empty()) algorithms = {Algorithm::fista_backtrack, Algorithm::admm};
    std::vector<SolverConfig> solvers;
    for (Algorithm a : algorithms) {
        SolverConfig s = config.solver;
        s.algorithm = a;
        solvers.push_back(s);
    }
    sim::TimingOptions options;
    options.n_reps = config.bench_reps;
    options.n_lambda = config.bench_n_lambda;
    options.lambda_min_ratio = config.lambda_min_ratio;
    options.seed = config.bench_seed;
    const auto rows = sim::timing_grid(config.bench_dims, solvers, options);

    Matrix table(static_cast<Eigen::Index>(rows.size()), 7);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& r = rows[k];
        table.row(static_cast<Eigen::Index>(k)) << static_cast<double>(r.dims.n),
            static_cast<double>(r.dims.m), static_cast<double>(r.dims.p),
            static_cast<double>(r.dims.q), static_cast<double>(static_cast<int>(r.algorithm)),
            r.mean_seconds, r.mean_iterations;
    }
    out.matrix("timing.csv", table, {"n", "m", "p", "q", "algorithm_id", "mean_seconds", "mean_iterations"});
    json ids = json::object();
    for (Algorithm a : algorithms) ids[std::string(to_string(a))] = static_cast<int>(a);
    results["algorithm_ids"] = ids;

    const bool have_pair =
        std::find(algorithms.begin(), algorithms.end(), Algorithm::fista_backtrack) != algorithms.end() &&
        std::find(algorithms.begin(), algorithms.end(), Algorithm::admm) != algorithms.end();
    if (have_pair) {
        Matrix ratios(static_cast<Eigen::Index>(config.bench_dims.size()), 5);
        for (std::size_t k = 0; k < config.bench_dims.size(); ++k) {
            const auto& d = config.bench_dims[k];
            ratios.row(static_cast<Eigen::Index>(k)) << static_cast<double>(d.n),
                static_cast<double>(d.m), static_cast<double>(d.p), static_cast<double>(d.q),
                sim::timing_ratio(rows, d, Algorithm::fista_backtrack, Algorithm::admm);
        }
        out.matrix("ratios.csv", ratios, {"n", "m", "p", "q", "fista_over_admm"});
    }
}

void run_kkt(const RunConfig& config, OutputSet& out, json& results) {
    if (config.coef_path.empty()) config_error("kkt needs --coef");
    if (!config.lambda) config_error("kkt needs --lambda");
    const LoadedProblem lp = load_problem(config);
    const io::LabeledMatrix coef = io::load_matrix(config.coef_path, true, true);
    if (coef.values.rows() != lp.prob.p() || coef.values.cols() != lp.prob.q()) {
        data_error("coefficient file must be p x q (including intercept terms)");
    }
    const CoefficientMatrix raw(coef.values, lp.prob.mask());
    const CoefficientMatrix working = to_working_scale(lp.prob, raw);
    const oracle::KktReport report =
        oracle::kkt_check(lp.prob, working.values(), *config.lambda, lp.prob.mask(), config.kkt_tol);
    Matrix table(static_cast<Eigen::Index>(report.violations.size()), 6);
    for (std::size_t k = 0; k < report.violations.size(); ++k) {
        const auto& v = report.violations[k];
        table.row(static_cast<Eigen::Index>(k)) << static_cast<double>(v.row),
            static_cast<double>(v.col), v.gradient, v.value, static_cast<double>(static_cast<int>(v.kind)),
            v.excess;
    }
    out.matrix("kkt_report.csv", table, {"row", "col", "gradient", "value", "kind", "excess"});
    results["ok"] = report.ok();
    results["violations"] = report.violations.size();
    results["max_excess"] = report.max_excess;
    results["kind_ids"] = {{"active", 0}, {"inactive", 1}, {"unpenalized", 2}};
}

json dims_json(const std::vector<sim::Dims>& dims) {
    json out = json::array();
    for (const auto& d : dims) out.push_back({d.n, d.m, d.p, d.q});
    return out;
}

}  // namespace

std::string_view to_string(Command command) {
    for (const auto& [value, name] : kCommandNames) {
        if (value == command) return name;
    }
    return "unknown";
}

Command parse_command(std::string_view name) {
    for (const auto& [value, label] : kCommandNames) {
        if (label == name) return value;
    }
    config_error("unknown command '" + std::string(name) + "'");
}

std::size_t default_workers() {
    if (const char* env = std::getenv("MLM_WORKERS")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value > 0) return static_cast<std::size_t>(value);
    }
    return 1;
}

json to_json(const RunConfig& c) {
    json j;
    j["command"] = to_string(c.command);
    j["inputs"] = {{"y", c.y_path}, {"x", c.x_path}, {"z", c.z_path},
                   {"header", c.header}, {"row_labels", c.row_labels}};
    j["model"] = {{"intercept_x", c.intercept_x}, {"intercept_z", c.intercept_z},
                  {"standardize", c.standardize}};
    const SolverConfig& s = c.solver;
    j["solver"] = {{"algorithm", to_string(s.algorithm)}, {"tol", s.tol},
                   {"max_iter", s.max_iter},          {"init_step", s.init_step},
                   {"gamma", s.gamma},                {"mu", s.mu},
                   {"tau_incr", s.tau_incr},          {"tau_decr", s.tau_decr},
                   {"adaptive_rho", s.adaptive_rho},  {"active_set", s.active_set},
                   {"rng_seed", s.rng_seed}};
    j["lambda"] = c.lambda ? json(*c.lambda) : json(nullptr);
    j["lambda_fraction"] = c.lambda_fraction;
    j["path"] = {{"n_lambda", c.n_lambda}, {"lambda_min_ratio", c.lambda_min_ratio}};
    j["cv"] = {{"n_folds", c.cv.n_folds}, {"criterion", to_string(c.cv.criterion)},
               {"fold_seed", c.cv.fold_seed}, {"workers", c.cv.workers}};
    j["format"] = c.format == OutputFormat::csv ? "csv" : "json";
    const auto& m = c.sim;
    j["simulate"] = {
        {"kind", c.sim_kind},
        {"roc", c.sim_roc},
        {"mlm", {{"n", m.n}, {"m", m.m}, {"p", m.p}, {"q", m.q},
                 {"frac_main_nonzero", m.frac_main_nonzero},
                 {"frac_inter_nonzero", m.frac_inter_nonzero},
                 {"effect_sd", m.effect_sd}, {"noise_sd", m.noise_sd},
                 {"standardize", m.standardize}, {"seed", m.seed}}},
        {"enviro", {{"n_chem", c.enviro.n_chem}, {"n_tissue", c.enviro.n_tissue},
                    {"n_subjects", c.enviro.n_subjects}, {"n_demog", c.enviro.n_demog},
                    {"frac_chem", c.enviro.frac_chem}, {"frac_demog", c.enviro.frac_demog},
                    {"frac_inter", c.enviro.frac_inter}, {"effect_sd", c.enviro.effect_sd},
                    {"noise_sd", c.enviro.noise_sd}, {"seed", c.enviro.seed}}}};
    json algs = json::array();
    for (Algorithm a : c.bench_algorithms) algs.push_back(to_string(a));
    j["bench"] = {{"dims", dims_json(c.bench_dims)}, {"algorithms", algs},
                  {"reps", c.bench_reps}, {"n_lambda", c.bench_n_lambda}, {"seed", c.bench_seed}};
    j["kkt"] = {{"coef", c.coef_path}, {"tol", c.kkt_tol}};
    return j;
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    c.command = parse_command(j.at("command").get<std::string>());
    const json& in = j.at("inputs");
    c.y_path = in.at("y");
    c.x_path = in.at("x");
    c.z_path = in.at("z");
    c.header = in.at("header");
    c.row_labels = in.at("row_labels");
    const json& model = j.at("model");
    c.intercept_x = model.at("intercept_x");
    c.intercept_z = model.at("intercept_z");
    c.standardize = model.at("standardize");
    const json& s = j.at("solver");
    c.solver.algorithm = parse_algorithm(s.at("algorithm").get<std::string>());
    c.solver.tol = s.at("tol");
    c.solver.max_iter = s.at("max_iter");
    c.solver.init_step = s.at("init_step");
    c.solver.gamma = s.at("gamma");
    c.solver.mu = s.at("mu");
    c.solver.tau_incr = s.at("tau_incr");
    c.solver.tau_decr = s.at("tau_decr");
    c.solver.adaptive_rho = s.at("adaptive_rho");
    c.solver.active_set = s.at("active_set");
    c.solver.rng_seed = s.at("rng_seed");
    if (!j.at("lambda").is_null()) c.lambda = j.at("lambda").get<double>();
    c.lambda_fraction = j.at("lambda_fraction");
    c.n_lambda = j.at("path").at("n_lambda");
    c.lambda_min_ratio = j.at("path").at("lambda_min_ratio");
    const json& cv = j.at("cv");
    c.cv.n_folds = cv.at("n_folds");
    c.cv.criterion = parse_criterion(cv.at("criterion").get<std::string>());
    c.cv.fold_seed = cv.at("fold_seed");
    c.cv.workers = cv.at("workers");
    c.format = j.at("format") == "json" ? OutputFormat::json : OutputFormat::csv;
    const json& sim = j.at("simulate");
    c.sim_kind = sim.at("kind");
    c.sim_roc = sim.at("roc");
    const json& m = sim.at("mlm");
    c.sim.n = m.at("n");
    c.sim.m = m.at("m");
    c.sim.p = m.at("p");
    c.sim.q = m.at("q");
    c.sim.frac_main_nonzero = m.at("frac_main_nonzero");
    c.sim.frac_inter_nonzero = m.at("frac_inter_nonzero");
    c.sim.effect_sd = m.at("effect_sd");
    c.sim.noise_sd = m.at("noise_sd");
    c.sim.standardize = m.at("standardize");
    c.sim.seed = m.at("seed");
    const json& e = sim.at("enviro");
    c.enviro.n_chem = e.at("n_chem");
    c.enviro.n_tissue = e.at("n_tissue");
    c.enviro.n_subjects = e.at("n_subjects");
    c.enviro.n_demog = e.at("n_demog");
    c.enviro.frac_chem = e.at("frac_chem");
    c.enviro.frac_demog = e.at("frac_demog");
    c.enviro.frac_inter = e.at("frac_inter");
    c.enviro.effect_sd = e.at("effect_sd");
    c.enviro.noise_sd = e.at("noise_sd");
    c.enviro.seed = e.at("seed");
    const json& b = j.at("bench");
    for (const auto& d : b.at("dims")) c.bench_dims.push_back({d.at(0), d.at(1), d.at(2), d.at(3)});
    for (const auto& a : b.at("algorithms")) c.bench_algorithms.push_back(parse_algorithm(a.get<std::string>()));
    c.bench_reps = b.at("reps");
    c.bench_n_lambda = b.at("n_lambda");
    c.bench_seed = b.at("seed");
    c.coef_path = j.at("kkt").at("coef");
    c.kkt_tol = j.at("kkt").at("tol");
    return c;
}

int run(const RunConfig& config, std::ostream& log) {
    try {
        config.solver.validate();
        OutputSet out(config.out_dir);
        json results = json::object();
        json results_file = json::object();
        std::vector<std::string> warnings;
        switch (config.command) {
            case Command::fit: run_fit(config, out, results, results_file, warnings); break;
            case Command::path: run_path(config, out, results, results_file, warnings); break;
            case Command::cv: run_cv(config, out, results, results_file, warnings); break;
            case Command::simulate: run_simulate(config, out, results); break;
            case Command::bench: run_bench(config, out, results); break;
            case Command::kkt: run_kkt(config, out, results); break;
        }
        if (!results_file.empty()) out.text("results.json", results_file.dump(2) + "\n");
        json manifest;
        manifest["tool"] = "mlm";
        manifest["version"] = kVersion;
        manifest["kernels"] = kernels::active().name;
        manifest["config"] = to_json(config);
        manifest["results"] = results;
        manifest["warnings"] = warnings;
        manifest["files"] = out.names();
        out.text("manifest.json", manifest.dump(2) + "\n");
        for (const auto& w : warnings) log << "warning: " << w << '\n';
        out.commit();
        return kExitOk;
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        switch (e.kind()) {
            case ErrorKind::config: return kExitConfig;
            case ErrorKind::data: return kExitData;
            case ErrorKind::numerical: return kExitNumerical;
        }
        return kExitNumerical;
    } catch (const nlohmann::json::exception& e) {
        log << "error: bad configuration: " << e.what() << '\n';
        return kExitConfig;
    } catch (const fs::filesystem_error& e) {
        log << "error: " << e.what() << '\n';
        return kExitData;
    }
}

}  // namespace mlm
