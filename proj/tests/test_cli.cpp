#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mlm/io.hpp"
#include "mlm/run.hpp"
#include "support.hpp"

using namespace mlm;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("mlm_cli_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json manifest(const fs::path& dir) { return json::parse(slurp(dir / "manifest.json")); }

int run_quiet(const RunConfig& c) {
    std::ostringstream log;
    return run(c, log);
}

int shell(const std::string& args) {
    const std::string cmd = std::string(MLM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

/// Simulated strong-signal data written to disk through the simulate command.
RunConfig simulated_inputs(const fs::path& data_dir) {
    RunConfig sim;
    sim.command = Command::simulate;
    sim.sim.n = 40;
    sim.sim.m = 20;
    sim.sim.p = 5;
    sim.sim.q = 4;
    sim.sim.seed = 21;
    sim.out_dir = data_dir.string();
    REQUIRE(run_quiet(sim) == kExitOk);
    RunConfig c;
    c.y_path = (data_dir / "Y.csv").string();
    c.x_path = (data_dir / "X.csv").string();
    c.z_path = (data_dir / "Z.csv").string();
    c.header = true;
    return c;
}

}  // namespace

TEST_CASE("config survives a JSON round trip") {
    RunConfig c;
    c.command = Command::cv;
    c.lambda = 0.25;
    c.solver.algorithm = Algorithm::admm;
    c.solver.tol = 1e-9;
    c.cv.criterion = CvCriterion::bic;
    c.bench_dims = {{10, 20, 3, 4}};
    c.bench_algorithms = {Algorithm::ista};
    c.sim_kind = "enviro";
    c.enviro.n_chem = 7;
    const RunConfig back = config_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));
    CHECK(back.lambda == 0.25);
    CHECK(parse_command("kkt") == Command::kkt);
}

TEST_CASE("fit at lambda_max writes zeros at penalized entries") {
    const fs::path data = scratch("fit_data");
    RunConfig c = simulated_inputs(data);
    c.command = Command::fit;
    c.lambda_fraction = 1.0;
    c.out_dir = scratch("fit_out").string();
    REQUIRE(run_quiet(c) == kExitOk);
    const auto B = io::load_matrix(fs::path(c.out_dir) / "coefficients.csv", true, true);
    REQUIRE(B.values.rows() == 5);
    REQUIRE(B.values.cols() == 4);
    CHECK(B.row_labels.front() == "(intercept)");
    CHECK(B.values.bottomRightCorner(4, 3).isZero(0.0));
    CHECK(B.values(0, 0) != 0.0);
    const json m = manifest(c.out_dir);
    CHECK(m["results"]["nnz"] == 0);
    CHECK(m["results"]["converged"] == true);
    fs::remove_all(data);
    fs::remove_all(c.out_dir);
}

TEST_CASE("path and kkt commands") {
    const fs::path data = scratch("path_data");
    RunConfig c = simulated_inputs(data);
    c.command = Command::path;
    c.n_lambda = 6;
    c.solver.tol = 1e-10;
    c.out_dir = scratch("path_out").string();
    REQUIRE(run_quiet(c) == kExitOk);
    const auto summary = io::load_matrix(fs::path(c.out_dir) / "path_summary.csv", true);
    REQUIRE(summary.values.rows() == 6);
    CHECK(summary.values(0, 2) == 0.0);
    CHECK(fs::exists(fs::path(c.out_dir) / "coefficients_lambda_005.csv"));

    RunConfig k = c;
    k.command = Command::kkt;
    k.coef_path = (fs::path(c.out_dir) / "coefficients_lambda_003.csv").string();
    k.lambda = summary.values(3, 1);
    k.kkt_tol = 1e-6;
    k.out_dir = scratch("kkt_out").string();
    REQUIRE(run_quiet(k) == kExitOk);
    CHECK(manifest(k.out_dir)["results"]["ok"] == true);

    k.lambda = 0.5 * *k.lambda;
    REQUIRE(run_quiet(k) == kExitOk);
    CHECK(manifest(k.out_dir)["results"]["ok"] == false);
    for (const auto& d : {data.string(), c.out_dir, k.out_dir}) fs::remove_all(d);
}

TEST_CASE("cv manifest matches the library result") {
    const fs::path data = scratch("cv_data");
    RunConfig c = simulated_inputs(data);
    c.command = Command::cv;
    c.n_lambda = 10;
    c.cv.n_folds = 5;
    c.out_dir = scratch("cv_out").string();
    REQUIRE(run_quiet(c) == kExitOk);
    const auto Y = io::load_matrix(c.y_path, true).values;
    const auto X = io::load_matrix(c.x_path, true).values;
    const auto Z = io::load_matrix(c.z_path, true).values;
    const MLMProblem prob = build_problem(Y, X, Z, true, true, true);
    const LambdaPath path = default_lambda_path(prob, 10, c.lambda_min_ratio);
    const CVResult cv = kfold_cv(prob, path, c.solver, c.cv);
    const json m = manifest(c.out_dir);
    CHECK(m["results"]["selected_lambda"].get<double>() == cv.selected_lambda);
    CHECK(m["results"]["selected_index"].get<std::size_t>() == cv.selected_index);
    CHECK(fs::exists(fs::path(c.out_dir) / "cv_criterion.csv"));
    fs::remove_all(data);
    fs::remove_all(c.out_dir);
}

TEST_CASE("json output format") {
    const fs::path data = scratch("json_data");
    RunConfig c = simulated_inputs(data);
    c.command = Command::fit;
    c.lambda_fraction = 0.2;
    c.format = OutputFormat::json;
    c.out_dir = scratch("json_out").string();
    REQUIRE(run_quiet(c) == kExitOk);
    const json r = json::parse(slurp(fs::path(c.out_dir) / "results.json"));
    CHECK(r["coefficients"]["values"].size() == 5);
    CHECK(!fs::exists(fs::path(c.out_dir) / "coefficients.csv"));
    fs::remove_all(data);
    fs::remove_all(c.out_dir);
}

TEST_CASE("failures clean up and map to exit codes") {
    RunConfig c;
    c.command = Command::fit;
    c.y_path = "/nonexistent/Y.csv";
    c.x_path = "/nonexistent/X.csv";
    c.z_path = "/nonexistent/Z.csv";
    c.out_dir = scratch("fail_out").string();
    CHECK(run_quiet(c) == kExitData);
    CHECK(!fs::exists(c.out_dir));

    c.solver.gamma = 2.0;
    CHECK(run_quiet(c) == kExitConfig);

    RunConfig k;
    k.command = Command::kkt;
    k.out_dir = c.out_dir;
    CHECK(run_quiet(k) == kExitConfig);
}

TEST_CASE("binary: exit codes, replay and byte-identical reruns") {
    CHECK(shell("--help") == 0);
    CHECK(shell("") == kExitConfig);
    CHECK(shell("fit --y a --x b") == kExitConfig);
    CHECK(shell("fit --y /no/Y --x /no/X --z /no/Z --out " + scratch("bin_fail").string()) == kExitData);
    CHECK(shell("fit --y a --x b --z c --solver lars") == kExitConfig);

    const fs::path a = scratch("bin_a"), b = scratch("bin_b"), r = scratch("bin_replay");
    const std::string args = "simulate --n 30 --m 12 --p 4 --q 3 --seed 4 --out ";
    REQUIRE(shell(args + a.string()) == 0);
    REQUIRE(shell(args + b.string()) == 0);
    for (const auto& entry : fs::directory_iterator(a)) {
        CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
    }
    REQUIRE(shell("replay " + (a / "manifest.json").string() + " --out " + r.string()) == 0);
    for (const auto& entry : fs::directory_iterator(a)) {
        CHECK(slurp(entry.path()) == slurp(r / entry.path().filename()));
    }
    for (const auto& d : {a, b, r}) fs::remove_all(d);
}
