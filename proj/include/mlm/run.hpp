#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlm/cv.hpp"
#include "mlm/sim.hpp"

namespace mlm {

enum class Command { fit, path, cv, simulate, bench, kkt };
enum class OutputFormat { csv, json };

std::string_view to_string(Command command);
Command parse_command(std::string_view name);

/// Everything one CLI invocation needs. The manifest written by run() echoes
/// this (minus the output directory) so a run can be replayed from it.
struct RunConfig {
    Command command = Command::fit;

    std::string y_path;
    std::string x_path;
    std::string z_path;
    bool header = false;
    bool row_labels = false;
    bool intercept_x = true;
    bool intercept_z = true;
    bool standardize = true;

    SolverConfig solver;
    std::optional<double> lambda;     // fit/kkt; fit defaults to lambda_fraction * lambda_max
    double lambda_fraction = 0.1;
    std::size_t n_lambda = 50;
    double lambda_min_ratio = 1e-3;
    CVConfig cv;

    std::string out_dir = "mlm_out";
    OutputFormat format = OutputFormat::csv;

    std::string sim_kind = "mlm";  // mlm | enviro
    sim::SimSpec sim;
    sim::EnviroSpec enviro;
    bool sim_roc = false;          // enviro: also write MLM and univariate ROC curves

    std::vector<sim::Dims> bench_dims;
    std::vector<Algorithm> bench_algorithms;
    std::size_t bench_reps = 1;
    std::size_t bench_n_lambda = 20;
    std::uint64_t bench_seed = 0;

    std::string coef_path;         // kkt: coefficients on the raw scale
    double kkt_tol = 1e-6;
};

nlohmann::json to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumerical = 4;

/// Executes one command, writing its artifacts into config.out_dir. Files
/// written by a failed run are removed. Returns an exit code; diagnostics
/// go to `log`.
int run(const RunConfig& config, std::ostream& log);

/// Worker default from MLM_WORKERS, else 1.
std::size_t default_workers();

}  // namespace mlm
