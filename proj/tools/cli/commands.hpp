#pragma once

// Subcommands of the regretfolio executable. Each cmd_* returns a process
// exit status: 0 ok, 1 validation or usage, 2 IO, 3 solver failure.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace regretfolio::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kSolver = 3 };

struct RunConfig {
    std::string command;
    std::string dataset;
    std::string out;
    std::uint64_t seed = 42;
    std::size_t n_assets = 15;
    std::size_t n_points = 60;
    std::string technique = "all";
    double cap = 0.03;
    double lambda = 3.5;
    double fraction = 0.2;
    std::string sign_mode = "standard";
    std::string mode = "absolute";
    std::size_t multistart = 8;
    int iterations = 2000;
    int max_iters = 5000;
    double tol = 1e-9;
    std::optional<double> ref_return;
    std::optional<double> ref_variance;
    std::vector<std::string> scenario;
    std::vector<std::string> robust;

    /// Resolved settings as written to manifest.json.
    nlohmann::json to_json() const;
};

/// Defaults, then `config` (unknown keys rejected), then `flags`.
RunConfig resolve_config(const std::string& command, const nlohmann::json& config,
                         const nlohmann::json& flags);

int cmd_generate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_benchmarks(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_front(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_robust(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full argument vector including the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace regretfolio::cli
